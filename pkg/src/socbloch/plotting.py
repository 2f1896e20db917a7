"""Figure rendering for the report path.

Every CLI subcommand that writes CSV data can also render a matplotlib figure
next to it (PNG, Agg backend). The CSV files remain the data contract; the
figures are a convenience view of the same rows.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_STYLES = ("-", "--", ":", "-.")


def plot_profile(profile, path, title: str = "") -> None:
    """Densities of both components with the lattice potential overlaid."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(profile.x, profile.density[0], "-", label=r"$R_1^2$")
    ax.plot(profile.x, profile.density[1], "--", label=r"$R_2^2$")
    ax.plot(profile.x, profile.potential, ":", color="gray", label=r"$V(x)$")
    ax.set_xlabel(r"$x$")
    ax.set_ylabel("density / potential")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    ax.set_xlim(profile.x[0], profile.x[-1])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_region(curves, path) -> None:
    """Existence-boundary curves Vc(gamma), one per Rabi strength."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, curve in enumerate(curves):
        gam = [g for g, v in curve.rows if v is not None]
        vc = [v for _, v in curve.rows if v is not None]
        ax.plot(gam, vc, _STYLES[i % len(_STYLES)], label=rf"$\Gamma={curve.Gamma:g}$")
    ax.set_xlabel(r"$\gamma$")
    ax.set_ylabel(r"$V_c$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_imbalance(rows, path) -> None:
    """Population imbalance N1 - N2 versus SOC strength."""
    gam = [r[0] for r in rows if r[3] is not None]
    imb = [r[3] for r in rows if r[3] is not None]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(gam, imb, "-")
    ax.set_xlabel(r"$\gamma$")
    ax.set_ylabel(r"$N_1 - N_2$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_current(rows, path) -> None:
    """Both branches of the superfluid currents versus SOC strength."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    labels = (r"$J_{1+}$", r"$J_{2+}$", r"$J_{1-}$", r"$J_{2-}$")
    for idx, label in zip(range(1, 5), labels):
        gam = [r[0] for r in rows if r[idx] is not None]
        val = [r[idx] for r in rows if r[idx] is not None]
        ax.plot(gam, val, _STYLES[(idx - 1) % len(_STYLES)], label=label)
    ax.axhline(0.0, color="gray", lw=0.6)
    ax.set_xlabel(r"$\gamma$")
    ax.set_ylabel(r"$J$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trajectory(traj, path) -> None:
    """Conserved quantities and deviations along one evolution run."""
    fig, axes = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)
    ax = axes[0]
    ax.plot(traj.times, traj.N1, "-", label=r"$N_1$")
    ax.plot(traj.times, traj.N2, "--", label=r"$N_2$")
    ax.plot(traj.times, traj.norm_total, ":", label="total")
    ax.set_ylabel("per-well atoms")
    ax.legend(fontsize=8)

    ax = axes[1]
    if np.any(np.isfinite(traj.dev_density)):
        ax.semilogy(traj.times, np.maximum(traj.dev_density, 1e-18), "-", label="dev density")
        ax.semilogy(traj.times, np.maximum(traj.dev_state, 1e-18), "--", label="dev state")
        ax.legend(fontsize=8)
        ax.set_ylabel("deviation")
    else:
        drift = np.abs(traj.norm_total - traj.norm_total[0])
        ax.semilogy(traj.times, np.maximum(drift, 1e-18), "-", label="norm drift")
        ax.legend(fontsize=8)
        ax.set_ylabel("drift")
    ax.set_xlabel(r"$t$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
