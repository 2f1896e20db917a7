"""Command-line entry point.

    socbloch <exact|evolve|sweep-region|sweep-imbalance|sweep-current|validate>
             --config FILE [--set k=v ...] [--seed N] [--out DIR] [--no-plot]

The environment variable SOCBLOCH_OUT overrides --out. Exit codes: 0 ok,
1 validation failure, 2 config/condition error, 3 numerical runaway.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import plotting
from .config import RunConfig, load_config, resolve_config
from .diagnostics import density_zero_scan, stationary_residual
from .errors import (
    ConditionViolated,
    InvalidConfig,
    InvalidGrid,
    NumericalBlowup,
    SingularCoupling,
    UnphysicalPopulation,
)
from .evolver import MODE_DRIVEN, SpinorField, evolve, exact_initial_field
from .params import critical_depth, derive_conditions, validate_regime
from .states import StateProfile, coefficients, spin_entanglement, well_populations
from .sweeps import (
    current_sweep,
    gamma_full_transfer,
    gamma_zero_current,
    imbalance_sweep,
    region_sweep,
    write_current_csv,
    write_imbalance_csv,
    write_region_csv,
)
from .validation import run_validation, suite_passed

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_json(doc: dict, path: Path) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")


def _prepare(cfg: RunConfig, out_flag: str | None) -> Path:
    out = os.environ.get("SOCBLOCH_OUT") or out_flag or cfg.output_dir
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(cfg.echo(), out_dir / "resolved_config.json")
    return out_dir


def _require_regime(cfg: RunConfig) -> None:
    """Raise ConditionViolated naming the first failed hard condition."""
    report = validate_regime(cfg.params)
    for check in report.failures:
        raise ConditionViolated(
            f"condition {check.name} failed: value {check.value:.9g}, "
            f"threshold {check.threshold:.9g}"
        )
    for check in report.warnings:
        print(
            f"warning: {check.name}: value {check.value:g} below {check.threshold:g}",
            file=sys.stderr,
        )


def cmd_exact(cfg: RunConfig, out_flag: str | None) -> int:
    out_dir = _prepare(cfg, out_flag)
    _require_regime(cfg)
    p = cfg.params
    c = coefficients(p)
    depth = critical_depth(p)
    derived = derive_conditions(p)
    rho, entropy = spin_entanglement(p)
    zeros = density_zero_scan(p, M=cfg.grid.M)
    profile = StateProfile.from_params(p, cfg.grid)
    profile.write_csv(out_dir / "state_profile.csv")

    field = SpinorField(cfg.grid, profile.psi)
    residual = stationary_residual(field, p)

    N1, N2 = well_populations(p)
    summary = {
        "mu": c.mu,
        "coefficients": {"a": list(c.a), "b": list(c.b)},
        "Vc": depth.Vc,
        "Vc_branch": depth.branch,
        "gamma_max": derived.gamma_max,
        "gamma_eff": list(derived.gamma_eff),
        "mu_eff": list(derived.mu_eff),
        "N1": N1,
        "N2": N2,
        "imbalance": N1 - N2,
        "currents_plus": list(c.currents),
        "currents_minus": [-v for v in c.currents],
        "spin_density_matrix": rho.tolist(),
        "spin_entropy": entropy,
        "zero_density_points": [{"component": j, "x": x} for j, x in zeros],
        "stationary_residual_max": residual.max_residual,
        "conditions": validate_regime(p).as_dict(),
    }
    _write_json(summary, out_dir / "exact_summary.json")

    if cfg.plot:
        plotting.plot_profile(profile, out_dir / "state_profile.png")
    return EXIT_OK


def cmd_evolve(cfg: RunConfig, out_flag: str | None) -> int:
    out_dir = _prepare(cfg, out_flag)
    p = cfg.params
    regime = validate_regime(p)

    if cfg.initial_profile is not None:
        profile = StateProfile.read_csv(cfg.initial_profile)
        if len(profile.x) != cfg.grid.N:
            raise InvalidGrid(
                f"initial profile has {len(profile.x)} points, grid expects {cfg.grid.N}"
            )
        initial = SpinorField(cfg.grid, profile.psi)
    else:
        _require_regime(cfg)
        initial = exact_initial_field(p, coefficients(p), cfg.grid)

    reference = coefficients(p) if regime.ok else None
    traj = evolve(initial, p, cfg.evolve, reference=reference)
    traj.write_csv(out_dir / "trajectory.csv")

    meta = {
        "mode": traj.mode,
        "dt": traj.dt,
        "t_final": traj.times[-1],
        "samples": len(traj.times),
        "norm_drift_max": float(np.max(np.abs(traj.norm_total - traj.norm_total[0]))),
        "reference_supplied": reference is not None,
    }
    if traj.mode == MODE_DRIVEN and cfg.evolve.stroboscopic:
        meta["stroboscopic"] = True
        meta["note"] = (
            "samples taken at integer drive periods where the gauge phase "
            "vanishes, so gauge-frame and lab-frame states coincide"
        )
    if reference is not None:
        meta["dev_density_max"] = float(np.nanmax(traj.dev_density))
        meta["dev_state_max"] = float(np.nanmax(traj.dev_state))
        meta["dev_state_phase_free_max"] = float(np.nanmax(traj.dev_state_free))
    if traj.mode != MODE_DRIVEN:
        meta["energy_drift_max"] = float(np.max(np.abs(traj.energy - traj.energy[0])))
    _write_json(meta, out_dir / "evolve_metadata.json")

    if cfg.snapshot_every > 0 and traj.fields is not None:
        for i in range(0, len(traj.fields), cfg.snapshot_every):
            snap = StateProfile.from_fields(cfg.grid.x, traj.fields[i], p.V0)
            snap.write_csv(out_dir / f"snapshot_{i:05d}.csv")

    if cfg.plot:
        plotting.plot_trajectory(traj, out_dir / "trajectory.png")
    return EXIT_OK


def _sweep_gammas(cfg: RunConfig, command: str) -> list[float]:
    if cfg.sweep is None:
        raise InvalidConfig(f"{command} requires a 'sweep' section")
    if cfg.sweep.axis != "gamma":
        raise InvalidConfig(f"{command} sweeps the gamma axis, got {cfg.sweep.axis!r}")
    return cfg.sweep.values()


def cmd_sweep_region(cfg: RunConfig, out_flag: str | None) -> int:
    out_dir = _prepare(cfg, out_flag)
    gammas = _sweep_gammas(cfg, "sweep-region")
    Gamma_values = list(cfg.sweep.Gamma_values) or [cfg.params.Gamma]
    curves = region_sweep(cfg.params, gammas, Gamma_values)
    for curve in curves:
        write_region_csv(curve, out_dir / f"sweep_region_Gamma_{curve.Gamma:g}.csv")
    summary = {
        "Gamma_values": Gamma_values,
        "Vc_at_zero_soc": abs(cfg.params.g + cfg.params.g12) * cfg.params.Nt,
        "files": [f"sweep_region_Gamma_{G:g}.csv" for G in Gamma_values],
    }
    _write_json(summary, out_dir / "sweep_region_summary.json")
    if cfg.plot:
        plotting.plot_region(curves, out_dir / "sweep_region.png")
    return EXIT_OK


def cmd_sweep_imbalance(cfg: RunConfig, out_flag: str | None) -> int:
    out_dir = _prepare(cfg, out_flag)
    gammas = _sweep_gammas(cfg, "sweep-imbalance")
    rows = imbalance_sweep(cfg.params, gammas)
    write_imbalance_csv(rows, out_dir / "sweep_imbalance.csv")
    full = gamma_full_transfer(cfg.params)
    sign = 1.0 if cfg.params.g > cfg.params.g12 else -1.0
    summary = {
        "gamma_full_transfer": full,
        "imbalance_at_full_transfer": sign * cfg.params.Nt,
    }
    _write_json(summary, out_dir / "sweep_imbalance_summary.json")
    if cfg.plot:
        plotting.plot_imbalance(rows, out_dir / "sweep_imbalance.png")
    return EXIT_OK


def cmd_sweep_current(cfg: RunConfig, out_flag: str | None) -> int:
    out_dir = _prepare(cfg, out_flag)
    gammas = _sweep_gammas(cfg, "sweep-current")
    rows = current_sweep(cfg.params, gammas)
    write_current_csv(rows, out_dir / "sweep_current.csv")
    summary = {"gamma_zero_current": gamma_zero_current(cfg.params)}
    _write_json(summary, out_dir / "sweep_current_summary.json")
    if cfg.plot:
        plotting.plot_current(rows, out_dir / "sweep_current.png")
    return EXIT_OK


def cmd_validate(cfg: RunConfig, out_flag: str | None) -> int:
    out_dir = _prepare(cfg, out_flag)
    results = run_validation(
        cfg.params, cfg.grid, seed=cfg.seed, mu_override=cfg.mu_override
    )
    passed = suite_passed(results)
    failures = [r for r in results if not r.passed and not r.warning]
    warnings = [r for r in results if not r.passed and r.warning]
    report = {
        "passed": passed,
        "n_checks": len(results),
        "n_failed": len(failures),
        "n_warnings": len(warnings),
        "seed": cfg.seed,
        "mu_override": cfg.mu_override,
        "checks": [r.as_dict() for r in results],
    }
    _write_json(report, out_dir / "validation_report.json")
    for r in failures:
        print(
            f"FAIL {r.name} [{r.label}]: measured {r.measured:.6g}, "
            f"tolerance {r.tolerance:.6g}",
            file=sys.stderr,
        )
    for r in warnings:
        print(f"warning: {r.name} [{r.label}]: {r.measured:g}", file=sys.stderr)
    print(f"validation: {len(results) - len(failures)}/{len(results)} checks passed")
    return EXIT_OK if passed else EXIT_VALIDATION


_COMMANDS = {
    "exact": cmd_exact,
    "evolve": cmd_evolve,
    "sweep-region": cmd_sweep_region,
    "sweep-imbalance": cmd_sweep_imbalance,
    "sweep-current": cmd_sweep_current,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socbloch",
        description="Closed-form Bloch states and split-step dynamics of a "
        "driven spin-orbit-coupled lattice BEC",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON config file")
        sp.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config entry via dotted path (repeatable)",
        )
        sp.add_argument("--seed", type=int, default=None, help="randomized-check seed")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_config(args.config, args.set)
        if args.seed is not None:
            doc["seed"] = args.seed
        if args.no_plot:
            doc["plot"] = False
        cfg = resolve_config(doc)
        code = _COMMANDS[args.command](cfg, args.out)
    except (InvalidConfig, ConditionViolated, UnphysicalPopulation, SingularCoupling,
            InvalidGrid, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalBlowup as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return code


if __name__ == "__main__":
    sys.exit(main())
