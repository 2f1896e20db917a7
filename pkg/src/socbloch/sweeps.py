"""Parameter-sweep engines behind the CLI subcommands.

Each engine produces deterministic row lists (computed in input order) plus
closed-form endpoint annotations: the SOC strength of full population
transfer and the SOC strength where the weaker component's current vanishes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

from .errors import ConditionViolated, UnphysicalPopulation
from .params import (
    PhysicalParams,
    critical_depth,
    max_soc_strength,
    soc_strength_for_shift,
)
from .states import coefficients, well_populations

_REGION_COLUMNS = ("gamma", "Vc")
_IMBALANCE_COLUMNS = ("gamma", "N1", "N2", "imbalance")
_CURRENT_COLUMNS = ("gamma", "J1p", "J2p", "J1m", "J2m")


def gamma_full_transfer(p: PhysicalParams) -> float:
    """SOC strength at which one component empties (|N1 - N2| = Nt)."""
    return max_soc_strength(p)


def gamma_zero_current(p: PhysicalParams) -> float | None:
    """SOC strength at which the weaker component's current vanishes.

    Solves b_j = 0 for the binding component at fixed V0, i.e.
    gamma sqrt(Gamma^2 + gamma^2) = (Nt/2 - V0/(2(g+g12))) |g - g12|.
    Returns None when V0 exceeds the zero-SOC critical depth (no such point).
    """
    target = (0.5 * p.Nt - p.V0 / (2.0 * (p.g + p.g12))) * abs(p.g - p.g12)
    if target < 0:
        return None
    return soc_strength_for_shift(target, p.Gamma)


@dataclass(frozen=True)
class RegionCurve:
    """Existence-boundary curve Vc(gamma) for one Rabi strength."""

    Gamma: float
    rows: list[tuple[float, float | None]]  # (gamma, Vc or None beyond gamma_max)


def region_sweep(
    p: PhysicalParams, gammas: list[float], Gamma_values: list[float]
) -> list[RegionCurve]:
    """Critical depth versus SOC strength, one curve per Rabi strength.

    Rows with gamma beyond the population bound carry Vc = None.
    """
    curves = []
    for G in Gamma_values:
        rows: list[tuple[float, float | None]] = []
        for gamma in gammas:
            pw = replace(p, Gamma=G, gamma=gamma, xi=p.omega * math.hypot(G, gamma))
            try:
                rows.append((gamma, critical_depth(pw).Vc))
            except UnphysicalPopulation:
                rows.append((gamma, None))
        curves.append(RegionCurve(Gamma=G, rows=rows))
    return curves


def imbalance_sweep(
    p: PhysicalParams, gammas: list[float]
) -> list[tuple[float, float | None, float | None, float | None]]:
    """Per-well populations versus SOC strength; rows beyond gamma_max are empty."""
    rows = []
    for gamma in gammas:
        pw = replace(p, gamma=gamma, xi=p.omega * math.hypot(p.Gamma, gamma))
        try:
            N1, N2 = well_populations(pw)
            rows.append((gamma, N1, N2, N1 - N2))
        except UnphysicalPopulation:
            rows.append((gamma, None, None, None))
    return rows


def current_sweep(
    p: PhysicalParams, gammas: list[float]
) -> list[tuple[float, float | None, float | None, float | None, float | None]]:
    """Both current branches versus SOC strength; invalid rows are flagged empty."""
    rows = []
    for gamma in gammas:
        pw = replace(p, gamma=gamma, xi=p.omega * math.hypot(p.Gamma, gamma))
        try:
            c = coefficients(pw)
            J1, J2 = c.currents
            rows.append((gamma, J1, J2, -J1, -J2))
        except ConditionViolated:
            rows.append((gamma, None, None, None, None))
    return rows


def _fmt(value) -> str:
    return "" if value is None else repr(float(value))


def write_region_csv(curve: RegionCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_REGION_COLUMNS)
        for gamma, Vc in curve.rows:
            w.writerow([_fmt(gamma), _fmt(Vc)])


def write_imbalance_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_IMBALANCE_COLUMNS)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_current_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_CURRENT_COLUMNS)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
