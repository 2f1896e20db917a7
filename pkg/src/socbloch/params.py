"""Physical parameters and closed-form derived quantities of the driven
spin-orbit-coupled two-component lattice condensate.

Everything is dimensionless (recoil units: energies in E_r, lengths in 1/k,
times in inverse recoil frequency). Component index j runs over 1, 2 and
enters sign conventions through (-1)^j, so component 1 carries -gamma and
component 2 carries +gamma in the recombined SOC strengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import SingularCoupling, UnphysicalPopulation

# Drive frequencies below this are outside the averaging regime; flagged as a
# warning, never an error.
OMEGA_MIN_WARN = 10.0

# Relative tolerance on the drive-ratio matching condition. The CLI derives
# xi from omega, so no slack is needed beyond round-off.
RATIO_RTOL = 1e-12

# Relative slack for "population exactly zero" boundary cases.
_POP_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensionless system constants.

    gamma : SOC strength (>= 0)
    Gamma : Rabi coupling strength (>= 0)
    g     : intra-species interaction
    g12   : inter-species interaction
    V0    : lattice depth (>= 0)
    Nt    : average total atoms per lattice well (> 0)
    omega : drive frequency (> 0)
    xi    : drive strength (lattice tilt amplitude)
    """

    gamma: float
    Gamma: float
    g: float
    g12: float
    V0: float
    Nt: float
    omega: float
    xi: float

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.Gamma < 0:
            raise ValueError(f"Gamma must be >= 0, got {self.Gamma}")
        if self.V0 < 0:
            raise ValueError(f"V0 must be >= 0, got {self.V0}")
        if self.Nt <= 0:
            raise ValueError(f"Nt must be > 0, got {self.Nt}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.gamma != 0 and self.g == self.g12:
            raise SingularCoupling(
                "g == g12 with nonzero gamma makes the population imbalance singular"
            )
        if self.V0 != 0 and self.g + self.g12 == 0:
            raise SingularCoupling("g + g12 == 0 with nonzero V0 has no lattice-balanced state")


def required_drive_ratio(p: PhysicalParams) -> float:
    """Drive ratio xi/omega required for the closed-form state family: sqrt(Gamma^2 + gamma^2)."""
    return math.hypot(p.Gamma, p.gamma)


def with_matched_drive(p: PhysicalParams) -> PhysicalParams:
    """Copy of ``p`` with xi set to omega * required_drive_ratio."""
    return replace(p, xi=p.omega * required_drive_ratio(p))


def chemical_potential(p: PhysicalParams) -> float:
    """Chemical potential of the closed-form family.

    mu = [1 + Nt (g + g12) + V0 + (3/2)(Gamma^2 + gamma^2)] / 2
    """
    return 0.5 * (1.0 + p.Nt * (p.g + p.g12) + p.V0 + 1.5 * (p.Gamma**2 + p.gamma**2))


def imbalance_term(p: PhysicalParams) -> float:
    """Per-well population shift gamma*sqrt(Gamma^2+gamma^2)/(g - g12).

    Defined as exactly 0 for gamma == 0 (the numerator vanishes identically),
    which also covers g == g12 in that limit.
    """
    if p.gamma == 0.0:
        return 0.0
    return p.gamma * required_drive_ratio(p) / (p.g - p.g12)


def max_soc_strength(p: PhysicalParams) -> float:
    """Largest SOC strength with nonnegative per-well populations.

    Solves gamma * sqrt(Gamma^2 + gamma^2) = Nt |g - g12| / 2 for gamma;
    independent of p.gamma itself.
    """
    return soc_strength_for_shift(0.5 * p.Nt * abs(p.g - p.g12), p.Gamma)


def soc_strength_for_shift(c: float, Gamma: float) -> float:
    """Invert gamma * sqrt(Gamma^2 + gamma^2) = c for gamma >= 0 (c >= 0)."""
    if c < 0:
        raise ValueError(f"target shift must be >= 0, got {c}")
    gamma_sq = 0.5 * (-Gamma**2 + math.hypot(Gamma**2, 2.0 * c))
    return math.sqrt(max(gamma_sq, 0.0))


@dataclass(frozen=True)
class CriticalDepth:
    """Critical lattice depth and which component bound is the binding one."""

    Vc: float
    branch: int  # component j whose V_jc is the minimum
    V1c: float
    V2c: float


def critical_depth(p: PhysicalParams) -> CriticalDepth:
    """Largest lattice depth compatible with nonnegative densities.

    V_jc = |g + g12| [Nt - (-1)^j 2 gamma sqrt(Gamma^2+gamma^2)/(g - g12)];
    the minimum of the pair binds. Raises UnphysicalPopulation when the SOC
    strength already drives one per-well population negative.
    """
    s = imbalance_term(p)
    if 2.0 * abs(s) > p.Nt * (1.0 + _POP_TOL):
        raise UnphysicalPopulation(
            f"SOC strength {p.gamma} exceeds the population bound "
            f"(max {max_soc_strength(p)})"
        )
    scale = abs(p.g + p.g12)
    V1c = scale * (p.Nt + 2.0 * s)
    V2c = scale * (p.Nt - 2.0 * s)
    if V2c <= V1c:
        return CriticalDepth(Vc=V2c, branch=2, V1c=V1c, V2c=V2c)
    return CriticalDepth(Vc=V1c, branch=1, V1c=V1c, V2c=V2c)


def effective_soc_and_mu(
    p: PhysicalParams, mu: float | None = None
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Recombined SOC strengths and chemical potentials of the quasistationary system.

    gamma_j = (-1)^j gamma + xi/omega
    mu_j    = mu - (-1)^j gamma xi/omega - 3 xi^2/(4 omega^2)

    Uses the actual drive ratio xi/omega of ``p``; pass ``mu`` to override the
    closed-form chemical potential.
    """
    if mu is None:
        mu = chemical_potential(p)
    ratio = p.xi / p.omega
    gamma_eff = (-p.gamma + ratio, p.gamma + ratio)
    shift = 0.75 * ratio * ratio
    mu_eff = (mu + p.gamma * ratio - shift, mu - p.gamma * ratio - shift)
    return gamma_eff, mu_eff


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of one validity condition."""

    name: str
    passed: bool
    value: float
    threshold: float
    margin: float
    warning: bool = False  # warnings never fail the regime


@dataclass(frozen=True)
class ConditionsReport:
    """Pass/fail report for the closed-form state family's validity conditions."""

    checks: tuple[ConditionCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.warning)

    @property
    def failures(self) -> tuple[ConditionCheck, ...]:
        return tuple(c for c in self.checks if not c.passed and not c.warning)

    @property
    def warnings(self) -> tuple[ConditionCheck, ...]:
        return tuple(c for c in self.checks if not c.passed and c.warning)

    def as_dict(self) -> list[dict]:
        def num(v: float) -> float | None:
            return None if math.isnan(v) else v

        return [
            {
                "name": c.name,
                "passed": c.passed,
                "value": num(c.value),
                "threshold": num(c.threshold),
                "margin": num(c.margin),
                "warning": c.warning,
            }
            for c in self.checks
        ]


def validate_regime(
    p: PhysicalParams,
    ratio_rtol: float = RATIO_RTOL,
    omega_min: float = OMEGA_MIN_WARN,
) -> ConditionsReport:
    """Check every validity condition of the closed-form family.

    Hard conditions: drive ratio matched, V0 <= Vc, gamma <= gamma_max.
    Soft condition (warning only): omega above the averaging threshold.
    """
    checks: list[ConditionCheck] = []

    ratio_req = required_drive_ratio(p)
    ratio_act = p.xi / p.omega
    tol = ratio_rtol * max(1.0, abs(ratio_req))
    dev = abs(ratio_act - ratio_req)
    checks.append(
        ConditionCheck("drive_ratio", dev <= tol, ratio_act, ratio_req, tol - dev)
    )

    gamma_max = max_soc_strength(p)
    pop_tol = _POP_TOL * max(1.0, gamma_max)
    checks.append(
        ConditionCheck(
            "population",
            p.gamma <= gamma_max + pop_tol,
            p.gamma,
            gamma_max,
            gamma_max - p.gamma,
        )
    )

    if p.gamma <= gamma_max + pop_tol:
        Vc = critical_depth(p).Vc
        depth_tol = _POP_TOL * max(1.0, Vc)
        checks.append(
            ConditionCheck(
                "lattice_depth", p.V0 <= Vc + depth_tol, p.V0, Vc, Vc - p.V0
            )
        )
    else:
        # Vc undefined beyond the population bound; report the depth check as failed.
        checks.append(ConditionCheck("lattice_depth", False, p.V0, math.nan, math.nan))

    checks.append(
        ConditionCheck(
            "high_frequency",
            p.omega >= omega_min,
            p.omega,
            omega_min,
            p.omega - omega_min,
            warning=True,
        )
    )
    return ConditionsReport(checks=tuple(checks))


@dataclass(frozen=True)
class DerivedConditions:
    """Bundle of all derived quantities for one parameter set."""

    mu: float
    drive_ratio: float
    gamma_eff: tuple[float, float]
    mu_eff: tuple[float, float]
    Vc: float
    Vc_branch: int
    gamma_max: float
    regime_ok: bool


def derive_conditions(p: PhysicalParams) -> DerivedConditions:
    """Evaluate every derived quantity plus the overall regime verdict."""
    mu = chemical_potential(p)
    gamma_eff, mu_eff = effective_soc_and_mu(p, mu)
    depth = critical_depth(p)
    return DerivedConditions(
        mu=mu,
        drive_ratio=required_drive_ratio(p),
        gamma_eff=gamma_eff,
        mu_eff=mu_eff,
        Vc=depth.Vc,
        Vc_branch=depth.branch,
        gamma_max=max_soc_strength(p),
        regime_ok=validate_regime(p).ok,
    )
