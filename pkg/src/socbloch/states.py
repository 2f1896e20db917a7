"""Closed-form Bloch-state family of the driven SOC lattice condensate.

The family is parametrized by four nonnegative amplitudes (a1, b1, a2, b2)
and the chemical potential mu. Component j has the profile
psi_j(x) = a_j cos x + i b_j sin x, number density
R_j^2(x) = a_j^2 cos^2 x + b_j^2 sin^2 x, and constant current a_j b_j.
All observables below (densities, per-well populations, currents, velocities,
spin reduced density matrix) are evaluated from the closed forms.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditionViolated, DivergentVelocity, UnphysicalPopulation
from .grid import Grid
from .params import (
    PhysicalParams,
    chemical_potential,
    critical_depth,
    imbalance_term,
    max_soc_strength,
)

# Densities below this fraction of Nt count as divergent for velocity queries.
EPS_DIVERGENT = 1e-9

# Radicands may round slightly negative exactly at the existence boundary.
_RADICAND_TOL = 1e-12

_PROFILE_COLUMNS = (
    "x",
    "V",
    "R1sq",
    "R2sq",
    "theta1",
    "theta2",
    "re_psi1",
    "im_psi1",
    "re_psi2",
    "im_psi2",
)


@dataclass(frozen=True)
class BlochCoefficients:
    """Positive amplitudes (a1, a2), (b1, b2) and the chemical potential."""

    a: tuple[float, float]
    b: tuple[float, float]
    mu: float

    @property
    def currents(self) -> tuple[float, float]:
        return (self.a[0] * self.b[0], self.a[1] * self.b[1])


def _lattice_shift(p: PhysicalParams) -> float:
    """Half the density modulation amplitude, V0 / (2 (g + g12))."""
    if p.V0 == 0.0:
        return 0.0
    return p.V0 / (2.0 * (p.g + p.g12))


def well_populations(p: PhysicalParams) -> tuple[float, float]:
    """Average atom numbers per well, N_j = Nt/2 - (-1)^j * imbalance_term.

    N1 + N2 = Nt exactly. Raises UnphysicalPopulation when a population is
    negative beyond round-off of the boundary case.
    """
    s = imbalance_term(p)
    N1, N2 = 0.5 * p.Nt + s, 0.5 * p.Nt - s
    tol = _RADICAND_TOL * max(1.0, p.Nt)
    if min(N1, N2) < -tol:
        raise UnphysicalPopulation(
            f"per-well populations ({N1}, {N2}) negative; gamma exceeds "
            f"{max_soc_strength(p)}"
        )
    return (max(N1, 0.0), max(N2, 0.0))


def coefficients(p: PhysicalParams) -> BlochCoefficients:
    """Positive closed-form amplitudes.

    a_j^2 = N_j + V0/(2(g+g12)), b_j^2 = N_j - V0/(2(g+g12)). Raises
    ConditionViolated when a radicand is negative, i.e. V0 > Vc or
    gamma > gamma_max.
    """
    try:
        N = well_populations(p)
    except UnphysicalPopulation as exc:
        raise ConditionViolated(str(exc)) from exc
    h = _lattice_shift(p)
    tol = _RADICAND_TOL * max(1.0, p.Nt)
    a, b = [], []
    for j in (0, 1):
        ra, rb = N[j] + h, N[j] - h
        if min(ra, rb) < -tol:
            raise ConditionViolated(
                f"amplitude radicand negative for component {j + 1}: "
                f"V0={p.V0} exceeds Vc={critical_depth(p).Vc}"
            )
        a.append(math.sqrt(max(ra, 0.0)))
        b.append(math.sqrt(max(rb, 0.0)))
    return BlochCoefficients(a=(a[0], a[1]), b=(b[0], b[1]), mu=chemical_potential(p))


def psi_exact(c: BlochCoefficients, x: np.ndarray | float) -> np.ndarray:
    """Evaluate the two spinor components, shape (2,) + shape(x)."""
    x = np.asarray(x, dtype=float)
    cos, sin = np.cos(x), np.sin(x)
    return np.stack([c.a[j] * cos + 1j * c.b[j] * sin for j in (0, 1)])


def density_profile(p: PhysicalParams, x: np.ndarray | float) -> np.ndarray:
    """Number densities from the closed form, independent of the amplitudes:

    R_j^2 = [Nt + V0 cos(2x)/(g+g12) - (-1)^j 2 imbalance_term] / 2
    """
    x = np.asarray(x, dtype=float)
    s = imbalance_term(p)
    mod = _lattice_shift(p) * np.cos(2.0 * x)
    return np.stack([0.5 * p.Nt + s + mod, 0.5 * p.Nt - s + mod])


def superfluid_current(p: PhysicalParams, sign: int = +1) -> tuple[float, float]:
    """Constant superfluid current of each component, +-a_j b_j.

    The two flow branches differ only by the overall sign; ``sign`` selects
    the branch. Raises ConditionViolated when the current radicand
    N_j^2 - (V0/(2(g+g12)))^2 is negative (V0 > Vc).
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    c = coefficients(p)
    return (sign * c.a[0] * c.b[0], sign * c.a[1] * c.b[1])


def superfluid_velocity(
    p: PhysicalParams, x: np.ndarray | float, sign: int = +1
) -> np.ndarray:
    """Pointwise flow velocity J_j / R_j^2(x).

    Raises DivergentVelocity when any requested point has density below
    EPS_DIVERGENT * Nt (zero-density points have formally infinite velocity).
    """
    J = superfluid_current(p, sign)
    R2 = density_profile(p, x)
    if np.min(R2) < EPS_DIVERGENT * p.Nt:
        j = int(np.unravel_index(np.argmin(R2), R2.shape)[0])
        raise DivergentVelocity(
            f"component {j + 1} density below {EPS_DIVERGENT * p.Nt:g} at a requested point"
        )
    return np.stack([J[0] / R2[0], J[1] / R2[1]])


def drive_phase(p: PhysicalParams, t: float) -> float:
    """Oscillating gauge momentum theta(t) = (2 xi / omega) sin^2(omega t / 2)."""
    return 2.0 * (p.xi / p.omega) * math.sin(0.5 * p.omega * t) ** 2


def spatiotemporal_state(
    p: PhysicalParams, c: BlochCoefficients, x: np.ndarray | float, t: float
) -> np.ndarray:
    """Lab-frame driven state Psi_j(x, t) = psi_j(x) e^{-i mu t} e^{-i theta(t) x}.

    At stroboscopic times t = 2 pi n / omega the drive phase vanishes and the
    state reduces to psi_j e^{-i mu t}.
    """
    x = np.asarray(x, dtype=float)
    return psi_exact(c, x) * np.exp(-1j * (c.mu * t + drive_phase(p, t) * x))


def spin_entanglement(p: PhysicalParams) -> tuple[np.ndarray, float]:
    """Spin reduced density matrix and its von Neumann entropy (base 2).

    rho = [[N1, O], [O, N2]] / Nt with per-well overlap
    O = (a1 a2 + b1 b2)/2. Entropy is zero iff the two motional profiles are
    linearly dependent (gamma = 0).
    """
    N = well_populations(p)
    c = coefficients(p)
    overlap = 0.5 * (c.a[0] * c.a[1] + c.b[0] * c.b[1])
    rho = np.array([[N[0], overlap], [overlap, N[1]]]) / p.Nt
    lam = np.linalg.eigvalsh(rho)
    lam = np.clip(lam, 0.0, 1.0)
    nz = lam[lam > 0.0]
    entropy = float(-(nz * np.log2(nz)).sum()) + 0.0  # avoid negative zero
    return rho, max(entropy, 0.0)


@dataclass(frozen=True)
class StateProfile:
    """Sampled state with densities, unwrapped phases, and the potential."""

    x: np.ndarray
    psi: np.ndarray        # (2, N) complex
    density: np.ndarray    # (2, N)
    phase: np.ndarray      # (2, N), continuous, anchored near 0 at x = 0
    potential: np.ndarray  # (N,)

    @classmethod
    def from_fields(
        cls, x: np.ndarray, psi: np.ndarray, V0: float
    ) -> "StateProfile":
        psi = np.asarray(psi, dtype=complex)
        density = np.abs(psi) ** 2
        phase = np.unwrap(np.angle(psi), axis=-1)
        return cls(
            x=np.asarray(x, dtype=float),
            psi=psi,
            density=density,
            phase=phase,
            potential=V0 * np.sin(np.asarray(x)) ** 2,
        )

    @classmethod
    def from_params(cls, p: PhysicalParams, grid: Grid) -> "StateProfile":
        return cls.from_fields(grid.x, psi_exact(coefficients(p), grid.x), p.V0)

    def write_csv(self, path) -> None:
        """Write one row per grid point with round-trip float formatting."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(_PROFILE_COLUMNS)
            for i in range(len(self.x)):
                w.writerow(
                    [
                        repr(float(v))
                        for v in (
                            self.x[i],
                            self.potential[i],
                            self.density[0, i],
                            self.density[1, i],
                            self.phase[0, i],
                            self.phase[1, i],
                            self.psi[0, i].real,
                            self.psi[0, i].imag,
                            self.psi[1, i].real,
                            self.psi[1, i].imag,
                        )
                    ]
                )

    @classmethod
    def read_csv(cls, path) -> "StateProfile":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or tuple(rows[0]) != _PROFILE_COLUMNS:
            raise ValueError(f"unexpected profile CSV header in {path}")
        data = np.array([[float(v) for v in row] for row in rows[1:]])
        x = data[:, 0]
        psi = np.stack(
            [data[:, 6] + 1j * data[:, 7], data[:, 8] + 1j * data[:, 9]]
        )
        prof = cls(
            x=x,
            psi=psi,
            density=np.stack([data[:, 2], data[:, 3]]),
            phase=np.stack([data[:, 4], data[:, 5]]),
            potential=data[:, 1],
        )
        return prof
