"""Closed-form Bloch states and split-step spectral dynamics of a
high-frequency-driven, spin-orbit-coupled two-component BEC in an optical
lattice, with verification diagnostics and a scenario CLI."""

from .errors import (
    ConditionViolated,
    DivergentVelocity,
    InvalidConfig,
    InvalidGrid,
    NumericalBlowup,
    SingularCoupling,
    SocblochError,
    UnphysicalPopulation,
)
from .evolver import (
    MODE_DRIVEN,
    MODE_RWA,
    EvolveSettings,
    SpinorField,
    Trajectory,
    evolve,
    exact_initial_field,
)
from .grid import Grid, make_grid
from .params import (
    DerivedConditions,
    PhysicalParams,
    chemical_potential,
    critical_depth,
    derive_conditions,
    effective_soc_and_mu,
    max_soc_strength,
    required_drive_ratio,
    validate_regime,
    with_matched_drive,
)
from .states import (
    BlochCoefficients,
    StateProfile,
    coefficients,
    density_profile,
    psi_exact,
    spatiotemporal_state,
    spin_entanglement,
    superfluid_current,
    superfluid_velocity,
    well_populations,
)
from .diagnostics import (
    FidelityReport,
    ResidualReport,
    density_zero_scan,
    fidelity_to_exact,
    numeric_current,
    rwa_deviation_sweep,
    stationary_residual,
)

__version__ = "0.1.0"
