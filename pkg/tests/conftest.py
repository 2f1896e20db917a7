import numpy as np
import pytest

from socbloch import PhysicalParams, make_grid
from socbloch.params import with_matched_drive


def matched(**kw) -> PhysicalParams:
    """Build params with the drive ratio tuned to the closed-form condition."""
    return with_matched_drive(PhysicalParams(xi=0.0, **kw))


@pytest.fixture
def base_params() -> PhysicalParams:
    """Reference set: shallow lattice inside the existence region."""
    return matched(gamma=0.3, Gamma=0.1, g=0.6, g12=0.2, V0=1.0, Nt=5.0, omega=50.0)


@pytest.fixture
def boundary_params() -> PhysicalParams:
    """Same set at the critical lattice depth (zero-density points appear)."""
    return matched(
        gamma=0.3, Gamma=0.1, g=0.6, g12=0.2, V0=3.620526680779795, Nt=5.0, omega=50.0
    )


@pytest.fixture
def grid():
    return make_grid(2, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
