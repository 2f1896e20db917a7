"""Exception types shared across the package."""


class SocblochError(Exception):
    """Base class for all package-specific errors."""


class SingularCoupling(SocblochError):
    """Interaction strengths make a closed-form expression singular (g == g12 with nonzero SOC)."""


class UnphysicalPopulation(SocblochError):
    """A per-well population formula evaluates to a negative atom number."""


class ConditionViolated(SocblochError):
    """A closed-form existence condition (lattice depth or population bound) is violated."""


class DivergentVelocity(SocblochError):
    """Superfluid velocity requested at a point of (numerically) zero density."""


class InvalidGrid(SocblochError):
    """Grid construction parameters violate the resolution/size contract."""


class NumericalBlowup(SocblochError):
    """Norm growth during time evolution exceeded the runaway guard."""


class InvalidConfig(SocblochError):
    """Run configuration file or override is malformed or inconsistent."""
