"""Exception types shared across the toolkit."""


class StokesSmoothError(Exception):
    """Base class for all toolkit errors."""


class NonConvergence(StokesSmoothError):
    """An iterative or adaptive scheme exhausted its budget before reaching tolerance."""


class SuspectedPoleOnPath(StokesSmoothError):
    """Panel refinement blew up; an integrand pole is probably sitting on the contour."""


class SingularMatrix(StokesSmoothError):
    """Pivot below threshold in the small dense solver."""


class Overflow(StokesSmoothError):
    """A finite-input operation produced a non-finite value."""


class PoleOfGamma(StokesSmoothError):
    """ln_gamma evaluated at a non-positive integer."""


class BranchAmbiguity(StokesSmoothError):
    """Evaluation requested beyond the principal sheet without sheet information."""


class OnCutWithoutSide(StokesSmoothError):
    """A branch-cut point was hit and no cut side was supplied."""


class ConstraintViolated(StokesSmoothError):
    """Sector constraints of a representation or theorem are not satisfied."""


class BranchSectorViolated(StokesSmoothError):
    """z lies outside the univalence sector of the saddle-point variable alpha."""


class BreakdownRegion(StokesSmoothError):
    """Parameters are in a region where the requested approximation degenerates."""


class ExcludedLambda(StokesSmoothError):
    """lambda on the excluded rays {i t : |t| >= 1} of erfc(x; y; lambda)."""


class OutOfSector(StokesSmoothError):
    """Argument outside the validity sector of an asymptotic expansion."""


class DegenerateParameters(StokesSmoothError):
    """Parameter combination makes the requested expansion meaningless."""


class NotCollinear(StokesSmoothError):
    """Extreme-collinear operation called with sigma1/sigma0 != N1/N0."""


class CoalescentSaddles(StokesSmoothError):
    """Saddle points coalesce (telegraph beta = +/-1)."""


class StepFailure(StokesSmoothError):
    """ODE integrator could not complete a step within tolerance."""


class ConfigError(StokesSmoothError):
    """Invalid scenario configuration."""
