"""Exception hierarchy for the sil package.

Every failure mode raised by the numerical layers derives from SilError so
callers (CLI, scenario harness) can map them to exit codes uniformly.
"""


class SilError(Exception):
    """Base class for all package errors."""


class DomainError(SilError, ValueError):
    """A parameter lies outside its admissible range."""


class ConfigError(SilError, ValueError):
    """A scenario/config file failed to parse or validate."""


class NumericError(SilError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy result."""


class NonIntegrableTail(NumericError):
    """Requested norm diverges given the declared tail exponent."""


class NegativeDensity(DomainError):
    """A measure density took negative values."""


class DegenerateOddCase(DomainError):
    """Sharp constant undefined: odd order equals dimension minus one."""


class QuadratureNotConverged(NumericError):
    """Two refinement levels of a quadrature disagree beyond tolerance."""


class SingularOnDiagonal(DomainError):
    """Angular kernel weight requested exactly on its singular diagonal."""


class NonIntegrableKernel(DomainError):
    """Kernel order makes the convolution integral diverge."""


class UnboundedResult(NumericError):
    """Convolution diverges for the given input tail."""


class ResolutionTooCoarse(NumericError):
    """Cartesian grid too coarse to resolve the kernel singularity."""


class GeometryViolated(DomainError):
    """Probe geometry preconditions are not satisfied."""


class IllConditionedBasis(NumericError):
    """Polynomial basis failed the orthonormality residual test."""


class PotentialNotComputed(SilError):
    """Operation requires a potential profile that was never attached."""


class UnboundedDistribution(NumericError):
    """Distribution function is infinite at some positive level."""


class ExponentConstraintViolated(DomainError):
    """O'Neil exponent pair (p, q) violates its admissibility window."""


class MassNotCaptured(NumericError):
    """Transformed profile grid failed to capture the required norm mass."""


class TailNotConverged(NumericError):
    """Tail of an improper integral did not converge on the working grid."""


class HypothesisViolated(DomainError):
    """Input violates the hypothesis of the bound being evaluated."""


class GrowthViolated(NumericError):
    """Measure growth spot-check failed its certified (Q, sigma) bound."""


class DivergentIntegral(DomainError):
    """Non-regularized whole-space exponential integral requested."""


class NonIntegrable(NumericError):
    """Whole-space functional diverges for the given input."""


class JInfinite(NumericError):
    """Kernel tail integral diverges (purely homogeneous, untruncated)."""
