"""Exception types raised across the laboratory.

Everything numerical derives from ValueError or ArithmeticError so that
callers can catch broad classes; the CLI maps SchemaError to exit code 2
and any other failure to exit code 1.
"""


class ValidationError(ValueError):
    """An operator wrapper rejected its matrix at construction time."""


class NotHermitian(ValidationError):
    pass


class IndefiniteInput(ValidationError):
    """A matrix expected to be positive semidefinite had an eigenvalue below the clamp window."""


class InvalidExponent(ValueError):
    pass


class InvalidOrder(ValueError):
    """Dilation order m below the minimum of 3."""


class EigenFailure(ArithmeticError):
    """The underlying eigensolver did not converge."""


class NearSingular(ArithmeticError):
    """A resolvent or shifted inverse was requested too close to the spectrum."""


class OnePointSpectrum(ArithmeticError):
    """Inverse Cayley transform of a contraction with 1 in (or too near) its spectrum."""


class UnwrapAmbiguity(ArithmeticError):
    """Consecutive determinant phases differ by nearly pi even at the maximum grid size."""


class NonzeroWinding(ArithmeticError):
    """The unwrapped determinant phase failed to close up over a full circle sweep."""


class KernelViolation(ArithmeticError):
    """An inverse (fractional) power was requested of an operator with spectrum at zero."""


class QuadratureDivergence(ArithmeticError):
    """Node doubling failed to stabilize the fractional-power quadrature."""


class BranchCut(ValueError):
    """Green kernel evaluated on (or within tolerance of) the branch cut [0, infinity)."""


class NegativePotential(ValueError):
    pass


class DissipativityViolation(ValidationError):
    """A potential with negative imaginary part would break dissipativity."""


class SchemaError(ValueError):
    """A scenario file failed structural validation. CLI exit code 2."""


class IoError(RuntimeError):
    """A report, table, or plot could not be written."""
