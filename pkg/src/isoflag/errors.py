"""Exception hierarchy.

Two families: ``ValidationError`` for inputs that violate a documented
precondition (the CLI maps these to exit code 2), and ``NumericalError``
for degeneracies discovered mid-computation where any answer would be
meaningless (exit code 3).
"""


class IsoflagError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(IsoflagError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(IsoflagError, ArithmeticError):
    """Numerically degenerate configuration; refusing to guess."""


class AmbientTooSmall(ValidationError):
    """Ambient dimension below 2 admits no proper flag."""


class KOutOfRange(ValidationError):
    """A subspace dimension lies outside the open interval (0, n)."""


class NonIncreasingKs(ValidationError):
    """Subspace dimensions must be strictly increasing."""


class SignatureMismatch(ValidationError):
    """Operands were built over different flag signatures."""


class SpectrumInvalid(ValidationError):
    """Spectrum values collide, are mis-ordered, or have the wrong length."""


class NotSpecialOrthogonal(ValidationError):
    """Matrix is not orthogonal with determinant +1 within tolerance."""


class NotSymmetric(ValidationError):
    """Matrix is not symmetric within tolerance."""


class NotSkewSymmetric(ValidationError):
    """Matrix is not skew-symmetric with vanishing diagonal blocks."""


class NotDominant(ValidationError):
    """Weight fails a dominance or parity constraint."""


class MixedParity(ValidationError):
    """Weight entries mix integers with half-integers."""


class IndexOutOfRange(ValidationError):
    """Fundamental-weight index outside 1..m."""


class DeltaOutOfRange(ValidationError):
    """Shift amount incompatible with the weight being shifted."""


class HypothesisViolated(ValidationError):
    """Classification check requested below its supported dimension."""


class SpectrumMismatch(NumericalError):
    """Matrix eigenvalues do not match the prescribed spectrum."""


class EigenvalueGapTooSmall(NumericalError):
    """Spectrum values too close together to assign eigenvalues reliably."""


class DegenerateBoundaryGap(NumericalError):
    """Eigenvalue tie at a block boundary: nearest point is non-unique."""

    def __init__(self, message: str, gap: float | None = None):
        super().__init__(message)
        self.gap = gap


class StepNotFinite(NumericalError):
    """Objective gradient returned non-finite entries."""
