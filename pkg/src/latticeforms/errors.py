"""Exception hierarchy.

Every domain error derives from :class:`LatticeFormsError`; the CLI echoes the
class name as the ``"error"`` field of its JSON output.
"""


class LatticeFormsError(Exception):
    """Base class for all domain errors raised by this package."""


# lattice core
class NotSymmetric(LatticeFormsError):
    pass


class NotEven(LatticeFormsError):
    pass


class Degenerate(LatticeFormsError):
    pass


class SingularBasis(LatticeFormsError):
    pass


class OddInducedGram(LatticeFormsError):
    pass


class NotPositiveDefinite(LatticeFormsError):
    pass


class BoundNegative(LatticeFormsError):
    pass


class NotInDual(LatticeFormsError):
    pass


# discriminant forms / Weil representation
class OrderCapExceeded(LatticeFormsError):
    pass


class GaussSumInconsistent(LatticeFormsError):
    pass


class PhaseAmbiguous(LatticeFormsError):
    pass


class TrivialityViolated(LatticeFormsError):
    pass


# theta / arrows
class DegenerateProjection(LatticeFormsError):
    pass


class TailBoundFailure(LatticeFormsError):
    pass


class DimensionMismatch(LatticeFormsError):
    pass


class IndexIncompatible(LatticeFormsError):
    pass


# Eisenstein series
class NotIsotropic(LatticeFormsError):
    pass


class ConvergenceWarning(UserWarning):
    """Evaluation requested outside the region of normal convergence."""


class IncompatibleBounds(UserWarning):
    """Tables of different completeness were combined; result truncated."""


# L-series
class TableIncomplete(LatticeFormsError):
    pass


class MisalignedTruncation(LatticeFormsError):
    pass


class IndexIncongruent(LatticeFormsError):
    pass


class CoefficientZero(LatticeFormsError):
    pass


class RangeInsufficient(LatticeFormsError):
    pass


# input files
class SchemaError(LatticeFormsError):
    pass
