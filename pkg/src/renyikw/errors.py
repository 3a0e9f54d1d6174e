"""Exception taxonomy shared across the package.

Two families matter to callers: ValidationError covers rejected inputs
(bad alpha, malformed dimensions, degenerate ensembles) and NumericalError
covers failures detected while computing (non-Hermitian inputs, incomplete
Kraus sets, singular normalizers, non-finite objectives). The CLI maps the
families to exit codes 2 and 3 respectively.
"""


class RenyikwError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RenyikwError):
    """Input rejected before any numerics ran."""


class NumericalError(RenyikwError):
    """Computation failed or produced something unusable."""


class InvalidAlpha(ValidationError):
    """Order parameter outside the admissible range for the operation."""


class DimMismatch(ValidationError):
    """Declared subsystem dimensions do not match the data."""


class InvalidRank(ValidationError):
    """Requested rank outside [1, dim]."""


class TooFewOutcomes(ValidationError):
    """A POVM parametrization needs at least dim outcomes."""


class SingletonEnsemble(ValidationError):
    """Discrimination needs at least two ensemble members."""


class InvalidState(ValidationError):
    """State data violates a construction invariant or is malformed."""


class NonHermitian(NumericalError):
    """Matrix expected to be Hermitian deviates beyond tolerance."""


class IncompleteKraus(NumericalError):
    """Kraus operators do not sum to the identity channel condition."""


class SingularNormalizer(NumericalError):
    """Block Gram matrix too singular to whiten into a POVM."""


class NonFiniteObjective(NumericalError):
    """Objective returned NaN or infinity during optimization."""
