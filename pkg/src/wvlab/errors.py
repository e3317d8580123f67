"""Exception types shared across the library."""


class WvlabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(WvlabError):
    """Operands have incompatible dimensions."""


class NonHermitianInput(WvlabError):
    """A Hermitian matrix was required but the input is not Hermitian."""


class NoConvergence(WvlabError):
    """An iterative routine exceeded its iteration cap."""


class InvalidState(WvlabError):
    """A state vector or density operator violates its invariants."""


class NotUnitary(WvlabError):
    """A unitary operator was required but the input is not unitary."""


class NotProjective(WvlabError):
    """A projective measurement was required but an element is not a projector."""


class LengthMismatch(WvlabError):
    """Paired sequences have different lengths."""


class InvalidWeights(WvlabError):
    """A probability vector is negative or does not sum to one."""


class UndefinedPostselection(WvlabError):
    """A postselection denominator fell below the guard threshold."""


class UndefinedOutcome(WvlabError):
    """An outcome with non-negligible probability has an underflowing denominator."""


class DegenerateDecomposition(WvlabError):
    """The projector uncertainty vanishes, so the anomalous split is degenerate."""


class ConfigError(WvlabError):
    """A suite configuration field is invalid."""


class UnknownExample(WvlabError):
    """The requested worked example name is not registered."""
