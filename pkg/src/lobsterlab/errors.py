"""Exception types shared across the package."""


class LobsterLabError(ValueError):
    """Base class for all structured errors raised by this package."""


class GraphStructureError(LobsterLabError):
    """Invalid graph input: bad endpoint, duplicate edge, self-loop, non-tree."""


class LabelingInputError(LobsterLabError):
    """A labeling is structurally unusable (not injective, out of range, ...)."""


class MatrixError(LobsterLabError):
    """A labeled matrix violates its kind's invariants or an operation's rules."""


class ConstructionError(LobsterLabError):
    """A composition's precondition failed or its result did not verify."""


class FormatError(LobsterLabError):
    """A text file does not conform to one of the repo codecs."""
