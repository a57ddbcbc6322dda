"""Exception types shared across the package."""


class ExclError(Exception):
    """Base class for all errors raised by this package."""


class InvalidEdge(ExclError):
    """Edge list entry violates the weighted-graph contract."""


class DisconnectedGraph(ExclError):
    """The supplied edge list does not form a connected graph."""


class GenerationFailed(ExclError):
    """A randomized graph generator exhausted its retry budget."""


class IntervalOutOfRange(ExclError):
    """Requested time interval is not contained in the stream horizon."""


class StateSpaceTooLarge(ExclError):
    """Exact computation refused: the state space exceeds the configured cap."""


class SpaceMismatch(ExclError):
    """Two distributions do not live on the same state space."""


class IndexOutOfRange(ExclError):
    """A sample index does not belong to the state space."""


class OutOfRange(ExclError):
    """Argument lies outside the domain of an ink-chain quantity."""


class InvalidTuple(ExclError):
    """Argument is not a tuple of distinct, in-range vertices."""


class AbsorptionCapExceeded(ExclError):
    """A simulation hit its step or round cap before absorbing."""


class NumericalError(ExclError):
    """An internal numerical sanity check failed; this indicates a bug."""


class ConfigError(ExclError):
    """Experiment configuration is malformed."""
