"""Exception types raised across the simulator."""


class CrhopError(Exception):
    """Base class for all simulator errors."""


class InvalidParameterError(CrhopError, ValueError):
    """A value violates an operation's precondition."""


class GenerationFailureError(CrhopError, RuntimeError):
    """Topology generation exhausted its attempt budget; the scenario is infeasible."""


class NoChannelError(CrhopError, RuntimeError):
    """A channel-selection strategy was asked to hop with an empty available set."""


class UndefinedPprError(CrhopError, RuntimeError):
    """PPR is undefined because no run recorded a successful rendezvous."""


class InvalidComparisonError(CrhopError, ValueError):
    """Paired comparison attempted between results with mismatched seed sets."""
