"""Exception types shared across the package."""


class DomainError(ValueError):
    """A left vertex lies outside a graph's declared string domain."""


class ParameterError(ValueError):
    """Arguments violate an operation's precondition."""


class CapacityError(RuntimeError):
    """An instance exceeds a configured size bound."""


class ConstructionError(RuntimeError):
    """A randomized or searched construction failed to produce a valid graph.

    Carries the last violating subset (if any) in ``witness``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DuplicateArrivalError(ValueError):
    """The same left vertex was presented to a matcher twice."""


class MatchingFailureError(RuntimeError):
    """A matcher found no unused neighbor on any layer for an arrival."""


class ConfigError(ValueError):
    """A config file or command line carries an unknown or malformed key."""
