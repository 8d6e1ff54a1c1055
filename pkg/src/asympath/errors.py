"""Exception types shared across the package."""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SolverError):
    """Malformed or out-of-range arguments (bad matrix shape, k < 1, ...)."""


class SizeLimitError(InputError):
    """Instance exceeds the hard cap of an exponential-time routine."""


class InfeasibleError(SolverError):
    """No feasible object exists (unreachable node pair, no perfect matching)."""


class ContractError(SolverError):
    """A caller-supplied object violates a documented precondition."""


class AcyclicityError(SolverError):
    """An arc set required to be acyclic contains a cycle."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class InvariantError(SolverError):
    """An internal invariant of an algorithm run was violated.

    Carries the offending state so failures can be dumped for inspection.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class DegenerateLatencyError(SolverError):
    """A latency value that must be positive is zero."""
