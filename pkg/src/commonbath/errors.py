"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SimulationError):
    """An argument violates a documented precondition."""


class NumericalFailureError(SimulationError):
    """A numerical routine failed to reach its accuracy contract."""
