"""Exception hierarchy for walk_induction."""


class WalkInductionError(Exception):
    """Base class for all library errors."""


class ModelMismatchError(WalkInductionError, ValueError):
    """Two objects live on different group models."""


class UnsupportedOperationError(WalkInductionError, TypeError):
    pass


class ConfigError(WalkInductionError, ValueError):
    pass


class TransitivityError(WalkInductionError, ValueError):
    """A coset action whose generators do not act transitively."""


class ReducibleChainError(WalkInductionError, ValueError):
    pass


class ShallowCylinderError(WalkInductionError, ValueError):
    """Cylinder too short for the cocycle exponent to have stabilised."""


class NotInSupportError(WalkInductionError, ValueError):
    pass


class SupportCapExceeded(WalkInductionError, RuntimeError):
    """Raised when an exact measure outgrows the configured support cap.

    ``achieved`` is the last step count that completed under the cap.
    """

    def __init__(self, message: str, achieved: int, partial=None):
        super().__init__(message)
        self.achieved = achieved
        self.partial = partial
