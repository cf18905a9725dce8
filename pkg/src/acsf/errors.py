"""Exception hierarchy. Every domain error derives from :class:`AcsfError`."""


class AcsfError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class PositivityViolation(AcsfError):
    pass


class OutOfAngularRange(AcsfError):
    pass


class QuadratureFailure(AcsfError):
    pass


class DegenerateInput(AcsfError):
    pass


class NonConvexState(AcsfError):
    pass


class ConvexityLoss(AcsfError):
    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class PositivityLoss(AcsfError):
    pass


class GluingFailure(AcsfError):
    pass


class WindowMismatch(AcsfError):
    pass


class EmptyGeometry(AcsfError):
    pass


class ConfigError(Exception):
    """Invalid or missing configuration (exit code 2)."""
