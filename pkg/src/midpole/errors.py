"""Exception hierarchy shared by all midpole modules."""


class MidpoleError(Exception):
    """Base class for all midpole errors."""


class ValidationError(MidpoleError):
    """Bad input parameters (maps to CLI exit code 2)."""


class NumericalError(MidpoleError):
    """Numerical procedure failed (maps to CLI exit code 3)."""


class OrderTooLarge(ValidationError):
    pass


class InvalidStrip(ValidationError):
    pass


class NonpositiveDelay(ValidationError):
    pass


class InvalidParameters(ValidationError):
    pass


class UnknownScenario(ValidationError):
    pass


class StepNotDividingDelay(ValidationError):
    pass


class SingularSystem(NumericalError):
    pass


class IdentityViolation(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SideViolation(NumericalError):
    pass


class BoundaryRoot(NumericalError):
    pass


class NoPhaseConvergence(NumericalError):
    pass


class NewtonDivergence(NumericalError):
    pass


class NonPositiveRadicand(NumericalError):
    pass


class InsufficientData(ValidationError):
    pass
