"""Structured exceptions shared across the package."""


class LienardError(Exception):
    """Base class for all package errors."""


class UnsupportedVariantError(LienardError):
    """An operation was applied to a function variant it does not support."""

    def __init__(self, operation: str, variant: str):
        self.operation = operation
        self.variant = variant
        super().__init__(f"{operation} does not support variant {variant}")


class ZeroPolynomialError(LienardError):
    """A Sturm chain was requested for the identically-zero polynomial."""


class EndpointRootError(LienardError):
    """A root-count endpoint is a root even after a machine-scale nudge."""


class PreconditionError(LienardError):
    """A named precondition of a deformation or check is violated."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class DivergenceError(LienardError):
    """Trajectory left the blow-up guard radius."""

    def __init__(self, t: float, x: float, y: float):
        self.t, self.x, self.y = t, x, y
        super().__init__(f"trajectory diverged at t={t:.6g}: |({x:.3g}, {y:.3g})| exceeds guard")


class StepSizeUnderflowError(LienardError):
    """Adaptive stepping could not meet the tolerance with a representable step."""

    def __init__(self, t: float, x: float, y: float):
        self.t, self.x, self.y = t, x, y
        super().__init__(f"step size underflow at t={t:.6g}, state=({x:.3g}, {y:.3g})")


class DegenerateAmplitudeError(LienardError):
    """The averaged amplitude polynomial is identically zero."""


class DeformRetriesExhaustedError(LienardError):
    """A deformation could not certify its target hypotheses within the retry budget."""
