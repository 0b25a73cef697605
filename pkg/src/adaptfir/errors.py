"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """A precondition on an argument was violated."""


class SingularMatrixError(ArithmeticError):
    """Gaussian elimination met a pivot below the singularity threshold."""

    def __init__(self, pivot_index: int, pivot: float):
        self.pivot_index = pivot_index
        self.pivot = pivot
        super().__init__(f"matrix is singular or ill-conditioned at pivot {pivot_index} (|pivot| = {pivot:.3g})")


class NumericFailureError(ArithmeticError):
    """An iterative numeric routine failed to converge."""

    def __init__(self, message: str, last_estimate: float | None = None):
        self.last_estimate = last_estimate
        super().__init__(message)


class UndefinedMisadjustmentError(ArithmeticError):
    """Minimum MSE is (numerically) zero, so misadjustment has no value."""
