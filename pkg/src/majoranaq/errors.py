"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Shapes or mode counts of the inputs do not match."""


class IndexRangeError(ValueError):
    """A 1-based operator index lies outside [1, 2M]."""


class OffBoundaryError(ValueError):
    """A boundary-only operation was called at an interior/exterior point."""

    def __init__(self, margin, tol):
        self.margin = float(margin)
        self.tol = float(tol)
        super().__init__(
            f"point is not on the pure-state boundary: |margin| = {abs(margin):.3e} "
            f"exceeds tolerance {tol:.1e}"
        )


class SingularBasisError(ArithmeticError):
    """The Gaussian-basis quadratic form is singular at this phase point."""

    def __init__(self, eigenvalue):
        self.eigenvalue = complex(eigenvalue)
        super().__init__(
            f"Gaussian basis undefined here: quadratic-form matrix has eigenvalue "
            f"{eigenvalue:.3e} (too close to zero to invert)"
        )


class DegenerateBasisError(ArithmeticError):
    """The normal-ordered exponential has (numerically) zero trace."""


class StencilError(ArithmeticError):
    """A finite-difference stencil point was not evaluable; try a smaller step."""


class DivergenceError(RuntimeError):
    """Trajectory integration produced a non-finite state."""

    def __init__(self, step):
        self.step = int(step)
        super().__init__(f"trajectory diverged (non-finite state) at step {step}")


class ConfigError(ValueError):
    """Configuration file failed to parse or validate."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")
