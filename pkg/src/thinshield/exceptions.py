"""Exception types raised by thinshield."""


class GeometryError(ValueError):
    """Invalid or degenerate boundary description."""


class RegimeError(ValueError):
    """Physical parameters fall outside the range where the optimum is characterized."""

    def __init__(self, message, *, sup_ratio=None, inf_ratio=None):
        super().__init__(message)
        self.sup_ratio = sup_ratio
        self.inf_ratio = inf_ratio


class InactivePointError(ValueError):
    """The curvature ratio lies outside the active set, so the optimal thickness is zero."""


class ConvergenceError(RuntimeError):
    """An iterative solve failed to meet its tolerance."""

    def __init__(self, message, *, bracket=None, residual=None):
        super().__init__(message)
        self.bracket = bracket
        self.residual = residual
