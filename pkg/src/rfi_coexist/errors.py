"""Exception hierarchy shared across the package.

ConfigError maps to CLI exit code 2, DomainError (and subclasses) to exit
code 3. Everything else is a bug or an environment failure.
"""


class ConfigError(ValueError):
    """Malformed or physically inconsistent configuration input."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class AlphaRangeError(DomainError):
    """Path-loss exponent at or below 2, where the side-lobe cumulant
    closed forms degenerate."""

    code = "alpha_out_of_range"

    def __init__(self, alpha: float):
        super().__init__(f"{self.code}: path_loss_exponent must be > 2, got {alpha}")
        self.alpha = alpha


class MgfOverflowError(DomainError):
    """MGF evaluation requested at a t where an exponent exceeds the
    floating-point usable range."""

    code = "mgf_overflow"

    def __init__(self, exponent: float, cap: float):
        super().__init__(f"{self.code}: exponent {exponent:.6g} exceeds cap {cap:.6g}")
        self.exponent = exponent
        self.cap = cap


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge to the requested tolerance."""
