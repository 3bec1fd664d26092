class MarketMapError(ValueError):
    """Base class for input and contract violations raised by marketmap."""


class DataError(MarketMapError):
    """Malformed or inadmissible input data (prices, metadata, matrices)."""


class ConvergenceError(MarketMapError):
    """An iterative method stopped before meeting its tolerance."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
