"""
Error types raised by the toolkit and the CLI exit statuses they map to.
"""

EXIT_OK = 0
EXIT_TOLERANCE_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


class ToolkitError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code: int = EXIT_NUMERICAL_FAILURE


class NumericalError(ToolkitError):
    """A linear-algebra or propagation step could not be trusted."""


class NotHermitian(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class DimensionMismatch(NumericalError):
    pass


class DimensionOverflow(NumericalError):
    pass


class TruncationNotConverged(NumericalError):
    pass


class IndexOutOfRange(ToolkitError):
    pass


class LeakageDetected(ToolkitError):
    """The synthesized unitary does not preserve the logical subspace."""


class LeakageExceeded(ToolkitError):
    """Physical-layer population left the effective-qubit manifold."""


class UnknownGate(ToolkitError):
    pass


class CalibrationFailed(ToolkitError):
    pass


class ConfigError(ToolkitError):
    exit_code = EXIT_CONFIG_ERROR
