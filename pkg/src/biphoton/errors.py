"""Exception hierarchy shared by all modules."""


class BiphotonError(Exception):
    """Base class for every error raised by the package."""


class DomainError(BiphotonError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(BiphotonError, ValueError):
    """Invalid construction parameters (grid sizes, bandwidths, mask settings)."""


class UsageError(BiphotonError, ValueError):
    """Operands are individually valid but cannot be combined."""


class RangeError(BiphotonError, IndexError):
    """A requested time or delay falls outside the sampled grid."""


class CalibrationError(BiphotonError, RuntimeError):
    """Internal numerical calibration failed."""


class MultimodalError(BiphotonError, ValueError):
    """Raised when a single width is requested from a multi-lobed trace.

    The widths of the individual lobes are attached as ``lobe_widths``.
    """

    def __init__(self, message, lobe_widths=()):
        super().__init__(message)
        self.lobe_widths = tuple(lobe_widths)
