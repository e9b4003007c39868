"""Exception types raised across the package.

Every error carries a stable ``code`` used by the CLI when it reports a
failure as JSON.
"""


class PointSSIMError(Exception):
    code = "PointSSIMError"


class AspectMismatch(PointSSIMError, ValueError):
    code = "AspectMismatch"


class DimensionMismatch(PointSSIMError, ValueError):
    code = "DimensionMismatch"


class TooSmall(PointSSIMError, ValueError):
    code = "TooSmall"


class AllForeground(PointSSIMError, ValueError):
    code = "AllForeground"


class EmptyImage(PointSSIMError, ValueError):
    code = "EmptyImage"


class UnreadableFile(PointSSIMError, OSError):
    code = "UnreadableFile"


class UnsupportedFormat(PointSSIMError, ValueError):
    code = "UnsupportedFormat"


class WriteFailure(PointSSIMError, OSError):
    code = "WriteFailure"


class ConfigError(PointSSIMError, ValueError):
    code = "ConfigError"


class DoesNotFit(ConfigError):
    code = "DoesNotFit"
