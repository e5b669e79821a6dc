"""Exception hierarchy.  Every error carries a short machine-readable code."""


class AutomobiusError(Exception):
    code = "E_INTERNAL"

    def __init__(self, message, **location):
        super().__init__(message)
        self.message = message
        self.location = location

    def describe(self):
        loc = " ".join(f"{k}={v}" for k, v in self.location.items())
        return f"error[{self.code}]{' ' + loc if loc else ''}: {self.message}"


class ArgumentError(AutomobiusError, ValueError):
    code = "E_ARGUMENT"


class RepSyntaxError(AutomobiusError, ValueError):
    """Malformed representation expression; ``offset`` is a byte offset."""

    code = "E_SYNTAX"

    def __init__(self, message, offset):
        super().__init__(message, offset=offset)
        self.offset = offset


class UnknownFormError(RepSyntaxError):
    code = "E_UNKNOWN_FORM"


class DataError(AutomobiusError):
    code = "E_DATA"


class MaassFormatError(DataError):
    code = "E_FORMAT"


class HeckeConsistencyError(DataError):
    code = "E_HECKE"


class CapabilityError(AutomobiusError):
    code = "E_CAPABILITY"


class NormalizationError(DataError):
    code = "E_NORMALIZATION"


class MultiplicativityError(DataError):
    code = "E_MULTIPLICATIVE"
