"""Generalized Moebius functions of symmetric-power Rankin-Selberg L-functions."""

__version__ = "0.1.0"

from .errors import AutomobiusError, ArgumentError, DataError, RepSyntaxError  # noqa: E402
from .registry import FormRegistry  # noqa: E402
from .repalg import parse_rep  # noqa: E402

__all__ = ["AutomobiusError", "ArgumentError", "DataError", "RepSyntaxError", "FormRegistry", "parse_rep",
           "__version__"]
