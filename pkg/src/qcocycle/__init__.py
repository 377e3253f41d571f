"""Proper Yetter-Drinfeld 1-cocycle on the Podles sphere at arbitrary precision."""

__version__ = "0.1.0"

from .errors import DegeneracyError, DomainError, NumericalFailure, PrecisionExhausted, WindowOverflow
from .scalars import ParamContext

__all__ = [
    "DegeneracyError",
    "DomainError",
    "NumericalFailure",
    "ParamContext",
    "PrecisionExhausted",
    "WindowOverflow",
    "__version__",
]
