"""Deterministic panel regeneration from focklaser CLI outputs."""

__version__ = "0.1.0"

from .figures import RENDERERS, render
from .reader import FigureSpec, ResultFile, SchemaError, read_result

__all__ = ["__version__", "render", "RENDERERS", "FigureSpec", "ResultFile",
           "SchemaError", "read_result"]
