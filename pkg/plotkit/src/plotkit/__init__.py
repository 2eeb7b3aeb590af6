"""Figures from ptspectra CSV output.

Strictly a rendering layer: columns in, glyphs out. All classification
and fitting happens upstream; this package reads the CSVs (and their
.meta.json sidecars, when present) and never recomputes anything.
"""

from .errors import PlotkitError, SchemaError
from .figures import FigureRequest, build_figure, render
from .io import load_sidecar, load_table

__all__ = [
    "FigureRequest",
    "PlotkitError",
    "SchemaError",
    "build_figure",
    "load_sidecar",
    "load_table",
    "render",
]

__version__ = "0.1.0"
