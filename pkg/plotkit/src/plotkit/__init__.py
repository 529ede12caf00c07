"""Publication-style figures from stabmagic experiment CSVs."""

from .figures import CSV_HEADER, KINDS, FigureError, FigureSpec, build_figure, read_table, render_figures

__all__ = [
    "CSV_HEADER", "KINDS", "FigureError", "FigureSpec",
    "build_figure", "read_table", "render_figures",
]
__version__ = "0.1.0"
