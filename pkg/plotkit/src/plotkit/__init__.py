"""plotkit: turn simphase CSV/JSON outputs into publication figures.

Reads only the documented file contracts (see FORMATS.md in the repo
root); theory values, including the threshold markers, come from the
input columns and are never recomputed here.
"""

__version__ = "0.1.0"

from .figures import FigureSpec, SchemaMismatch, build_figure, render

__all__ = ["__version__", "FigureSpec", "SchemaMismatch", "build_figure",
           "render"]
