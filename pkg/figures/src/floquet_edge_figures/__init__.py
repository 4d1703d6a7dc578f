"""Figure rendering for floquet-edge CSV datasets.

Consumes the exported CSV files (traces, sweeps, snapshots, bands, golden-rule
tables) and renders publication-style figures.  Rendering is read-only: no physics
is recomputed, so figures regenerate from the data files alone.
"""

from .recipe import FigureRecipe, load_recipe
from .render import FigureError, SchemaError, render

__version__ = "0.1.0"

__all__ = [
    "FigureRecipe",
    "load_recipe",
    "render",
    "FigureError",
    "SchemaError",
    "__version__",
]
