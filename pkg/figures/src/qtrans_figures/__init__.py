"""Publication-style figures from exported experiment artifacts."""

from .render import (FigureSpec, load_figure_specs, read_metrics,
                     read_predictions, render)

__all__ = [
    "FigureSpec",
    "load_figure_specs",
    "read_metrics",
    "read_predictions",
    "render",
]
