"""Offline rendering of drift-error figures from solver diagnostic CSVs."""

from .figure import (
    DEFAULT_PANELS,
    FigureSpec,
    MissingColumnError,
    RenderResult,
    render_figure,
)

__all__ = [
    "DEFAULT_PANELS",
    "FigureSpec",
    "MissingColumnError",
    "RenderResult",
    "render_figure",
]

__version__ = "0.1.0"
