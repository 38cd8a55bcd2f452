"""Figure rendering for simulator CSV output."""

from .figures import (
    AGG_COLUMNS,
    FIGURE_KINDS,
    SWEEP_COLUMNS,
    FigureSpec,
    SchemaError,
    plot_regret_vs_alpha,
    plot_regret_vs_turns,
)

__version__ = "0.1.0"

__all__ = [
    "AGG_COLUMNS",
    "FIGURE_KINDS",
    "SWEEP_COLUMNS",
    "FigureSpec",
    "SchemaError",
    "plot_regret_vs_alpha",
    "plot_regret_vs_turns",
]
