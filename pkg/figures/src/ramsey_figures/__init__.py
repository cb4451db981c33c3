"""Plot renderer for ramseylab CSV output."""

from .render import (
    PlotSpec,
    RenderError,
    Series,
    read_columns,
    render,
    render_coherence_comparison,
    render_component_breakdown,
)

__version__ = "0.1.0"
