"""Figure rendering for campaign CSV outputs."""

from .render import PlotSpec, SchemaError, EmptyGroupError, render, series_count

__all__ = ["PlotSpec", "SchemaError", "EmptyGroupError", "render", "series_count"]
