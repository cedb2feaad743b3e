"""Static figure panels for nkgroups result tables."""

from .render import (
    CELL_COLUMNS,
    KINDS,
    PD_TABLES,
    FigureRequest,
    SchemaError,
    StyleOptions,
    build_figure,
    build_learning,
    build_overview,
    build_structure,
    build_surfaces,
    load_cells,
    load_pd_tables,
    render,
    save_figure,
)

__all__ = [
    "CELL_COLUMNS",
    "KINDS",
    "PD_TABLES",
    "FigureRequest",
    "SchemaError",
    "StyleOptions",
    "build_figure",
    "build_learning",
    "build_overview",
    "build_structure",
    "build_surfaces",
    "load_cells",
    "load_pd_tables",
    "render",
    "save_figure",
]
