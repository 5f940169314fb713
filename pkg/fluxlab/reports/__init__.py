"""
Report generation: CSV tables, SVG plots and operator dumps.
"""

from .report_gen import (
    dump_operator,
    emit_dataset,
    render_heatmap_svg,
    render_scatter_svg,
    write_csv,
)

__all__ = ["dump_operator", "emit_dataset", "render_heatmap_svg", "render_scatter_svg", "write_csv"]
