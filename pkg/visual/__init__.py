"""
Visual module for report tables and graph export.
"""
from .graph_export import GraphExporter, export_graph
from .render import render_report, render_workflow

__all__ = [
    'GraphExporter',
    'export_graph',
    'render_report',
    'render_workflow',
]
