"""
Export interaction graphs (with their generators) using NetworkX.
"""
import json
from pathlib import Path
from typing import Optional

from networkx.readwrite import json_graph

from core.errors import InvalidArgumentError
from core.lattice import Graph, LatticeSpec, generators, save_graph_file


class GraphExporter:
    """
    Builds an annotated NetworkX graph: every node carries the label of its
    generator S_a, lattice nodes also carry their coordinates.
    """
    def __init__(self, g: Graph, lattice: Optional[LatticeSpec] = None):
        self.source = g
        self.graph = g.to_networkx()
        for gen in generators(g):
            site = gen.generators[0]
            self.graph.nodes[site]["generator"] = gen.label
            self.graph.nodes[site]["degree"] = self.graph.degree[site]
        if lattice is not None and lattice.site_count == g.site_count:
            for site in self.graph.nodes:
                self.graph.nodes[site]["coords"] = list(lattice.coords(site))

    def export_to_json(self, output_path: str) -> Path:
        """
        Export the graph to node-link JSON.

        Args:
            output_path: Path to save the JSON file
        """
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = json_graph.node_link_data(self.graph)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True)
        return path

    def export_to_text(self, output_path: str) -> Path:
        """Plain 'sites N' / 'edge i j' format, readable by parse_graph_spec."""
        return save_graph_file(self.source, output_path)


def export_graph(g: Graph, output_path: str, output_format: str = "json") -> Path:
    """
    Helper to export a graph in one call.

    Args:
        g: Graph to export
        output_path: Destination file
        output_format: 'json' (node-link) or 'text' (graph file)
    """
    exporter = GraphExporter(g, _lattice_of(g))
    if output_format == "json":
        return exporter.export_to_json(output_path)
    if output_format == "text":
        return exporter.export_to_text(output_path)
    raise InvalidArgumentError(f"unknown graph format {output_format!r}; use json or text")


def _lattice_of(g: Graph) -> Optional[LatticeSpec]:
    # names like '3x3' or '1d:4' come from build_lattice
    name = g.name
    try:
        if name.startswith("1d:"):
            return LatticeSpec(extents=(int(name[3:]),))
        if "x" in name:
            return LatticeSpec(extents=tuple(int(v) for v in name.split("x")))
    except ValueError:
        return None
    return None
