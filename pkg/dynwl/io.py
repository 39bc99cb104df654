"""
JSON graph file format.

Static graph:
    {"attr_dim": k,
     "nodes": [{"id": n, "attr": [k floats]}, ...],
     "edges": [{"u": a, "v": b, "attr": [k floats]}, ...]}

Dynamic graph:
    {"timeline_len": l + 1, "snapshots": [<static graph>, ...]}

A node absent from a snapshot is simply omitted from that snapshot's node list.
Output is written with sorted nodes/edges so equal graphs give equal files.

Example usage:
    from dynwl.io import load_graph, dump_graph

    g = load_graph("corpus/g0001.json")
    dump_graph(g, "copy.json")
"""

import hashlib
import json
from pathlib import Path
from typing import Any

from .exceptions import DynwlException, GraphFormatError
from .graph import DynamicGraph, Sauhg


def graph_to_dict(g: Sauhg) -> dict[str, Any]:
    """Serialise a static graph into the JSON document structure."""
    return {
        "attr_dim": g.attr_dim,
        "nodes": [{"id": v, "attr": list(g.node_attrs[v])} for v in g.nodes],
        "edges": [{"u": u, "v": v, "attr": list(g.edge_attrs[(u, v)])} for u, v in g.edges],
    }


def dynamic_to_dict(dg: DynamicGraph) -> dict[str, Any]:
    return {
        "timeline_len": len(dg.snapshots),
        "snapshots": [graph_to_dict(s) for s in dg.snapshots],
    }


def graph_from_dict(data: dict[str, Any]) -> Sauhg:
    """
    Parse a static graph document.

    Raises:
        GraphFormatError: Missing keys or malformed entries
        InvalidGraph: Values violate graph invariants
    """
    try:
        attr_dim = int(data["attr_dim"])
        nodes = {int(n["id"]): n["attr"] for n in data["nodes"]}
        edges = {(int(e["u"]), int(e["v"])): e["attr"] for e in data["edges"]}
    except (KeyError, TypeError, ValueError) as e:
        raise GraphFormatError(f"Malformed graph document: {e}", context={"error": repr(e)}) from e
    if len(nodes) != len(data["nodes"]):
        raise GraphFormatError("Duplicate node id in graph document")
    try:
        return Sauhg.build(attr_dim, nodes, edges)
    except (TypeError, ValueError) as e:
        raise GraphFormatError(
            f"Non-numeric attribute in graph document: {e}", context={"error": repr(e)}
        ) from e


def dynamic_from_dict(data: dict[str, Any]) -> DynamicGraph:
    """
    Parse a dynamic graph document.

    Raises:
        GraphFormatError: Missing keys or timeline_len disagreeing with the snapshots
    """
    try:
        timeline_len = int(data["timeline_len"])
        raw_snapshots = list(data["snapshots"])
    except (KeyError, TypeError, ValueError) as e:
        raise GraphFormatError(
            f"Malformed dynamic graph document: {e}", context={"error": repr(e)}
        ) from e
    if timeline_len != len(raw_snapshots):
        raise GraphFormatError(
            "timeline_len disagrees with number of snapshots",
            context={"timeline_len": timeline_len, "snapshots": len(raw_snapshots)},
        )
    if not raw_snapshots:
        raise GraphFormatError("Dynamic graph document has no snapshots")
    snapshots = tuple(graph_from_dict(s) for s in raw_snapshots)
    return DynamicGraph(snapshots[0].attr_dim, snapshots)


def is_dynamic_document(data: dict[str, Any]) -> bool:
    return "snapshots" in data


def to_dict(g: Sauhg | DynamicGraph) -> dict[str, Any]:
    return dynamic_to_dict(g) if isinstance(g, DynamicGraph) else graph_to_dict(g)


def canonical_json(data: Any) -> str:
    """Compact JSON with sorted keys; the byte form used for hashes and reports."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def content_hash(g: Sauhg | DynamicGraph) -> str:
    """sha256 of the canonical JSON form of a graph."""
    return hashlib.sha256(canonical_json(to_dict(g)).encode()).hexdigest()


def _read_json(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as e:
        raise GraphFormatError(f"Cannot read {path}: {e}", context={"path": str(path)}) from e
    except json.JSONDecodeError as e:
        raise GraphFormatError(
            "Invalid JSON", context={"path": str(path), "error": str(e)}
        ) from e
    if not isinstance(data, dict):
        raise GraphFormatError("Graph document must be a JSON object", context={"path": str(path)})
    return data


def load_any(path: str | Path) -> Sauhg | DynamicGraph:
    """Load a static or dynamic graph, deciding by the presence of "snapshots"."""
    data = _read_json(path)
    try:
        return dynamic_from_dict(data) if is_dynamic_document(data) else graph_from_dict(data)
    except DynwlException as e:
        e.context.setdefault("path", str(path))
        raise


def load_graph(path: str | Path) -> Sauhg:
    """
    Load a static graph file.

    Raises:
        GraphFormatError: File unreadable, not JSON, or a dynamic document
    """
    g = load_any(path)
    if isinstance(g, DynamicGraph):
        raise GraphFormatError("Expected a static graph", context={"path": str(path)})
    return g


def load_dynamic(path: str | Path) -> DynamicGraph:
    """
    Load a dynamic graph file.

    Raises:
        GraphFormatError: File unreadable, not JSON, or a static document
    """
    g = load_any(path)
    if not isinstance(g, DynamicGraph):
        raise GraphFormatError("Expected a dynamic graph", context={"path": str(path)})
    return g


def dump_graph(g: Sauhg | DynamicGraph, path: str | Path) -> None:
    """Write a graph as indented JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_dict(g), indent=2) + "\n")
