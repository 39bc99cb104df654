"""
Graph data model: static attributed undirected homogeneous graphs (SAUHGs)
and discrete dynamic graphs built from SAUHG snapshots.

Graphs are immutable after construction. Every query is pure, so graphs can
be shared freely between threads.

Example usage:
    from dynwl.graph import Sauhg, neighbors, diameter

    g = Sauhg.build(
        attr_dim=1,
        nodes={1: [0.0], 2: [0.0], 3: [0.0]},
        edges={(1, 2): [1.0], (2, 3): [1.0]},
    )
    neighbors(g, 2)   # (1, 3)
    diameter(g)       # 2
"""

import math
import struct
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, TypeAlias

import networkx as nx  # type: ignore[import-untyped]

from .exceptions import AttrDimMismatch, EmptyGraph, InvalidGraph, NodeNotFound

AttrVec: TypeAlias = tuple[float, ...]
EdgeKey: TypeAlias = tuple[int, int]


class Absent(Enum):
    """Absence marker ⊥ for a node or edge at a timestamp."""

    BOTTOM = "⊥"

    def __repr__(self) -> str:
        return "⊥"


BOTTOM = Absent.BOTTOM

MaybeAttr: TypeAlias = AttrVec | Absent


def edge_key(u: int, v: int) -> EdgeKey:
    """Canonical (min, max) key of the undirected edge {u, v}."""
    return (u, v) if u <= v else (v, u)


def make_attr(values: Iterable[float], attr_dim: int) -> AttrVec:
    """
    Validate and normalise an attribute vector.

    -0.0 is stored as 0.0 so that tuple equality and byte equality agree.

    Raises:
        InvalidGraph: Wrong length or a non-finite entry
    """
    vec = tuple(float(x) + 0.0 for x in values)
    if len(vec) != attr_dim:
        raise InvalidGraph(
            "Attribute length differs from attr_dim",
            context={"expected": attr_dim, "got": len(vec)},
        )
    if not all(math.isfinite(x) for x in vec):
        raise InvalidGraph("Attribute contains NaN or Inf", context={"attr": vec})
    return vec


def attr_bytes(vec: AttrVec) -> bytes:
    """Canonical serialisation of an attribute vector (length prefix + big-endian doubles)."""
    return struct.pack(f">I{len(vec)}d", len(vec), *vec)


@dataclass(frozen=True)
class Sauhg:
    """
    Static, nodes/edges attributed, undirected, homogeneous graph.

    Attributes:
        attr_dim: Attribute dimension k shared by node and edge attributes
        node_attrs: node id -> attribute vector (alpha)
        edge_attrs: canonical (min, max) edge key -> attribute vector (omega);
            a self-loop on v is stored as (v, v)

    Use Sauhg.build() to construct from loosely typed input.
    """

    attr_dim: int
    node_attrs: Mapping[int, AttrVec]
    edge_attrs: Mapping[EdgeKey, AttrVec]
    _adjacency: Mapping[int, tuple[int, ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.attr_dim < 0:
            raise InvalidGraph("attr_dim must be non-negative", context={"attr_dim": self.attr_dim})
        # -0.0 + 0.0 is 0.0
        node_attrs = {v: tuple(float(x) + 0.0 for x in vec) for v, vec in self.node_attrs.items()}
        edge_attrs = {e: tuple(float(x) + 0.0 for x in vec) for e, vec in self.edge_attrs.items()}
        adjacency: dict[int, set[int]] = {v: set() for v in self.node_attrs}
        for v, vec in node_attrs.items():
            if not all(math.isfinite(x) for x in vec):
                raise InvalidGraph("Attribute contains NaN or Inf", context={"node": v})
            if len(vec) != self.attr_dim:
                raise InvalidGraph(
                    "Node attribute length differs from attr_dim",
                    context={"node": v, "expected": self.attr_dim, "got": len(vec)},
                )
        for (u, v), vec in edge_attrs.items():
            if not all(math.isfinite(x) for x in vec):
                raise InvalidGraph("Attribute contains NaN or Inf", context={"edge": (u, v)})
            if u > v:
                raise InvalidGraph("Edge key is not canonical", context={"edge": (u, v)})
            if u not in adjacency or v not in adjacency:
                raise InvalidGraph("Edge endpoint is not a node", context={"edge": (u, v)})
            if len(vec) != self.attr_dim:
                raise InvalidGraph(
                    "Edge attribute length differs from attr_dim",
                    context={"edge": (u, v), "expected": self.attr_dim, "got": len(vec)},
                )
            adjacency[u].add(v)
            adjacency[v].add(u)
        frozen = {v: tuple(sorted(nbrs)) for v, nbrs in adjacency.items()}
        object.__setattr__(self, "node_attrs", MappingProxyType(node_attrs))
        object.__setattr__(self, "edge_attrs", MappingProxyType(edge_attrs))
        object.__setattr__(self, "_adjacency", MappingProxyType(frozen))

    @classmethod
    def build(
        cls,
        attr_dim: int,
        nodes: Mapping[int, Iterable[float]],
        edges: Mapping[tuple[int, int], Iterable[float]] | None = None,
    ) -> "Sauhg":
        """
        Create a validated graph from plain mappings.

        Args:
            attr_dim: Attribute dimension k
            nodes: node id -> attribute values
            edges: (u, v) -> attribute values; (u, v) and (v, u) name the same edge

        Returns:
            Immutable Sauhg

        Raises:
            InvalidGraph: Non-finite or wrongly sized attribute, dangling or duplicate edge

        Example:
            >>> g = Sauhg.build(1, {0: [1.0], 1: [1.0]}, {(1, 0): [2.0]})
            >>> g.edge_attrs[(0, 1)]
            (2.0,)
        """
        node_attrs = {int(v): make_attr(vec, attr_dim) for v, vec in nodes.items()}
        edge_attrs: dict[EdgeKey, AttrVec] = {}
        for (u, v), vec in (edges or {}).items():
            key = edge_key(int(u), int(v))
            if key in edge_attrs:
                raise InvalidGraph("Duplicate edge", context={"edge": key})
            edge_attrs[key] = make_attr(vec, attr_dim)
        return cls(attr_dim, node_attrs, edge_attrs)

    @classmethod
    def empty(cls, attr_dim: int) -> "Sauhg":
        """Graph without nodes (used for padded snapshots)."""
        return cls(attr_dim, {}, {})

    @property
    def nodes(self) -> tuple[int, ...]:
        """Node ids in ascending order."""
        return tuple(sorted(self.node_attrs))

    @property
    def edges(self) -> tuple[EdgeKey, ...]:
        """Canonical edge keys in ascending order."""
        return tuple(sorted(self.edge_attrs))

    def __len__(self) -> int:
        return len(self.node_attrs)

    def __contains__(self, v: object) -> bool:
        return v in self.node_attrs

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_attrs


def _require_node(g: Sauhg, v: int) -> None:
    if v not in g.node_attrs:
        raise NodeNotFound(v)


def neighbors(g: Sauhg, v: int) -> tuple[int, ...]:
    """
    Neighbours of v sorted ascending by node id.

    v itself is included (once) iff a self-loop on v exists.

    Raises:
        NodeNotFound: v is not a node of g
    """
    _require_node(g, v)
    return g._adjacency[v]


def neighbor_edge_attrs(g: Sauhg, v: int) -> tuple[tuple[int, AttrVec], ...]:
    """
    (neighbour, omega of the connecting edge) pairs aligned with neighbors(g, v).

    Raises:
        NodeNotFound: v is not a node of g
    """
    return tuple((u, g.edge_attrs[edge_key(u, v)]) for u in neighbors(g, v))


def to_networkx(g: Sauhg) -> nx.Graph:
    """Export as networkx.Graph with "attr" data on nodes and edges."""
    nxg = nx.Graph()
    for v, vec in g.node_attrs.items():
        nxg.add_node(v, attr=vec)
    for (u, v), vec in g.edge_attrs.items():
        nxg.add_edge(u, v, attr=vec)
    return nxg


def diameter(g: Sauhg) -> int:
    """
    Maximum finite eccentricity over all connected components.

    A single node or an edgeless graph has diameter 0. Infinite eccentricities
    between components are ignored.

    Raises:
        EmptyGraph: g has no nodes
    """
    if not g.node_attrs:
        raise EmptyGraph("diameter() needs at least one node")
    nxg = to_networkx(g)
    best = 0
    for component in nx.connected_components(nxg):
        if len(component) > 1:
            best = max(best, nx.diameter(nxg.subgraph(component)))
    return best


def snapshot_diameter(g: Sauhg) -> int:
    """diameter() that treats an empty snapshot as diameter 0."""
    return diameter(g) if g.node_attrs else 0


def relabel(g: Sauhg, mapping: Mapping[int, int]) -> Sauhg:
    """
    Rename nodes through an injective mapping covering every node.

    Raises:
        InvalidGraph: mapping misses a node or is not injective
    """
    missing = [v for v in g.node_attrs if v not in mapping]
    if missing:
        raise InvalidGraph("Relabelling misses nodes", context={"missing": missing})
    if len({mapping[v] for v in g.node_attrs}) != len(g.node_attrs):
        raise InvalidGraph("Relabelling is not injective")
    return Sauhg(
        g.attr_dim,
        {mapping[v]: vec for v, vec in g.node_attrs.items()},
        {edge_key(mapping[u], mapping[v]): vec for (u, v), vec in g.edge_attrs.items()},
    )


def _merge(g1: Sauhg, g2: Sauhg) -> Sauhg:
    return Sauhg(
        g1.attr_dim,
        {**g1.node_attrs, **g2.node_attrs},
        {**g1.edge_attrs, **g2.edge_attrs},
    )


def disjoint_union(g1: Sauhg, g2: Sauhg) -> tuple[Sauhg, dict[int, int]]:
    """
    Disjoint union keeping g1's ids and shifting g2's ids past max(g1).

    Args:
        g1: First graph (ids unchanged)
        g2: Second graph (ids shifted)

    Returns:
        (union graph, remap of g2 ids to union ids)

    Raises:
        AttrDimMismatch: g1 and g2 have different attribute dimensions

    Example:
        >>> union, remap = disjoint_union(triangle, triangle)
        >>> len(union), len(union.edge_attrs)
        (6, 6)
    """
    if g1.attr_dim != g2.attr_dim:
        raise AttrDimMismatch(g1.attr_dim, g2.attr_dim)
    offset = max(g1.node_attrs) + 1 if g1.node_attrs else 0
    remap = {v: v + offset for v in g2.node_attrs}
    return _merge(g1, relabel(g2, remap)), remap


def quantize(g: Sauhg, digits: int) -> Sauhg:
    """Round every attribute entry to `digits` decimal digits."""

    def q(vec: AttrVec) -> AttrVec:
        return tuple(round(x, digits) + 0.0 for x in vec)

    return Sauhg(
        g.attr_dim,
        {v: q(vec) for v, vec in g.node_attrs.items()},
        {e: q(vec) for e, vec in g.edge_attrs.items()},
    )


@dataclass(frozen=True)
class DynamicGraph:
    """
    Discrete dynamic graph: one SAUHG snapshot per timestamp t in 0..l.

    A node missing from snapshot t has attribute ⊥ at t, likewise for edges.

    Attributes:
        attr_dim: Attribute dimension k shared by all snapshots
        snapshots: Snapshot graphs indexed by timestamp
    """

    attr_dim: int
    snapshots: tuple[Sauhg, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        if not self.snapshots:
            raise InvalidGraph("Dynamic graph needs at least one snapshot")
        dims = {s.attr_dim for s in self.snapshots}
        if dims != {self.attr_dim}:
            raise InvalidGraph(
                "Snapshots disagree on attr_dim",
                context={"attr_dim": self.attr_dim, "snapshot_dims": sorted(dims)},
            )

    @property
    def timeline(self) -> range:
        return range(len(self.snapshots))

    @property
    def union_nodes(self) -> tuple[int, ...]:
        """All node ids appearing in any snapshot, ascending."""
        return tuple(sorted({v for s in self.snapshots for v in s.node_attrs}))

    @property
    def union_edges(self) -> tuple[EdgeKey, ...]:
        return tuple(sorted({e for s in self.snapshots for e in s.edge_attrs}))

    def snapshot(self, t: int) -> Sauhg:
        return self.snapshots[t]

    def node_attr_at(self, v: int, t: int) -> MaybeAttr:
        """alpha_v(t), or BOTTOM when v does not exist at t."""
        return self.snapshots[t].node_attrs.get(v, BOTTOM)

    def edge_attr_at(self, u: int, v: int, t: int) -> MaybeAttr:
        """omega_{u,v}(t), or BOTTOM when the edge does not exist at t."""
        return self.snapshots[t].edge_attrs.get(edge_key(u, v), BOTTOM)


def disjoint_union_dynamic(
    dg1: DynamicGraph, dg2: DynamicGraph
) -> tuple[DynamicGraph, dict[int, int]]:
    """
    Timestamp-wise disjoint union with one id shift for all snapshots.

    Both graphs must share the same timeline length.

    Raises:
        AttrDimMismatch: Attribute dimensions differ
        InvalidGraph: Timelines differ in length
    """
    if dg1.attr_dim != dg2.attr_dim:
        raise AttrDimMismatch(dg1.attr_dim, dg2.attr_dim)
    if len(dg1.snapshots) != len(dg2.snapshots):
        raise InvalidGraph(
            "Timelines differ",
            context={"left": len(dg1.snapshots), "right": len(dg2.snapshots)},
        )
    left = dg1.union_nodes
    offset = left[-1] + 1 if left else 0
    remap = {v: v + offset for v in dg2.union_nodes}
    snapshots = []
    for s1, s2 in zip(dg1.snapshots, dg2.snapshots, strict=True):
        shifted = relabel(s2, {v: remap[v] for v in s2.node_attrs})
        snapshots.append(_merge(s1, shifted))
    return DynamicGraph(dg1.attr_dim, tuple(snapshots)), remap


def require_same_dims(a: Sauhg | DynamicGraph, b: Sauhg | DynamicGraph) -> None:
    """
    Raises:
        AttrDimMismatch: a and b have different attribute dimensions
    """
    if a.attr_dim != b.attr_dim:
        raise AttrDimMismatch(a.attr_dim, b.attr_dim)


def quantize_dynamic(dg: DynamicGraph, digits: int) -> DynamicGraph:
    return DynamicGraph(dg.attr_dim, tuple(quantize(s, digits) for s in dg.snapshots))


def describe(g: Sauhg | DynamicGraph) -> dict[str, Any]:
    """Small summary dict for logs and CLI output."""
    if isinstance(g, DynamicGraph):
        return {
            "timeline_len": len(g.snapshots),
            "union_nodes": len(g.union_nodes),
            "union_edges": len(g.union_edges),
            "attr_dim": g.attr_dim,
        }
    return {"nodes": len(g.node_attrs), "edges": len(g.edge_attrs), "attr_dim": g.attr_dim}
