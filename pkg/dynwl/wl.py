"""
Color refinement engines: plain 1-WL, attributed 1-WL (AWL) and dynamic 1-WL (DWL).

HASH is realised by interning canonical signatures into dense color ids, so two
signatures share a color exactly when they are equal. Each iteration has its own
interner namespace; color ids are handed out by first occurrence in ascending
node-id order, which makes every history reproducible.

Signatures:
    iteration 0      attr_bytes(alpha_v)
    iteration i, 1-WL (own color, sorted neighbour colors)
    iteration i, AWL  (own color, sorted (edge attr bytes, neighbour color) pairs)

Refinement stops when an iteration produces as many colors as the previous one
(classes only split, so equal counts mean equal partitions) or when max_iter
refinement steps have run.

Example usage:
    from dynwl.wl import run_awl, awl_graph_equivalent

    history = run_awl(g)
    history.partition()          # [(1, 3), (2,)]
    awl_graph_equivalent(g, h)   # True / False
"""

import logging
from collections import Counter
from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from .exceptions import EmptyGraph, NodeNotFound
from .graph import (
    BOTTOM,
    DynamicGraph,
    Sauhg,
    attr_bytes,
    disjoint_union,
    disjoint_union_dynamic,
    neighbor_edge_attrs,
    require_same_dims,
)
from .transform import align_timelines

logger = logging.getLogger(__name__)

Coloring = Mapping[int, int]

#: Color id reserved for nodes absent from a snapshot in a DWL run.
BOTTOM_COLOR = 0

# Edge key shared by every edge when attributes are ignored (1-WL).
_NO_EDGE_ATTR = b""


class ColorInterner:
    """
    Injective signature -> dense id table for one iteration.

    Example:
        >>> interner = ColorInterner()
        >>> interner.intern(b"a"), interner.intern(b"b"), interner.intern(b"a")
        (0, 1, 0)
    """

    def __init__(self, reserved: Sequence[Hashable] = ()):
        self._ids: dict[Hashable, int] = {}
        for signature in reserved:
            self.intern(signature)

    def intern(self, signature: Hashable) -> int:
        color = self._ids.get(signature)
        if color is None:
            color = len(self._ids)
            self._ids[signature] = color
        return color

    def __len__(self) -> int:
        return len(self._ids)


@dataclass(frozen=True)
class ColorHistory:
    """
    Per-iteration colorings of one refinement run.

    Attributes:
        per_iteration: per_iteration[i] maps node -> color at iteration i. When the
            run stabilised the list ends with iteration stable_at + 1, whose
            partition equals that of stable_at.
        stable_at: First iteration whose partition is stable, or None when max_iter
            stopped the run first
    """

    per_iteration: tuple[Coloring, ...]
    stable_at: int | None

    @property
    def final(self) -> Coloring:
        """Colors after the last computed iteration."""
        return self.per_iteration[-1]

    @property
    def iterations(self) -> int:
        """Number of refinement steps computed."""
        return len(self.per_iteration) - 1

    def colors_at(self, i: int) -> Coloring:
        """
        Coloring at iteration i.

        Past the end of a stable run the last coloring is returned, since the
        partition no longer changes.

        Raises:
            ValueError: i < 0, or i beyond a run that max_iter cut short
        """
        if i < 0:
            raise ValueError(f"iteration must be >= 0, got {i}")
        if i < len(self.per_iteration):
            return self.per_iteration[i]
        if self.stable_at is None:
            raise ValueError(
                f"iteration {i} was not computed and the run did not stabilise "
                f"(computed {self.iterations} steps)"
            )
        return self.per_iteration[-1]

    def num_colors(self, i: int | None = None) -> int:
        coloring = self.final if i is None else self.colors_at(i)
        return len(set(coloring.values()))

    def partition(self, i: int | None = None) -> list[tuple[int, ...]]:
        """Color classes as sorted node tuples, ordered by smallest member."""
        coloring = self.final if i is None else self.colors_at(i)
        return partition_of(coloring)

    def to_dict(self) -> dict[str, Any]:
        return {
            "stable_at": self.stable_at,
            "iterations": [
                {str(v): c for v, c in sorted(coloring.items())} for coloring in self.per_iteration
            ],
            "partition": [list(cls) for cls in self.partition()],
        }


@dataclass(frozen=True)
class DynColorHistory:
    """One ColorHistory per timestamp, each refined independently."""

    per_timestamp: tuple[ColorHistory, ...]

    def color_vectors(self) -> dict[int, tuple[int, ...]]:
        """node -> (stable color at t=0, ..., stable color at t=l)."""
        nodes = self.per_timestamp[0].final.keys()
        return {v: tuple(h.final[v] for h in self.per_timestamp) for v in nodes}

    def vectors_at(self, i: int) -> dict[int, tuple[int, ...]]:
        """node -> (color at iteration i for every timestamp)."""
        per_t = [h.colors_at(i) for h in self.per_timestamp]
        return {v: tuple(c[v] for c in per_t) for v in per_t[0]}

    def to_dict(self) -> dict[str, Any]:
        return {"timestamps": [h.to_dict() for h in self.per_timestamp]}


def partition_of(coloring: Coloring) -> list[tuple[int, ...]]:
    """Group nodes by color; classes sorted internally and by smallest member."""
    classes: dict[int, list[int]] = {}
    for v in sorted(coloring):
        classes.setdefault(coloring[v], []).append(v)
    return sorted(tuple(members) for members in classes.values())


NeighbourTable = Mapping[int, tuple[tuple[bytes, int], ...]]


def _refine(
    initial: Mapping[int, Hashable],
    neighbours: NeighbourTable,
    max_iter: int | None,
    reserved: Sequence[Hashable] = (),
    frozen: Iterable[int] = (),
) -> ColorHistory:
    """
    Shared refinement loop.

    Args:
        initial: node -> iteration-0 signature
        neighbours: node -> (edge key bytes, neighbour) pairs
        max_iter: Cap on refinement steps (None = until stable)
        reserved: Signatures interned first in every iteration
        frozen: Nodes whose signature is reserved[0] at every iteration
    """
    if max_iter is not None and max_iter < 0:
        raise ValueError(f"max_iter must be >= 0, got {max_iter}")
    order = sorted(initial)
    fixed = set(frozen)

    interner = ColorInterner(reserved)
    current = {v: interner.intern(initial[v]) for v in order}
    history = [current]
    stable_at: int | None = None
    step = 0
    while max_iter is None or step < max_iter:
        step += 1
        interner = ColorInterner(reserved)
        nxt: dict[int, int] = {}
        for v in order:
            if v in fixed:
                nxt[v] = interner.intern(reserved[0])
                continue
            signature = (
                current[v],
                tuple(sorted((key, current[u]) for key, u in neighbours[v])),
            )
            nxt[v] = interner.intern(signature)
        history.append(nxt)
        if len(set(nxt.values())) == len(set(current.values())):
            stable_at = step - 1
            break
        current = nxt
    logger.debug(
        "refinement over %d nodes: %d steps, stable_at=%s", len(order), step, stable_at
    )
    return ColorHistory(tuple(history), stable_at)


def _static_tables(g: Sauhg, key: Callable[[tuple[float, ...]], bytes]) -> NeighbourTable:
    return {v: tuple((key(vec), u) for u, vec in neighbor_edge_attrs(g, v)) for v in g.nodes}


def _run_static(g: Sauhg, max_iter: int | None, use_edge_attrs: bool) -> ColorHistory:
    if len(g) == 0:
        raise EmptyGraph("Refinement needs at least one node")
    key = attr_bytes if use_edge_attrs else (lambda _vec: _NO_EDGE_ATTR)
    initial = {v: attr_bytes(g.node_attrs[v]) for v in g.nodes}
    return _refine(initial, _static_tables(g, key), max_iter)


def run_1wl(g: Sauhg, max_iter: int | None = None) -> ColorHistory:
    """
    Plain 1-WL: node attributes seed the colors, edge attributes are ignored.

    Args:
        g: Non-empty graph
        max_iter: Optional cap on refinement steps

    Raises:
        EmptyGraph: g has no nodes
        ValueError: max_iter < 0

    Example:
        >>> run_1wl(path_3).partition()
        [(1, 3), (2,)]
    """
    return _run_static(g, max_iter, use_edge_attrs=False)


def run_awl(g: Sauhg, max_iter: int | None = None) -> ColorHistory:
    """
    Attributed 1-WL: each neighbour color is paired with the attribute of the
    edge leading to it.

    Raises:
        EmptyGraph: g has no nodes
        ValueError: max_iter < 0
    """
    return _run_static(g, max_iter, use_edge_attrs=True)


def run_dwl(dg: DynamicGraph, max_iter: int | None = None) -> DynColorHistory:
    """
    Dynamic 1-WL: an AWL run per snapshot over all nodes of the timeline.

    Nodes absent at t carry the reserved ⊥ color (BOTTOM_COLOR) at every
    iteration and have no neighbours. Every timestamp has its own interner and
    stops independently.

    Raises:
        ValueError: max_iter < 0
    """
    nodes = dg.union_nodes
    histories = []
    for s in dg.snapshots:
        initial = {
            v: attr_bytes(s.node_attrs[v]) if v in s.node_attrs else BOTTOM for v in nodes
        }
        table = dict(_static_tables(s, attr_bytes))
        absent = [v for v in nodes if v not in s.node_attrs]
        for v in absent:
            table[v] = ()
        histories.append(_refine(initial, table, max_iter, reserved=(BOTTOM,), frozen=absent))
    return DynColorHistory(tuple(histories))


def awl_node_equivalent(
    g1: Sauhg, u: int, g2: Sauhg, v: int, max_iter: int | None = None
) -> bool:
    """
    True iff u (in g1) and v (in g2) get the same stable AWL color in a joint run.

    Args:
        max_iter: Compare colors after at most this many steps instead of at stability

    Raises:
        NodeNotFound: u or v missing
        AttrDimMismatch: Graphs differ in attribute dimension
    """
    require_same_dims(g1, g2)
    if u not in g1:
        raise NodeNotFound(u, context={"graph": "first"})
    if v not in g2:
        raise NodeNotFound(v, context={"graph": "second"})
    union, remap = disjoint_union(g1, g2)
    final = run_awl(union, max_iter).final
    return final[u] == final[remap[v]]


def _graph_equivalent(g1: Sauhg, g2: Sauhg, runner: Callable[[Sauhg], ColorHistory]) -> bool:
    require_same_dims(g1, g2)
    if len(g1) != len(g2):
        return False
    if len(g1) == 0:
        return True
    union, remap = disjoint_union(g1, g2)
    final = runner(union).final
    left = Counter(final[v] for v in g1.nodes)
    right = Counter(final[remap[v]] for v in g2.nodes)
    return left == right


def awl_graph_equivalent(g1: Sauhg, g2: Sauhg) -> bool:
    """
    True iff the stable AWL color multisets of g1 and g2 agree in a joint run.

    Multiset (not set) comparison, so equivalent graphs have equal node counts.

    Raises:
        AttrDimMismatch: Graphs differ in attribute dimension
    """
    return _graph_equivalent(g1, g2, run_awl)


def wl_graph_equivalent(g1: Sauhg, g2: Sauhg) -> bool:
    """Plain 1-WL counterpart of awl_graph_equivalent()."""
    return _graph_equivalent(g1, g2, run_1wl)


def dwl_node_equivalent(
    dg1: DynamicGraph, u: int, dg2: DynamicGraph, v: int, pad: bool = False
) -> bool:
    """
    True iff u and v share their stable DWL color at every timestamp.

    Raises:
        NodeNotFound: u or v never appears in its graph
        TimelineMismatch: Timelines differ and pad is False
    """
    dg1, dg2 = align_timelines(dg1, dg2, pad)
    if u not in dg1.union_nodes:
        raise NodeNotFound(u, context={"graph": "first"})
    if v not in dg2.union_nodes:
        raise NodeNotFound(v, context={"graph": "second"})
    union, remap = disjoint_union_dynamic(dg1, dg2)
    vectors = run_dwl(union).color_vectors()
    return vectors[u] == vectors[remap[v]]


def dwl_equivalent(dg1: DynamicGraph, dg2: DynamicGraph, pad: bool = False) -> bool:
    """
    Graph-level DWL equivalence.

    Compares the multisets of per-node color vectors (one entry per timestamp)
    of a joint per-timestamp run, so a matching correspondence must agree at
    every timestamp simultaneously.

    Args:
        pad: Pad the shorter timeline with empty snapshots instead of raising

    Raises:
        TimelineMismatch: Timelines differ and pad is False
        AttrDimMismatch: Graphs differ in attribute dimension
    """
    dg1, dg2 = align_timelines(dg1, dg2, pad)
    left_nodes, right_nodes = dg1.union_nodes, dg2.union_nodes
    if len(left_nodes) != len(right_nodes):
        return False
    if not left_nodes:
        return True
    union, remap = disjoint_union_dynamic(dg1, dg2)
    vectors = run_dwl(union).color_vectors()
    left = Counter(vectors[v] for v in left_nodes)
    right = Counter(vectors[remap[v]] for v in right_nodes)
    return left == right
