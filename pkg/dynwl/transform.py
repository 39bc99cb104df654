"""
Dynamic graph <-> SAUHG transformation (makeStatic and its inverse).

A node or edge of a dynamic graph becomes a node or edge of the static graph
whose attribute is the time series of its values with an existence flag per
timestamp. Layout of a statified attribute (format-normative):

    (slot t=0, flag t=0, slot t=1, flag t=1, ..., slot t=l, flag t=l)

Each slot has k entries; a flag is 1.0 when the element exists at t and 0.0
when it is absent (⊥), in which case the slot is all zeros. The static
attribute dimension is therefore (k + 1) * timeline_len.

Example usage:
    from dynwl.transform import make_static, make_dynamic

    static = make_static(dg)
    assert make_dynamic(static, len(dg.snapshots), dg.attr_dim) == dg
"""

import logging
from collections.abc import Sequence

from .exceptions import AttrDimMismatch, NotStatified, TimelineMismatch
from .graph import BOTTOM, AttrVec, DynamicGraph, EdgeKey, MaybeAttr, Sauhg

logger = logging.getLogger(__name__)

PRESENT = 1.0
ABSENT = 0.0


def extended_attr(series: Sequence[MaybeAttr], attr_dim: int) -> AttrVec:
    """
    Flatten a per-timestamp series of attributes into one statified vector.

    Args:
        series: alpha(t) (or omega(t)) for every timestamp, BOTTOM when absent
        attr_dim: Original attribute dimension k

    Returns:
        Vector of length (k + 1) * len(series)

    Example:
        >>> extended_attr([(3.0,), BOTTOM], 1)
        (3.0, 1.0, 0.0, 0.0)
    """
    out: list[float] = []
    for value in series:
        if value is BOTTOM:
            out.extend([0.0] * attr_dim)
            out.append(ABSENT)
        else:
            out.extend(value)
            out.append(PRESENT)
    return tuple(out)


def split_extended(vec: AttrVec, timeline_len: int, attr_dim: int) -> list[MaybeAttr]:
    """
    Inverse of extended_attr().

    Raises:
        NotStatified: Wrong length, a flag outside {0, 1}, or a non-zero slot under flag 0
    """
    width = attr_dim + 1
    if len(vec) != width * timeline_len:
        raise NotStatified(
            "Attribute length is not (k + 1) * timeline_len",
            context={"length": len(vec), "attr_dim": attr_dim, "timeline_len": timeline_len},
        )
    series: list[MaybeAttr] = []
    for t in range(timeline_len):
        chunk = vec[t * width : (t + 1) * width]
        slot, flag = chunk[:attr_dim], chunk[attr_dim]
        if flag == PRESENT:
            series.append(tuple(slot))
        elif flag == ABSENT:
            if any(x != 0.0 for x in slot):
                raise NotStatified("Absent slot is not all zeros", context={"t": t})
            series.append(BOTTOM)
        else:
            raise NotStatified("Existence flag must be 0 or 1", context={"t": t, "flag": flag})
    return series


def make_static(dg: DynamicGraph) -> Sauhg:
    """
    Encode a dynamic graph as a SAUHG with time-series attributes.

    Node ids are kept unchanged. The node set is the union of all snapshot
    node sets and the edge set the union of all snapshot edge sets.

    Args:
        dg: Dynamic graph over timestamps 0..l

    Returns:
        Static graph with attr_dim (k + 1) * (l + 1)

    Example:
        >>> g = make_static(dg)   # node present at t=0 only, alpha=[3.0]
        >>> g.node_attrs[v]
        (3.0, 1.0, 0.0, 0.0)
    """
    k = dg.attr_dim
    nodes = {
        v: extended_attr([dg.node_attr_at(v, t) for t in dg.timeline], k)
        for v in dg.union_nodes
    }
    edges = {
        (u, v): extended_attr([dg.edge_attr_at(u, v, t) for t in dg.timeline], k)
        for u, v in dg.union_edges
    }
    logger.debug(
        "statified %d nodes, %d edges over %d timestamps",
        len(nodes),
        len(edges),
        len(dg.snapshots),
    )
    return Sauhg((k + 1) * len(dg.snapshots), nodes, edges)


def make_dynamic(g: Sauhg, timeline_len: int, attr_dim: int) -> DynamicGraph:
    """
    Decode a statified SAUHG back into a dynamic graph.

    Args:
        g: Static graph produced by make_static() (or hand-built in that layout)
        timeline_len: Number of timestamps l + 1
        attr_dim: Original attribute dimension k

    Returns:
        Dynamic graph with make_dynamic(make_static(dg), ...) == dg

    Raises:
        ValueError: timeline_len < 1 or attr_dim < 0
        NotStatified: Layout or flag convention violated, a node or edge that
            never exists, or an edge present while an endpoint is absent
    """
    if timeline_len < 1:
        raise ValueError(f"timeline_len must be >= 1, got {timeline_len}")
    if attr_dim < 0:
        raise ValueError(f"attr_dim must be >= 0, got {attr_dim}")
    if g.attr_dim != (attr_dim + 1) * timeline_len:
        raise NotStatified(
            "attr_dim is not (k + 1) * timeline_len",
            context={"attr_dim": g.attr_dim, "k": attr_dim, "timeline_len": timeline_len},
        )

    node_series: dict[int, list[MaybeAttr]] = {}
    for v in g.nodes:
        series = split_extended(g.node_attrs[v], timeline_len, attr_dim)
        if all(value is BOTTOM for value in series):
            raise NotStatified("Node never exists", context={"node": v})
        node_series[v] = series

    edge_series: dict[EdgeKey, list[MaybeAttr]] = {}
    for e in g.edges:
        series = split_extended(g.edge_attrs[e], timeline_len, attr_dim)
        if all(value is BOTTOM for value in series):
            raise NotStatified("Edge never exists", context={"edge": e})
        for t, value in enumerate(series):
            if value is not BOTTOM and any(node_series[x][t] is BOTTOM for x in e):
                raise NotStatified(
                    "Edge exists while an endpoint is absent", context={"edge": e, "t": t}
                )
        edge_series[e] = series

    snapshots = []
    for t in range(timeline_len):
        nodes = {v: s[t] for v, s in node_series.items() if s[t] is not BOTTOM}
        edges = {e: s[t] for e, s in edge_series.items() if s[t] is not BOTTOM}
        snapshots.append(Sauhg(attr_dim, nodes, edges))  # type: ignore[arg-type]
    return DynamicGraph(attr_dim, tuple(snapshots))


def pad_timeline(graphs: Sequence[DynamicGraph]) -> list[DynamicGraph]:
    """
    Extend every graph with empty snapshots up to the longest timeline.

    Graphs already at full length are returned unchanged (same object).

    Example:
        >>> a, b = pad_timeline([one_snapshot, two_snapshots])
        >>> len(a.snapshots), len(a.snapshots[1])
        (2, 0)
    """
    if not graphs:
        return []
    longest = max(len(dg.snapshots) for dg in graphs)
    padded = []
    for dg in graphs:
        missing = longest - len(dg.snapshots)
        if missing:
            filler = tuple(Sauhg.empty(dg.attr_dim) for _ in range(missing))
            dg = DynamicGraph(dg.attr_dim, dg.snapshots + filler)
        padded.append(dg)
    return padded


def stamp_time(dg: DynamicGraph) -> DynamicGraph:
    """
    Time-variant option: append the timestamp t as one extra attribute entry.

    Every node and edge attribute at snapshot t gains a trailing t, so two
    otherwise identical snapshots at different times no longer look alike.
    """
    snapshots = tuple(
        Sauhg(
            dg.attr_dim + 1,
            {v: vec + (float(t),) for v, vec in s.node_attrs.items()},
            {e: vec + (float(t),) for e, vec in s.edge_attrs.items()},
        )
        for t, s in enumerate(dg.snapshots)
    )
    return DynamicGraph(dg.attr_dim + 1, snapshots)


def align_timelines(
    dg1: DynamicGraph, dg2: DynamicGraph, pad: bool = False
) -> tuple[DynamicGraph, DynamicGraph]:
    """
    Return both graphs over one timeline, padding only when asked to.

    Raises:
        AttrDimMismatch: Attribute dimensions differ
        TimelineMismatch: Timelines differ and pad is False
    """
    if dg1.attr_dim != dg2.attr_dim:
        raise AttrDimMismatch(dg1.attr_dim, dg2.attr_dim)
    if len(dg1.snapshots) != len(dg2.snapshots):
        if not pad:
            raise TimelineMismatch(
                "Timelines differ",
                context={"left": len(dg1.snapshots), "right": len(dg2.snapshots)},
            )
        dg1, dg2 = pad_timeline([dg1, dg2])
    return dg1, dg2
