"""
Brute-force ground truth for desk-scale instances.

Nothing here uses refinement colors or tree codes, so the oracles can check
the engines in dynwl.wl and dynwl.unfolding independently.

- brute_force_isomorphic: backtracking search for an (attributed) isomorphism
- brute_tree_equal: direct recursive tree comparison
- exhaustive_partition: pairwise equivalence classes of one graph

Example usage:
    from dynwl.oracle import brute_force_isomorphic

    witness = brute_force_isomorphic(g1, g2)
    if witness is None:
        print("not isomorphic")
"""

import logging
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Literal

from .exceptions import TooLarge
from .graph import AttrVec, Sauhg, neighbors
from .unfolding import TreeBuilder, UTree
from .wl import awl_node_equivalent

logger = logging.getLogger(__name__)

AttributeMode = Literal["strict", "renaming"]
Relation = Literal["aut", "awl"]

#: Node bound for the factorial isomorphism search.
ISO_NODE_LIMIT = 9
#: Node bound for exhaustive_partition with recursive tree comparison.
AUT_PARTITION_LIMIT = 16
#: Node bound for exhaustive_partition with pairwise AWL runs.
AWL_PARTITION_LIMIT = 64


@dataclass(frozen=True)
class IsoWitness:
    """
    An isomorphism found by brute_force_isomorphic().

    Attributes:
        node_bijection: node of g1 -> node of g2
        mode: "strict" (attributes preserved) or "renaming"
        node_attr_map: Attribute renaming for nodes (renaming mode only)
        edge_attr_map: Attribute renaming for edges (renaming mode only)
    """

    node_bijection: dict[int, int]
    mode: AttributeMode
    node_attr_map: dict[AttrVec, AttrVec] = field(default_factory=dict)
    edge_attr_map: dict[AttrVec, AttrVec] = field(default_factory=dict)


class _Renaming:
    """Partial injective map with undo, for one attribute domain."""

    def __init__(self) -> None:
        self.forward: dict[AttrVec, AttrVec] = {}
        self.backward: dict[AttrVec, AttrVec] = {}

    def bind(self, a: AttrVec, b: AttrVec, added: list[AttrVec]) -> bool:
        if a in self.forward:
            return self.forward[a] == b
        if b in self.backward:
            return False
        self.forward[a] = b
        self.backward[b] = a
        added.append(a)
        return True

    def undo(self, added: list[AttrVec]) -> None:
        for a in added:
            del self.backward[self.forward.pop(a)]


def _invariant_key(g: Sauhg, v: int) -> tuple[int, bool]:
    return (len(neighbors(g, v)), g.has_edge(v, v))


def brute_force_isomorphic(
    g1: Sauhg,
    g2: Sauhg,
    mode: AttributeMode = "strict",
    max_nodes: int = ISO_NODE_LIMIT,
) -> IsoWitness | None:
    """
    Search for an isomorphism between g1 and g2.

    Strict mode requires alpha_1(v) = alpha_2(phi(v)) and equal edge
    attributes. Renaming mode instead requires injective renamings of node
    attributes and of edge attributes that the bijection respects.

    Args:
        g1: First graph
        g2: Second graph
        mode: "strict" or "renaming"
        max_nodes: Search bound

    Returns:
        A witness, or None when no isomorphism exists

    Raises:
        TooLarge: Either graph has more than max_nodes nodes
        ValueError: Unknown mode

    Example:
        >>> brute_force_isomorphic(cycle_6, two_triangles) is None
        True
    """
    if mode not in ("strict", "renaming"):
        raise ValueError(f"mode must be 'strict' or 'renaming', got {mode!r}")
    for g in (g1, g2):
        if len(g) > max_nodes:
            raise TooLarge(len(g), max_nodes)
    if g1.attr_dim != g2.attr_dim and mode == "strict":
        return None
    if len(g1) != len(g2) or len(g1.edge_attrs) != len(g2.edge_attrs):
        return None
    if Counter(_invariant_key(g1, v) for v in g1.nodes) != Counter(
        _invariant_key(g2, v) for v in g2.nodes
    ):
        return None
    strict = mode == "strict"
    if strict and (
        Counter(g1.node_attrs.values()) != Counter(g2.node_attrs.values())
        or Counter(g1.edge_attrs.values()) != Counter(g2.edge_attrs.values())
    ):
        return None

    order = sorted(g1.nodes, key=lambda v: (-len(neighbors(g1, v)), v))
    candidates = {
        v: [
            w
            for w in g2.nodes
            if _invariant_key(g1, v) == _invariant_key(g2, w)
            and (not strict or g1.node_attrs[v] == g2.node_attrs[w])
        ]
        for v in order
    }
    phi: dict[int, int] = {}
    used: set[int] = set()
    node_names, edge_names = _Renaming(), _Renaming()

    def consistent(v: int, w: int, node_added: list[AttrVec], edge_added: list[AttrVec]) -> bool:
        if not strict and not node_names.bind(g1.node_attrs[v], g2.node_attrs[w], node_added):
            return False
        for x, y in list(phi.items()) + [(v, w)]:
            left = g1.edge_attrs.get((min(v, x), max(v, x)))
            right = g2.edge_attrs.get((min(w, y), max(w, y)))
            if (left is None) != (right is None):
                return False
            if left is None or right is None:
                continue
            if strict:
                if left != right:
                    return False
            elif not edge_names.bind(left, right, edge_added):
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            node_added: list[AttrVec] = []
            edge_added: list[AttrVec] = []
            if consistent(v, w, node_added, edge_added):
                phi[v] = w
                used.add(w)
                if search(i + 1):
                    return True
                del phi[v]
                used.discard(w)
            node_names.undo(node_added)
            edge_names.undo(edge_added)
        return False

    if not search(0):
        logger.debug("no isomorphism between graphs of %d nodes", len(g1))
        return None
    return IsoWitness(
        node_bijection=dict(sorted(phi.items())),
        mode=mode,
        node_attr_map={} if strict else dict(node_names.forward),
        edge_attr_map={} if strict else dict(edge_names.forward),
    )


def brute_tree_equal(t1: UTree, t2: UTree) -> bool:
    """
    Recursive tree equality without codes.

    Children are matched as a multiset of (edge attribute, subtree) pairs.

    Example:
        >>> brute_tree_equal(build_attr_tree(p3, 1, 2), build_attr_tree(p3, 3, 2))
        True
    """
    memo: dict[tuple[int, int], bool] = {}

    def equal(a: UTree, b: UTree) -> bool:
        if a is b:
            return True
        key = (id(a), id(b))
        if key in memo:
            return memo[key]
        result = a.root == b.root and len(a.children) == len(b.children) and match(a, b)
        memo[key] = result
        return result

    def match(a: UTree, b: UTree) -> bool:
        free = list(range(len(b.children)))
        for edge, child in a.children:
            # tree equality is transitive, so the first equal partner is as good as any
            for pos, j in enumerate(free):
                other_edge, other = b.children[j]
                if edge == other_edge and equal(child, other):
                    del free[pos]
                    break
            else:
                return False
        return True

    return equal(t1, t2)


def _classes(nodes: tuple[int, ...], same: Callable[[int, int], bool]) -> list[tuple[int, ...]]:
    classes: list[list[int]] = []
    for v in nodes:
        for members in classes:
            if same(members[0], v):
                members.append(v)
                break
        else:
            classes.append([v])
    return sorted(tuple(members) for members in classes)


def exhaustive_partition(g: Sauhg, relation: Relation, max_depth: int) -> list[tuple[int, ...]]:
    """
    Node equivalence classes of g computed pair by pair.

    Args:
        g: Graph
        relation: "aut" compares depth-max_depth unfolding trees with
            brute_tree_equal(); "awl" compares AWL colors after max_depth
            iterations with awl_node_equivalent()
        max_depth: Tree depth / refinement iterations

    Returns:
        Classes as sorted node tuples ordered by smallest member

    Raises:
        TooLarge: More than 16 nodes (aut) or 64 nodes (awl)
        ValueError: Unknown relation or negative max_depth

    Example:
        >>> exhaustive_partition(path_3, "aut", 2)
        [(1, 3), (2,)]
    """
    if max_depth < 0:
        raise ValueError(f"max_depth must be >= 0, got {max_depth}")
    if relation == "aut":
        if len(g) > AUT_PARTITION_LIMIT:
            raise TooLarge(len(g), AUT_PARTITION_LIMIT, context={"relation": relation})
        builder = TreeBuilder(g)
        trees = {v: builder.tree(v, max_depth) for v in g.nodes}
        return _classes(g.nodes, lambda u, v: brute_tree_equal(trees[u], trees[v]))
    if relation == "awl":
        if len(g) > AWL_PARTITION_LIMIT:
            raise TooLarge(len(g), AWL_PARTITION_LIMIT, context={"relation": relation})
        return _classes(
            g.nodes, lambda u, v: awl_node_equivalent(g, u, g, v, max_iter=max_depth)
        )
    raise ValueError(f"relation must be 'aut' or 'awl', got {relation!r}")
