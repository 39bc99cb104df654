"""
Attributed and dynamic unfolding trees with injective canonical codes.

A UTree is kept in canonical form: children are sorted by (edge attribute
bytes, child code). Its code is a self-delimiting byte string, so two trees
have equal codes exactly when their canonical forms are equal, and every
code decodes back to its tree.

Tree code layout (format-normative):
    root tag      0x00 ⊥ | 0x01 void | 0x02 followed by attr_bytes(alpha)
    child count   4-byte big-endian unsigned
    per child     attr_bytes(omega), 4-byte length, child code

Sequence code layout:
    b"S", 4-byte count, then per tree a 4-byte length and the tree code

Example usage:
    from dynwl.unfolding import TreeBuilder, aut_equivalent

    builder = TreeBuilder(g)
    builder.tree(2, depth=2)          # UTree
    builder.code(2, depth=2)          # bytes
    aut_equivalent(g, 1, g, 3)        # True for path endpoints
"""

import logging
import struct
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import TypeAlias

from .exceptions import InvalidTree, NodeNotFound
from .graph import (
    BOTTOM,
    Absent,
    AttrVec,
    DynamicGraph,
    Sauhg,
    attr_bytes,
    diameter,
    neighbor_edge_attrs,
    require_same_dims,
    snapshot_diameter,
)
from .transform import align_timelines

logger = logging.getLogger(__name__)


class RootMark(Enum):
    """Void root feature produced by tree_union()."""

    VOID = "void"

    def __repr__(self) -> str:
        return "void"


VOID = RootMark.VOID

Root: TypeAlias = AttrVec | Absent | RootMark
TreeCode: TypeAlias = bytes
SeqCode: TypeAlias = bytes

_TAG_BOTTOM = b"\x00"
_TAG_VOID = b"\x01"
_TAG_ATTR = b"\x02"
_SEQ_MAGIC = b"S"
_U32 = struct.Struct(">I")


def root_bytes(root: Root) -> bytes:
    """Tag plus payload encoding of a root feature."""
    if root is BOTTOM:
        return _TAG_BOTTOM
    if root is VOID:
        return _TAG_VOID
    return _TAG_ATTR + attr_bytes(root)  # type: ignore[arg-type]


@dataclass(frozen=True, eq=False)
class UTree:
    """
    Unfolding tree node.

    Attributes:
        root: Node attribute, ⊥ for an absent node, or VOID for a union root
        children: (edge attribute, subtree) pairs, stored in canonical order

    Equality and hashing go through the canonical code.

    Raises:
        InvalidTree: A ⊥ root is given children
    """

    root: Root
    children: tuple[tuple[AttrVec, "UTree"], ...] = ()

    def __post_init__(self) -> None:
        if self.root is BOTTOM and self.children:
            raise InvalidTree("A ⊥ root cannot have children")
        ordered = tuple(sorted(self.children, key=lambda c: (attr_bytes(c[0]), c[1].code)))
        object.__setattr__(self, "children", ordered)

    @cached_property
    def code(self) -> TreeCode:
        parts = [root_bytes(self.root), _U32.pack(len(self.children))]
        for edge, child in self.children:
            child_code = child.code
            parts.append(attr_bytes(edge))
            parts.append(_U32.pack(len(child_code)))
            parts.append(child_code)
        return b"".join(parts)

    @cached_property
    def depth(self) -> int:
        return 1 + max(child.depth for _, child in self.children) if self.children else 0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UTree):
            return NotImplemented
        return self is other or self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __repr__(self) -> str:
        if not self.children:
            return f"UTree({self.root!r})"
        return f"UTree({self.root!r}, {len(self.children)} children, depth={self.depth})"


def leaf(root: Root) -> UTree:
    return UTree(root)


BOTTOM_LEAF = UTree(BOTTOM)


def tree_code(tree: UTree) -> TreeCode:
    """Injective canonical code of a tree."""
    return tree.code


def seq_code(trees: Sequence[UTree]) -> SeqCode:
    """
    Injective code of a sequence of trees; order sensitive.

    Example:
        >>> seq_code([a, b]) == seq_code([b, a])
        False
    """
    parts = [_SEQ_MAGIC, _U32.pack(len(trees))]
    for tree in trees:
        parts.append(_U32.pack(len(tree.code)))
        parts.append(tree.code)
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise InvalidTree("Truncated code", context={"offset": self.pos, "needed": n})
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return int(_U32.unpack(self.take(4))[0])

    def attr(self) -> AttrVec:
        n = self.u32()
        return tuple(struct.unpack(f">{n}d", self.take(8 * n)))

    def done(self) -> None:
        if self.pos != len(self.data):
            raise InvalidTree("Trailing bytes after code", context={"offset": self.pos})


def _read_tree(reader: _Reader) -> UTree:
    tag = reader.take(1)
    root: Root
    if tag == _TAG_BOTTOM:
        root = BOTTOM
    elif tag == _TAG_VOID:
        root = VOID
    elif tag == _TAG_ATTR:
        root = reader.attr()
    else:
        raise InvalidTree("Unknown root tag", context={"tag": tag.hex()})
    children = []
    for _ in range(reader.u32()):
        edge = reader.attr()
        length = reader.u32()
        sub = _Reader(reader.take(length))
        child = _read_tree(sub)
        sub.done()
        children.append((edge, child))
    return UTree(root, tuple(children))


def decode_tree(code: TreeCode) -> UTree:
    """
    Inverse of tree_code().

    Raises:
        InvalidTree: Not a well-formed tree code
    """
    reader = _Reader(code)
    tree = _read_tree(reader)
    reader.done()
    return tree


def decode_seq(code: SeqCode) -> tuple[UTree, ...]:
    """
    Inverse of seq_code().

    Raises:
        InvalidTree: Not a well-formed sequence code
    """
    reader = _Reader(code)
    if reader.take(1) != _SEQ_MAGIC:
        raise InvalidTree("Not a sequence code")
    trees = []
    for _ in range(reader.u32()):
        trees.append(decode_tree(reader.take(reader.u32())))
    reader.done()
    return tuple(trees)


def tree_union(subtrees: Iterable[tuple[AttrVec, UTree]]) -> UTree:
    """Tree with a void root whose children are the given (edge attr, subtree) pairs."""
    return UTree(VOID, tuple(subtrees))


def attach(root_source: UTree, body: UTree) -> UTree:
    """
    Replace body's root feature with root_source's root feature.

    Raises:
        InvalidTree: root_source has a ⊥ root and body has children
    """
    return UTree(root_source.root, body.children)


def append_tree(prefix: Sequence[UTree] | None, tree: UTree) -> tuple[UTree, ...]:
    """Extend a tree sequence by one timestamp; None or () starts a new sequence."""
    return tuple(prefix or ()) + (tree,)


class TreeNumbering:
    """
    Hash-consed numbering of canonical trees.

    A tree is keyed by (root bytes, sorted (edge bytes, child number)) pairs, so
    two trees get the same number exactly when they are equal. Builders that
    share one numbering can compare trees of any depth without materialising
    codes, whose size grows with the number of walks.
    """

    def __init__(self) -> None:
        self._ids: dict[tuple[bytes, tuple[tuple[bytes, int], ...]], int] = {}

    def number(self, root: bytes, children: Iterable[tuple[bytes, int]]) -> int:
        key = (root, tuple(sorted(children)))
        return self._ids.setdefault(key, len(self._ids))

    def __len__(self) -> int:
        return len(self._ids)


class TreeBuilder:
    """
    Memoised unfolding-tree construction for one static graph.

    (node, depth) -> UTree is cached, so subtrees are shared and every
    distinct (node, depth) is built once.

    Args:
        g: Graph to unfold
        numbering: Shared numbering for number(); a private one by default
    """

    def __init__(self, g: Sauhg, numbering: TreeNumbering | None = None):
        self.graph = g
        self.numbering = numbering if numbering is not None else TreeNumbering()
        self._memo: dict[tuple[int, int], UTree] = {}
        self._numbers: dict[tuple[int, int], int] = {}

    def tree(self, v: int, depth: int) -> UTree:
        """
        Attributed unfolding tree T_v^depth.

        Unfolding revisits already-seen nodes; there is no visited-set pruning.

        Raises:
            NodeNotFound: v is not a node of the graph
            ValueError: depth < 0
        """
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        if v not in self.graph:
            raise NodeNotFound(v)
        return self._build(v, depth)

    def _build(self, v: int, depth: int) -> UTree:
        key = (v, depth)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        alpha = self.graph.node_attrs[v]
        if depth == 0:
            tree = UTree(alpha)
        else:
            children = tuple(
                (omega, self._build(u, depth - 1))
                for u, omega in neighbor_edge_attrs(self.graph, v)
            )
            tree = UTree(alpha, children)
        return self._memo.setdefault(key, tree)

    def code(self, v: int, depth: int) -> TreeCode:
        return self.tree(v, depth).code

    def codes(self, depth: int) -> dict[int, TreeCode]:
        """node -> code of T_node^depth for every node."""
        return {v: self.code(v, depth) for v in self.graph.nodes}

    def number(self, v: int, depth: int) -> int:
        """
        Number of T_v^depth in the shared numbering.

        Equal numbers mean equal trees, for any builders sharing the numbering.

        Raises:
            NodeNotFound: v is not a node of the graph
            ValueError: depth < 0
        """
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        if v not in self.graph:
            raise NodeNotFound(v)
        for d in range(depth + 1):
            if (v, d) not in self._numbers:
                self._fill_numbers(d)
        return self._numbers[(v, depth)]

    def _fill_numbers(self, depth: int) -> None:
        g = self.graph
        for v in g.nodes:
            root = root_bytes(g.node_attrs[v])
            if depth == 0:
                children: list[tuple[bytes, int]] = []
            else:
                children = [
                    (attr_bytes(omega), self._numbers[(u, depth - 1)])
                    for u, omega in neighbor_edge_attrs(g, v)
                ]
            self._numbers[(v, depth)] = self.numbering.number(root, children)


class DynTreeBuilder:
    """Per-timestamp TreeBuilders over a dynamic graph."""

    def __init__(self, dg: DynamicGraph):
        self.graph = dg
        self._builders = [TreeBuilder(s) for s in dg.snapshots]
        self._nodes = frozenset(dg.union_nodes)

    def trees(self, v: int, depth: int | Sequence[int]) -> tuple[UTree, ...]:
        """
        Dynamic unfolding trees (T_v(t))_t, a ⊥ leaf where v is absent.

        Args:
            v: Node of the timeline
            depth: One depth for every timestamp, or one depth per timestamp

        Raises:
            NodeNotFound: v never appears
            ValueError: Per-timestamp depths of the wrong length
        """
        if v not in self._nodes:
            raise NodeNotFound(v)
        depths = _per_timestamp(depth, len(self._builders))
        return tuple(
            builder.tree(v, d) if v in builder.graph else BOTTOM_LEAF
            for builder, d in zip(self._builders, depths, strict=True)
        )

    def seq_code(self, v: int, depth: int | Sequence[int]) -> SeqCode:
        return seq_code(self.trees(v, depth))


def _per_timestamp(depth: int | Sequence[int], length: int) -> list[int]:
    if isinstance(depth, int):
        return [depth] * length
    depths = list(depth)
    if len(depths) != length:
        raise ValueError(f"expected {length} per-timestamp depths, got {len(depths)}")
    return depths


def build_attr_tree(g: Sauhg, v: int, depth: int) -> UTree:
    """
    Attributed unfolding tree of v at the given depth.

    Example:
        >>> t = build_attr_tree(path_3, 2, 2)
        >>> [len(child.children) for _, child in t.children]
        [1, 1]
    """
    return TreeBuilder(g).tree(v, depth)


def build_dyn_trees(dg: DynamicGraph, v: int, depth: int | Sequence[int]) -> tuple[UTree, ...]:
    """Dynamic unfolding trees of v, one per timestamp."""
    return DynTreeBuilder(dg).trees(v, depth)


def aut_equivalent(
    g1: Sauhg, u: int, g2: Sauhg, v: int, depth: int | None = None
) -> bool:
    """
    Attributed unfolding equivalence of u (in g1) and v (in g2).

    Compares tree codes at depth r + 1 with r = max(diameter(g1), diameter(g2))
    unless an explicit depth is given.

    Raises:
        NodeNotFound: u or v missing
        AttrDimMismatch: Graphs differ in attribute dimension
    """
    require_same_dims(g1, g2)
    if u not in g1:
        raise NodeNotFound(u, context={"graph": "first"})
    if v not in g2:
        raise NodeNotFound(v, context={"graph": "second"})
    if depth is None:
        depth = max(diameter(g1), diameter(g2)) + 1
    return TreeBuilder(g1).code(u, depth) == TreeBuilder(g2).code(v, depth)


def dynamic_depths(dg1: DynamicGraph, dg2: DynamicGraph) -> list[int]:
    """r_t + 1 per timestamp, r_t the larger snapshot diameter at t."""
    return [
        max(snapshot_diameter(s1), snapshot_diameter(s2)) + 1
        for s1, s2 in zip(dg1.snapshots, dg2.snapshots, strict=True)
    ]


def dut_equivalent(
    dg1: DynamicGraph, u: int, dg2: DynamicGraph, v: int, pad: bool = False
) -> bool:
    """
    Dynamic unfolding equivalence: per-timestamp tree codes at depth r_t + 1 agree.

    Raises:
        NodeNotFound: u or v never appears
        TimelineMismatch: Timelines differ and pad is False
    """
    dg1, dg2 = align_timelines(dg1, dg2, pad)
    depths = dynamic_depths(dg1, dg2)
    return DynTreeBuilder(dg1).seq_code(u, depths) == DynTreeBuilder(dg2).seq_code(v, depths)


def dut_graph_equivalent(dg1: DynamicGraph, dg2: DynamicGraph, pad: bool = False) -> bool:
    """
    Graph-level dynamic unfolding equivalence.

    True iff the multisets of per-node sequence codes agree, which gives a
    bijection between the node sets respecting the equivalence.

    Raises:
        TimelineMismatch: Timelines differ and pad is False
    """
    dg1, dg2 = align_timelines(dg1, dg2, pad)
    if len(dg1.union_nodes) != len(dg2.union_nodes):
        return False
    depths = dynamic_depths(dg1, dg2)
    b1, b2 = DynTreeBuilder(dg1), DynTreeBuilder(dg2)
    left = Counter(b1.seq_code(v, depths) for v in dg1.union_nodes)
    right = Counter(b2.seq_code(v, depths) for v in dg2.union_nodes)
    return left == right


def _label(root: Root) -> str:
    if root is BOTTOM:
        return "⊥"
    if root is VOID:
        return "void"
    return "[" + ", ".join(f"{x:g}" for x in root) + "]"  # type: ignore[union-attr]


def to_dot(tree: UTree, name: str = "unfolding") -> str:
    """
    Render a tree as a Graphviz DOT digraph; edges are labelled with omega.

    Shared subtrees are drawn once per occurrence.
    """
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    counter = 0

    def visit(node: UTree) -> int:
        nonlocal counter
        me = counter
        counter += 1
        lines.append(f'  n{me} [label="{_label(node.root)}"];')
        for edge, child in node.children:
            child_id = visit(child)
            lines.append(f'  n{me} -> n{child_id} [label="{_label(edge)}"];')
        return me

    visit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"
