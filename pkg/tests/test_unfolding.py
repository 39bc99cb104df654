"""Unit tests for dynwl.unfolding trees and codes."""

import pytest
from hypothesis import given
from strategies import dynamic_graphs, sauhgs

from dynwl.corpus import depth_bound_witness, path_graph, statification_witness, twin_timeline
from dynwl.exceptions import InvalidTree, NodeNotFound, TimelineMismatch
from dynwl.graph import BOTTOM, DynamicGraph, Sauhg
from dynwl.transform import make_static
from dynwl.unfolding import (
    BOTTOM_LEAF,
    VOID,
    DynTreeBuilder,
    TreeBuilder,
    TreeNumbering,
    UTree,
    append_tree,
    attach,
    aut_equivalent,
    build_attr_tree,
    build_dyn_trees,
    decode_seq,
    decode_tree,
    dut_equivalent,
    dut_graph_equivalent,
    leaf,
    seq_code,
    to_dot,
    tree_code,
    tree_union,
)
from dynwl.wl import awl_node_equivalent

ZERO, ONE, TWO = (0.0,), (1.0,), (2.0,)


@pytest.fixture
def path3() -> Sauhg:
    return path_graph(3)


class TestUTree:
    """Test canonical form and equality."""

    def test_children_order_irrelevant(self) -> None:
        """Children are sorted, so input order does not matter."""
        a = UTree(ZERO, ((ONE, leaf(ZERO)), (TWO, leaf(ONE))))
        b = UTree(ZERO, ((TWO, leaf(ONE)), (ONE, leaf(ZERO))))
        assert a == b
        assert tree_code(a) == tree_code(b)
        assert hash(a) == hash(b)

    def test_edge_attribute_matters(self) -> None:
        """Same child under a different edge attribute is a different tree."""
        assert UTree(ZERO, ((ONE, leaf(ZERO)),)) != UTree(ZERO, ((TWO, leaf(ZERO)),))

    def test_multiplicity_matters(self) -> None:
        """Children form a multiset, not a set."""
        once = UTree(ZERO, ((ONE, leaf(ZERO)),))
        twice = UTree(ZERO, ((ONE, leaf(ZERO)), (ONE, leaf(ZERO))))
        assert once != twice

    def test_bottom_root_has_no_children(self) -> None:
        """A ⊥ root with children is rejected."""
        with pytest.raises(InvalidTree, match="cannot have children"):
            UTree(BOTTOM, ((ONE, leaf(ZERO)),))

    def test_depth_and_leaf(self) -> None:
        """depth counts edges on the longest root path."""
        tree = UTree(ZERO, ((ONE, UTree(ZERO, ((ONE, leaf(ZERO)),))),))
        assert tree.depth == 2
        assert leaf(ZERO).is_leaf
        assert not tree.is_leaf

    def test_roots_distinguished(self) -> None:
        """⊥, void and attribute roots have distinct codes."""
        codes = {leaf(BOTTOM).code, leaf(VOID).code, leaf(()).code, leaf(ZERO).code}
        assert len(codes) == 4


class TestCodec:
    """Test tree and sequence decoding."""

    def test_decode_tree(self, path3: Sauhg) -> None:
        """decode_tree inverts tree_code on a real unfolding."""
        tree = build_attr_tree(path3, 2, 3)
        assert decode_tree(tree.code) == tree

    def test_decode_seq(self, path3: Sauhg) -> None:
        """decode_seq inverts seq_code, keeping order."""
        trees = (build_attr_tree(path3, 1, 1), BOTTOM_LEAF, build_attr_tree(path3, 2, 1))
        assert decode_seq(seq_code(trees)) == trees

    def test_seq_code_order_sensitive(self) -> None:
        """Swapping timestamps changes the sequence code."""
        a, b = leaf(ZERO), leaf(ONE)
        assert seq_code([a, b]) != seq_code([b, a])

    def test_truncated(self, path3: Sauhg) -> None:
        """Cut codes are rejected."""
        code = build_attr_tree(path3, 2, 2).code
        with pytest.raises(InvalidTree, match="Truncated"):
            decode_tree(code[:-1])

    def test_trailing_bytes(self) -> None:
        """Extra bytes after a code are rejected."""
        with pytest.raises(InvalidTree, match="Trailing"):
            decode_tree(leaf(ZERO).code + b"\x00")

    def test_unknown_tag(self) -> None:
        """Only the three root tags are valid."""
        with pytest.raises(InvalidTree, match="Unknown root tag"):
            decode_tree(b"\x07\x00\x00\x00\x00")

    def test_not_a_sequence(self) -> None:
        """Tree codes are not sequence codes."""
        with pytest.raises(InvalidTree, match="Not a sequence"):
            decode_seq(leaf(ZERO).code)

    @given(sauhgs())
    def test_codes_decode(self, g: Sauhg) -> None:
        """Every unfolding code decodes back to its tree."""
        builder = TreeBuilder(g)
        for v in g.nodes:
            tree = builder.tree(v, 2)
            assert decode_tree(tree.code) == tree


class TestCombinators:
    """Test tree_union, attach and append_tree."""

    def test_union_then_attach_gives_unfolding(self, path3: Sauhg) -> None:
        """attach(T_v^0, union of neighbour subtrees) is T_v^1."""
        body = tree_union([(ZERO, leaf(ZERO)), (ZERO, leaf(ZERO))])
        assert body.root is VOID
        assert attach(leaf(ZERO), body) == build_attr_tree(path3, 2, 1)

    def test_attach_bottom_rejects_children(self) -> None:
        """A ⊥ root cannot take a non-empty body."""
        with pytest.raises(InvalidTree):
            attach(BOTTOM_LEAF, tree_union([(ZERO, leaf(ZERO))]))

    def test_append_tree(self) -> None:
        """None starts a new sequence."""
        first = append_tree(None, leaf(ZERO))
        assert append_tree(first, leaf(ONE)) == (leaf(ZERO), leaf(ONE))


class TestTreeBuilder:
    """Test memoised unfolding."""

    def test_revisits_nodes(self, path3: Sauhg) -> None:
        """Unfolding walks back along edges without pruning."""
        tree = build_attr_tree(path3, 1, 2)
        [(_, middle)] = tree.children
        assert len(middle.children) == 2

    def test_subtrees_shared(self, path3: Sauhg) -> None:
        """The same (node, depth) subtree object is reused."""
        builder = TreeBuilder(path3)
        left = builder.tree(1, 2).children[0][1]
        assert left is builder.tree(2, 1)

    def test_errors(self, path3: Sauhg) -> None:
        """Bad depth and unknown nodes are rejected."""
        builder = TreeBuilder(path3)
        with pytest.raises(ValueError, match="depth"):
            builder.tree(1, -1)
        with pytest.raises(NodeNotFound):
            builder.tree(9, 1)
        with pytest.raises(NodeNotFound):
            builder.number(9, 1)

    @given(sauhgs(max_nodes=6))
    def test_numbers_agree_with_codes(self, g: Sauhg) -> None:
        """Shared numbering gives equal numbers exactly for equal codes."""
        builder = TreeBuilder(g)
        for depth in range(4):
            codes = builder.codes(depth)
            for u in g.nodes:
                for v in g.nodes:
                    same_code = codes[u] == codes[v]
                    assert same_code == (builder.number(u, depth) == builder.number(v, depth))

    def test_numbering_shared_across_graphs(self, path3: Sauhg) -> None:
        """Builders on different graphs compare through one numbering."""
        numbering = TreeNumbering()
        a = TreeBuilder(path3, numbering)
        b = TreeBuilder(path_graph(3, start=7), numbering)
        assert a.number(1, 5) == b.number(9, 5)
        assert a.number(2, 5) != b.number(7, 5)


class TestAutEquivalent:
    """Test static unfolding equivalence."""

    def test_path_endpoints(self, path3: Sauhg) -> None:
        """Path endpoints are unfolding equivalent."""
        assert aut_equivalent(path3, 1, path3, 3)
        assert not aut_equivalent(path3, 1, path3, 2)

    def test_depth_bound_witness(self) -> None:
        """Trees at depth diameter + 1 can agree while stable colors differ."""
        g, (u, v) = depth_bound_witness()
        assert aut_equivalent(g, u, g, v)
        assert not aut_equivalent(g, u, g, v, depth=4)
        assert not awl_node_equivalent(g, u, g, v)

    def test_missing_node(self, path3: Sauhg) -> None:
        """Unknown nodes raise NodeNotFound."""
        with pytest.raises(NodeNotFound):
            aut_equivalent(path3, 1, path3, 5)


class TestDynamicTrees:
    """Test dynamic unfolding trees."""

    def test_absent_is_bottom_leaf(self) -> None:
        """A node missing at t contributes a ⊥ leaf."""
        t0 = Sauhg.build(1, {1: ZERO, 2: ZERO}, {(1, 2): ONE})
        dg = DynamicGraph(1, (t0, Sauhg.build(1, {1: ZERO})))
        trees = build_dyn_trees(dg, 2, 1)
        assert trees[1] is BOTTOM_LEAF
        assert trees[0].root == ZERO

    def test_per_timestamp_depths(self) -> None:
        """Depths may differ per timestamp but must match the timeline."""
        dg, (a, _) = twin_timeline()
        builder = DynTreeBuilder(dg)
        assert [t.depth for t in builder.trees(a, [0, 2])] == [0, 2]
        with pytest.raises(ValueError, match="per-timestamp depths"):
            builder.trees(a, [1])

    def test_unknown_node(self) -> None:
        """A node that never appears raises NodeNotFound."""
        dg, _ = twin_timeline()
        with pytest.raises(NodeNotFound):
            DynTreeBuilder(dg).trees(99, 1)

    def test_twin_nodes(self) -> None:
        """The twin nodes are dynamic unfolding equivalent."""
        dg, (a, c) = twin_timeline()
        assert dut_equivalent(dg, a, dg, c)
        assert not dut_equivalent(dg, a, dg, 2)

    def test_statification_separates(self) -> None:
        """A changing neighbour is invisible per snapshot but visible after statifying."""
        dg, (u, v) = statification_witness()
        assert dut_equivalent(dg, u, dg, v)
        static = make_static(dg)
        assert not aut_equivalent(static, u, static, v)

    def test_timeline_mismatch(self) -> None:
        """Different timelines need pad=True."""
        dg, _ = twin_timeline()
        short = DynamicGraph(1, dg.snapshots[:1])
        with pytest.raises(TimelineMismatch):
            dut_graph_equivalent(dg, short)
        assert not dut_graph_equivalent(dg, short, pad=True)

    def test_time_swap_detected(self) -> None:
        """Reversing the snapshot order changes the tree sequences."""
        dg, (a, _) = twin_timeline()
        swapped = DynamicGraph(dg.attr_dim, dg.snapshots[::-1])
        assert not dut_graph_equivalent(dg, swapped)
        assert not dut_equivalent(dg, a, swapped, a)

    @given(dynamic_graphs())
    def test_reflexive(self, dg: DynamicGraph) -> None:
        """Every dynamic graph is DUT equivalent to itself."""
        assert dut_graph_equivalent(dg, dg)


def test_to_dot(path3: Sauhg) -> None:
    """DOT output is a digraph with one box per tree node."""
    dot = to_dot(build_attr_tree(path3, 2, 1))
    assert dot.startswith("digraph unfolding {")
    assert dot.count("->") == 2
