"""Unit tests for dynwl.graph (Sauhg, DynamicGraph and graph combinators)."""

import networkx as nx
import pytest
from hypothesis import given
from strategies import sauhgs

from dynwl.exceptions import AttrDimMismatch, EmptyGraph, InvalidGraph, NodeNotFound
from dynwl.graph import (
    BOTTOM,
    DynamicGraph,
    Sauhg,
    attr_bytes,
    describe,
    diameter,
    disjoint_union,
    disjoint_union_dynamic,
    edge_key,
    make_attr,
    neighbor_edge_attrs,
    neighbors,
    quantize,
    quantize_dynamic,
    relabel,
    require_same_dims,
    snapshot_diameter,
    to_networkx,
)


@pytest.fixture
def path3() -> Sauhg:
    return Sauhg.build(1, {1: [0.0], 2: [0.0], 3: [0.0]}, {(1, 2): [1.0], (3, 2): [2.0]})


class TestAttributes:
    """Test attribute vector validation."""

    def test_negative_zero_normalised(self) -> None:
        """-0.0 is stored as 0.0 so byte encodings agree."""
        vec = make_attr([-0.0, 1.0], 2)
        assert attr_bytes(vec) == attr_bytes((0.0, 1.0))

    def test_wrong_length_rejected(self) -> None:
        """A vector of the wrong length raises InvalidGraph."""
        with pytest.raises(InvalidGraph, match="differs from attr_dim"):
            make_attr([1.0], 2)

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), float("-inf")])
    def test_non_finite_rejected(self, bad: float) -> None:
        """NaN and infinities are rejected at construction."""
        with pytest.raises(InvalidGraph, match="NaN or Inf"):
            make_attr([bad], 1)

    def test_constructor_normalises_negative_zero(self) -> None:
        """The plain constructor stores -0.0 as 0.0 for nodes and edges, like build()."""
        direct = Sauhg(1, {1: (-0.0,), 2: (1.0,)}, {(1, 2): (-0.0,)})
        assert direct == Sauhg.build(1, {1: [0.0], 2: [1.0]}, {(1, 2): [0.0]})
        assert attr_bytes(direct.node_attrs[1]) == attr_bytes((0.0,))
        assert attr_bytes(direct.edge_attrs[(1, 2)]) == attr_bytes((0.0,))

    def test_constructor_rejects_non_finite_edge(self) -> None:
        """Edge attributes are checked for NaN and Inf as well."""
        with pytest.raises(InvalidGraph, match="NaN or Inf"):
            Sauhg(1, {1: (0.0,), 2: (0.0,)}, {(1, 2): (float("inf"),)})

    def test_attr_bytes_length_prefixed(self) -> None:
        """Different dimensions never share an encoding prefix."""
        assert attr_bytes(()) != attr_bytes((0.0,))
        assert len(attr_bytes((1.0, 2.0))) == 4 + 16


class TestSauhg:
    """Test static graph construction and queries."""

    def test_edge_keys_canonical(self, path3: Sauhg) -> None:
        """(3, 2) is stored as (2, 3)."""
        assert path3.edges == ((1, 2), (2, 3))
        assert path3.has_edge(3, 2)

    def test_neighbors_sorted(self, path3: Sauhg) -> None:
        """Neighbours come back in ascending id order."""
        assert neighbors(path3, 2) == (1, 3)
        assert neighbors(path3, 1) == (2,)

    def test_neighbor_edge_attrs_aligned(self, path3: Sauhg) -> None:
        """Edge attributes follow neighbour order."""
        assert neighbor_edge_attrs(path3, 2) == ((1, (1.0,)), (3, (2.0,)))

    def test_self_loop_listed_once(self) -> None:
        """A self-loop makes v its own neighbour exactly once."""
        g = Sauhg.build(1, {1: [0.0], 2: [0.0]}, {(1, 1): [3.0], (1, 2): [1.0]})
        assert neighbors(g, 1) == (1, 2)

    def test_unknown_node(self, path3: Sauhg) -> None:
        """Querying a missing node raises NodeNotFound."""
        with pytest.raises(NodeNotFound, match="Node 9 not found"):
            neighbors(path3, 9)

    def test_dangling_edge_rejected(self) -> None:
        """Edges must join existing nodes."""
        with pytest.raises(InvalidGraph, match="endpoint"):
            Sauhg.build(1, {1: [0.0]}, {(1, 2): [0.0]})

    def test_duplicate_edge_rejected(self) -> None:
        """(u, v) and (v, u) in one input name the same edge."""
        with pytest.raises(InvalidGraph, match="Duplicate edge"):
            Sauhg.build(1, {1: [0.0], 2: [0.0]}, {(1, 2): [0.0], (2, 1): [0.0]})

    def test_immutable(self, path3: Sauhg) -> None:
        """Attribute mappings are read-only."""
        with pytest.raises(TypeError):
            path3.node_attrs[4] = (0.0,)  # type: ignore[index]

    def test_len_and_contains(self, path3: Sauhg) -> None:
        """len() counts nodes; `in` tests node membership."""
        assert len(path3) == 3
        assert 2 in path3
        assert 4 not in path3

    def test_zero_dimensional_attributes(self) -> None:
        """attr_dim 0 gives empty attribute tuples."""
        g = Sauhg.build(0, {1: [], 2: []}, {(1, 2): []})
        assert g.node_attrs[1] == ()


class TestDiameter:
    """Test diameter over components."""

    def test_path(self, path3: Sauhg) -> None:
        """A path on three nodes has diameter 2."""
        assert diameter(path3) == 2

    def test_single_node(self) -> None:
        """A single node has diameter 0."""
        assert diameter(Sauhg.build(1, {1: [0.0]})) == 0

    def test_disconnected_takes_max_component(self) -> None:
        """Infinite distances between components are ignored."""
        g = Sauhg.build(
            1,
            {v: [0.0] for v in range(1, 6)},
            {(1, 2): [0.0], (3, 4): [0.0], (4, 5): [0.0]},
        )
        assert diameter(g) == 2

    def test_empty_raises(self) -> None:
        """diameter() of the empty graph raises; snapshot_diameter() gives 0."""
        with pytest.raises(EmptyGraph):
            diameter(Sauhg.empty(1))
        assert snapshot_diameter(Sauhg.empty(1)) == 0

    @given(sauhgs())
    def test_matches_networkx_on_connected(self, g: Sauhg) -> None:
        """Connected graphs agree with networkx.diameter."""
        nxg = to_networkx(g)
        if nx.is_connected(nxg):
            assert diameter(g) == nx.diameter(nxg)


class TestCombinators:
    """Test relabel, disjoint union and quantisation."""

    def test_relabel_moves_edges(self, path3: Sauhg) -> None:
        """Edges follow their endpoints."""
        g = relabel(path3, {1: 30, 2: 20, 3: 10})
        assert g.edge_attrs == {(20, 30): (1.0,), (10, 20): (2.0,)}

    def test_relabel_not_injective(self, path3: Sauhg) -> None:
        """Collapsing two nodes is rejected."""
        with pytest.raises(InvalidGraph, match="not injective"):
            relabel(path3, {1: 1, 2: 1, 3: 3})

    def test_disjoint_union_shifts_second(self, path3: Sauhg) -> None:
        """The second graph's ids are shifted past the first's maximum."""
        union, remap = disjoint_union(path3, path3)
        assert remap == {1: 5, 2: 6, 3: 7}
        assert len(union) == 6
        assert union.edge_attrs[(6, 7)] == (2.0,)

    def test_disjoint_union_dim_mismatch(self, path3: Sauhg) -> None:
        """Unions need equal attribute dimensions."""
        other = Sauhg.build(2, {1: [0.0, 0.0]})
        with pytest.raises(AttrDimMismatch):
            disjoint_union(path3, other)
        with pytest.raises(AttrDimMismatch):
            require_same_dims(path3, other)

    def test_quantize(self) -> None:
        """Quantisation rounds nodes and edges."""
        g = Sauhg.build(1, {1: [0.123456], 2: [-0.0000001]}, {(1, 2): [0.98765]})
        q = quantize(g, 2)
        assert q.node_attrs == {1: (0.12,), 2: (0.0,)}
        assert q.edge_attrs[(1, 2)] == (0.99,)


class TestDynamicGraph:
    """Test snapshots and ⊥ lookups."""

    def test_bottom_lookups(self, path3: Sauhg) -> None:
        """Missing nodes and edges read as BOTTOM."""
        later = Sauhg.build(1, {1: [5.0]})
        dg = DynamicGraph(1, (path3, later))
        assert dg.node_attr_at(1, 1) == (5.0,)
        assert dg.node_attr_at(2, 1) is BOTTOM
        assert dg.edge_attr_at(2, 1, 0) == (1.0,)
        assert dg.edge_attr_at(1, 2, 1) is BOTTOM
        assert dg.union_nodes == (1, 2, 3)
        assert dg.timeline == range(2)

    def test_needs_snapshot(self) -> None:
        """An empty timeline is rejected."""
        with pytest.raises(InvalidGraph, match="at least one snapshot"):
            DynamicGraph(1, ())

    def test_mixed_dims_rejected(self, path3: Sauhg) -> None:
        """All snapshots share attr_dim."""
        with pytest.raises(InvalidGraph, match="attr_dim"):
            DynamicGraph(1, (path3, Sauhg.build(2, {1: [0.0, 0.0]})))

    def test_union_dynamic_uses_one_shift(self, path3: Sauhg) -> None:
        """Every snapshot of the second graph is shifted by the same offset."""
        dg1 = DynamicGraph(1, (path3, Sauhg.empty(1)))
        dg2 = DynamicGraph(1, (Sauhg.build(1, {1: [0.0]}), Sauhg.build(1, {2: [1.0]})))
        union, remap = disjoint_union_dynamic(dg1, dg2)
        assert remap == {1: 5, 2: 6}
        assert union.snapshots[1].node_attrs == {6: (1.0,)}

    def test_quantize_dynamic(self) -> None:
        """Every snapshot is rounded; the timeline is unchanged."""
        dg = DynamicGraph(1, (Sauhg.build(1, {1: [0.444]}), Sauhg.build(1, {1: [0.456]})))
        q = quantize_dynamic(dg, 1)
        assert [s.node_attrs for s in q.snapshots] == [{1: (0.4,)}, {1: (0.5,)}]

    def test_union_dynamic_timeline_mismatch(self, path3: Sauhg) -> None:
        """Timelines must have equal length."""
        with pytest.raises(InvalidGraph, match="Timelines differ"):
            disjoint_union_dynamic(
                DynamicGraph(1, (path3,)), DynamicGraph(1, (path3, path3))
            )

    def test_describe(self, path3: Sauhg) -> None:
        """describe() summarises both graph kinds."""
        assert describe(path3) == {"nodes": 3, "edges": 2, "attr_dim": 1}
        dg = DynamicGraph(1, (path3, Sauhg.empty(1)))
        assert describe(dg)["timeline_len"] == 2


@given(sauhgs())
def test_edge_key_symmetric(g: Sauhg) -> None:
    """Every stored edge is in canonical (min, max) form."""
    for u, v in g.edges:
        assert edge_key(v, u) == (u, v)
