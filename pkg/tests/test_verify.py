"""Unit tests for dynwl.verify property suites."""

import pytest

from dynwl.corpus import (
    CorpusSpec,
    depth_bound_witness,
    generate,
    path_graph,
    statification_witness,
    twin_timeline,
)
from dynwl.graph import DynamicGraph, Sauhg
from dynwl.io import graph_from_dict
from dynwl.verify import (
    Failure,
    VerdictReport,
    check_depth_bound,
    check_tree_wl,
    run_all,
    shrink_dynamic,
    shrink_static,
    verify_approximation,
    verify_depth_bound,
    verify_depth_coloring,
    verify_dynamic_graph_equivalence,
    verify_oracle_soundness,
    verify_sgnn_attainment,
    verify_statify_correspondence,
    verify_tree_wl_equivalence,
    verify_wl_hierarchy,
)


@pytest.fixture(scope="module")
def corpus() -> list[Sauhg]:
    graphs = generate(CorpusSpec(seed=11, count=12, node_range=(1, 6), attr_alphabet_size=2))
    return [g for g in graphs if isinstance(g, Sauhg)]


@pytest.fixture(scope="module")
def dyn_corpus() -> list[DynamicGraph]:
    graphs = generate(CorpusSpec(seed=12, count=8, node_range=(1, 4), timeline_len=3))
    return [dg for dg in graphs if isinstance(dg, DynamicGraph)]


class TestReports:
    """Test report serialisation."""

    def test_to_dict(self) -> None:
        """wall_time is only written on request; passed follows the failures."""
        report = VerdictReport("demo", "abc", 3, {"x=>y": 1}, [Failure("g00000", "x=>y", {})])
        data = report.to_dict()
        assert data["passed"] is False
        assert "wall_time" not in data
        assert data["failures"][0] == {
            "case_id": "g00000",
            "direction": "x=>y",
            "detail": {},
            "witness": None,
        }
        assert "wall_time" in report.to_dict(include_timing=True)

    def test_deterministic(self, corpus: list[Sauhg]) -> None:
        """Two runs, serial or threaded, serialise identically."""
        first = verify_tree_wl_equivalence(corpus).to_dict()
        assert verify_tree_wl_equivalence(corpus).to_dict() == first
        assert verify_tree_wl_equivalence(corpus, workers=3).to_dict() == first


class TestStaticSuites:
    """Test node-level suites on static graphs."""

    def test_tree_wl_sound_direction(self, corpus: list[Sauhg]) -> None:
        """Equal stable colors always mean equal trees."""
        report = verify_tree_wl_equivalence(corpus)
        assert report.theorem_id == "tree-wl-equivalence"
        assert report.violations["awl=>aut"] == 0
        assert report.cases_checked == sum(len(g) * (len(g) - 1) // 2 for g in corpus)

    def test_tree_wl_witness(self) -> None:
        """Trees at diameter + 1 can agree while stable colors differ."""
        g, (u, v) = depth_bound_witness()
        assert ("aut=>awl", {"nodes": [u, v], "depth": 3}) in check_tree_wl(g)
        report = verify_tree_wl_equivalence([g])
        assert report.violations["aut=>awl"] > 0
        assert report.violations["awl=>aut"] == 0
        assert not report.passed

    def test_depth_coloring(self, corpus: list[Sauhg]) -> None:
        """Per-depth trees and per-iteration colors agree in both directions."""
        report = verify_depth_coloring(corpus, max_depth=4)
        assert report.passed
        assert report.violations == {"tree=>color": 0, "color=>tree": 0}

    def test_depth_coloring_on_witness(self) -> None:
        """The per-depth correspondence also holds on the depth witness."""
        g, _ = depth_bound_witness()
        assert verify_depth_coloring([g]).passed

    def test_depth_coloring_bad_depth(self, corpus: list[Sauhg]) -> None:
        """max_depth must be non-negative."""
        with pytest.raises(ValueError, match="max_depth"):
            verify_depth_coloring(corpus, max_depth=-1)

    def test_depth_bound_witness(self) -> None:
        """Trees equal at r + 1 can split deeper."""
        g, (u, v) = depth_bound_witness()
        found = [d for d in check_depth_bound(g) if d[1]["nodes"] == [u, v]]
        assert found == [("bound=>deeper", {"nodes": [u, v], "bound": 3, "depth": 4})]
        report = verify_depth_bound([g])
        assert report.violations["deeper=>bound"] == 0
        assert any(f.witness is not None for f in report.failures)

    def test_depth_bound_sound_direction(self, corpus: list[Sauhg]) -> None:
        """Equality at 2(r + 1) always implies equality at r + 1."""
        assert verify_depth_bound(corpus).violations["deeper=>bound"] == 0

    def test_shrink_keeps_failure(self) -> None:
        """The shrunk witness still fails and has no more nodes than the input."""
        g, _ = depth_bound_witness()

        def failing(candidate: Sauhg) -> bool:
            return any(d == "bound=>deeper" for d, _ in check_depth_bound(candidate))

        small = shrink_static(g, failing)
        assert failing(small)
        assert len(small) <= len(g)
        assert len(small.edge_attrs) < len(g.edge_attrs)

    def test_shrunk_witness_is_a_graph_document(self) -> None:
        """Failure witnesses use the JSON graph format."""
        g, _ = depth_bound_witness()
        failures = verify_tree_wl_equivalence([g]).failures
        failure = next(f for f in failures if f.witness is not None)
        assert isinstance(graph_from_dict(failure.witness), Sauhg)


class TestDynamicSuites:
    """Test suites on dynamic graphs."""

    def test_statify_sound_directions(self, dyn_corpus: list[DynamicGraph]) -> None:
        """Round trips hold and statified equality implies dynamic equality."""
        report = verify_statify_correspondence(dyn_corpus)
        assert report.violations["round-trip"] == 0
        assert report.violations["static=>dynamic"] == 0

    def test_statify_witness(self) -> None:
        """A neighbour that changes over time is merged by statification."""
        dg, (u, v) = statification_witness()
        report = verify_statify_correspondence([dg])
        assert report.violations["dynamic=>static"] > 0
        assert any(f.detail["nodes"] == [u, v] for f in report.failures)
        assert report.violations["static=>dynamic"] == 0

    def test_shrink_dynamic(self) -> None:
        """Timestamps, edges and nodes that the failure does not need are removed."""
        dg = DynamicGraph(
            1,
            (
                Sauhg.build(1, {0: [0.0], 1: [0.0], 2: [0.0]}, {(0, 1): [1.0], (1, 2): [1.0]}),
                Sauhg.build(1, {0: [0.0], 1: [0.0]}, {(0, 1): [1.0]}),
                Sauhg.build(1, {2: [0.0]}),
            ),
        )

        def failing(candidate: DynamicGraph) -> bool:
            return (0, 1) in candidate.union_edges

        small = shrink_dynamic(dg, failing)
        assert len(small.snapshots) == 1
        assert small.union_nodes == (0, 1)
        assert small.union_edges == ((0, 1),)

    def test_twin_timeline_passes(self) -> None:
        """The worked example has no violations."""
        dg, _ = twin_timeline()
        assert verify_statify_correspondence([dg]).passed

    def test_dynamic_graph_equivalence(self, dyn_corpus: list[DynamicGraph]) -> None:
        """DWL equivalent graphs always have equal tree sequences."""
        report = verify_dynamic_graph_equivalence(dyn_corpus)
        assert report.violations["dwl=>dut"] == 0
        assert report.cases_checked >= 3 * len(dyn_corpus)


class TestGnnSuites:
    """Test approximation and attainment suites."""

    def test_approximation(self, corpus: list[Sauhg], dyn_corpus: list[DynamicGraph]) -> None:
        """Readouts hit every target and conflicting targets are rejected."""
        report = verify_approximation(corpus, n_targets=4, dyn_corpus=dyn_corpus, seed=3)
        assert report.passed
        assert report.cases_checked >= 8

    def test_approximation_bad_count(self, corpus: list[Sauhg]) -> None:
        """n_targets must be non-negative."""
        with pytest.raises(ValueError, match="n_targets"):
            verify_approximation(corpus, n_targets=-1)

    def test_sgnn_attainment(self, corpus: list[Sauhg], dyn_corpus: list[DynamicGraph]) -> None:
        """Codec states are tree codes and numeric states respect AWL classes."""
        assert verify_sgnn_attainment(corpus, dyn_corpus, seed=1).passed

    def test_sgnn_attainment_on_witness(self) -> None:
        """Same-iteration comparison holds where the stable one would not."""
        g, _ = depth_bound_witness()
        assert verify_sgnn_attainment([g]).passed


class TestHierarchyAndOracle:
    """Test the WL hierarchy and isomorphism suites."""

    def test_wl_hierarchy(self, corpus: list[Sauhg]) -> None:
        """AWL refines 1-WL and the curated verdicts match."""
        report = verify_wl_hierarchy(corpus)
        assert report.passed
        assert report.violations == {"awl-refines-1wl": 0, "curated-verdicts": 0}

    def test_oracle_soundness(self, corpus: list[Sauhg]) -> None:
        """Relabelled copies are found and isomorphic graphs are AWL equivalent."""
        report = verify_oracle_soundness(corpus)
        assert report.passed
        assert report.cases_checked >= len(corpus)

    def test_oracle_skips_large_graphs(self) -> None:
        """Graphs above max_nodes are left out."""
        report = verify_oracle_soundness([path_graph(5)], max_nodes=4)
        assert report.cases_checked == 0


@pytest.mark.slow
def test_run_all(corpus: list[Sauhg], dyn_corpus: list[DynamicGraph]) -> None:
    """run_all returns every suite in a fixed order."""
    reports = run_all(corpus, dyn_corpus, n_targets=2, max_depth=3)
    assert [r.theorem_id for r in reports] == [
        "tree-wl-equivalence",
        "depth-coloring",
        "depth-bound",
        "statify-correspondence",
        "dynamic-graph-equivalence",
        "approximation",
        "wl-hierarchy",
        "oracle-soundness",
        "sgnn-attainment",
    ]
