"""Unit tests for dynwl.corpus generation and curated graphs."""

import json
from pathlib import Path

import pytest

from dynwl.corpus import (
    ALPHABET,
    CorpusSpec,
    corpus_hash,
    counterexamples,
    cycle_graph,
    depth_bound_witness,
    generate,
    load_corpus,
    path_graph,
    star_graph,
    statification_witness,
    write_corpus,
)
from dynwl.exceptions import GraphFormatError, SpecError
from dynwl.graph import DynamicGraph, Sauhg, diameter


class TestCorpusSpec:
    """Test spec validation and parsing."""

    @pytest.mark.parametrize(
        "kwargs,field",
        [
            ({"count": -1}, "count"),
            ({"node_range": (0, 3)}, "node_range"),
            ({"node_range": (4, 3)}, "node_range"),
            ({"edge_probability": 1.5}, "edge_probability"),
            ({"node_churn_prob": -0.1}, "node_churn_prob"),
            ({"attr_alphabet_size": 9}, "attr_alphabet_size"),
            ({"timeline_len": 0}, "timeline_len"),
            ({"seed": -1}, "seed"),
        ],
    )
    def test_invalid_values(self, kwargs: dict, field: str) -> None:
        """Out-of-range values raise SpecError naming the field."""
        with pytest.raises(SpecError, match=field):
            CorpusSpec(**kwargs)

    def test_from_dict_defaults(self) -> None:
        """Missing keys take defaults and node_range accepts a list."""
        spec = CorpusSpec.from_dict({"seed": 3, "node_range": [2, 4]})
        assert spec.node_range == (2, 4)
        assert spec.count == 100
        assert not spec.dynamic

    def test_from_dict_unknown_key(self) -> None:
        """Typos are reported instead of ignored."""
        with pytest.raises(SpecError, match="Unknown corpus spec keys") as info:
            CorpusSpec.from_dict({"sed": 1})
        assert info.value.context["keys"] == ["sed"]

    def test_from_json(self, tmp_path: Path) -> None:
        """Spec files hold the to_dict() document."""
        spec = CorpusSpec(seed=9, count=5, timeline_len=3)
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(spec.to_dict()))
        assert CorpusSpec.from_json(path) == spec

    def test_from_json_errors(self, tmp_path: Path) -> None:
        """Unreadable or non-object files raise SpecError."""
        with pytest.raises(SpecError, match="Cannot read"):
            CorpusSpec.from_json(tmp_path / "missing.json")
        path = tmp_path / "list.json"
        path.write_text("[]")
        with pytest.raises(SpecError, match="JSON object"):
            CorpusSpec.from_json(path)


class TestGenerate:
    """Test seeded generation."""

    def test_deterministic(self) -> None:
        """One spec always gives the same corpus."""
        spec = CorpusSpec(seed=4, count=20)
        assert corpus_hash(generate(spec)) == corpus_hash(generate(spec))
        assert corpus_hash(generate(CorpusSpec(seed=5, count=20))) != corpus_hash(generate(spec))

    def test_static_bounds(self) -> None:
        """Node counts and attributes respect the spec."""
        spec = CorpusSpec(seed=1, count=30, node_range=(2, 5), attr_dim=2, attr_alphabet_size=3)
        for g in generate(spec):
            assert isinstance(g, Sauhg)
            assert 2 <= len(g) <= 5
            assert g.attr_dim == 2
            values = {x for attr in g.node_attrs.values() for x in attr}
            assert values <= set(ALPHABET[:3])

    def test_no_edges(self) -> None:
        """edge_probability 0 gives edgeless graphs."""
        graphs = generate(CorpusSpec(seed=1, count=3, edge_probability=0.0))
        assert [len(g.edge_attrs) for g in graphs] == [0, 0, 0]

    def test_no_self_loops_by_default(self) -> None:
        """Self-loops appear only when enabled."""
        graphs = generate(CorpusSpec(seed=2, count=10, edge_probability=1.0))
        assert all(u != v for g in graphs for u, v in g.edge_attrs)
        looped = generate(CorpusSpec(seed=2, count=1, edge_probability=1.0, self_loops=True))
        assert all(looped[0].has_edge(v, v) for v in looped[0].nodes)

    def test_dynamic(self) -> None:
        """timeline_len switches to dynamic graphs."""
        graphs = generate(CorpusSpec(seed=3, count=5, timeline_len=4))
        for dg in graphs:
            assert isinstance(dg, DynamicGraph)
            assert len(dg.snapshots) == 4

    def test_time_stamped(self) -> None:
        """Stamped graphs carry the timestamp as a last attribute entry."""
        [dg] = generate(CorpusSpec(seed=3, count=1, timeline_len=2, time_stamped=True))
        assert isinstance(dg, DynamicGraph)
        assert dg.attr_dim == 2
        for t, snapshot in enumerate(dg.snapshots):
            assert all(attr[-1] == float(t) for attr in snapshot.node_attrs.values())


class TestCorpusFiles:
    """Test writing and loading corpus directories."""

    def test_write_and_load(self, tmp_path: Path) -> None:
        """Loading returns the graphs in order with the manifest hash."""
        spec = CorpusSpec(seed=6, count=4)
        graphs = generate(spec)
        manifest = write_corpus(graphs, spec, tmp_path)
        loaded, digest = load_corpus(tmp_path)
        assert loaded == graphs
        assert digest == manifest["corpus_hash"]
        assert [f["name"] for f in manifest["files"]] == [f"g{i:05d}.json" for i in range(4)]

    def test_tampered_file(self, tmp_path: Path) -> None:
        """A changed graph file fails its manifest hash."""
        write_corpus([path_graph(3), path_graph(2)], None, tmp_path)
        data = json.loads((tmp_path / "g00001.json").read_text())
        data["nodes"][0]["attr"] = [1.0]
        (tmp_path / "g00001.json").write_text(json.dumps(data))
        with pytest.raises(GraphFormatError, match="hash mismatch"):
            load_corpus(tmp_path)

    def test_missing_manifest(self, tmp_path: Path) -> None:
        """A directory without a manifest is not a corpus."""
        with pytest.raises(GraphFormatError, match="manifest"):
            load_corpus(tmp_path)


class TestBuilders:
    """Test the small graph builders and curated families."""

    def test_shapes(self) -> None:
        """Builders produce the expected node and edge counts."""
        assert len(cycle_graph(5).edge_attrs) == 5
        assert star_graph(3).nodes == (0, 1, 2, 3)
        assert path_graph(3, start=5).has_edge(6, 7)

    def test_bad_arguments(self) -> None:
        """Short cycles and wrong edge attribute counts are rejected."""
        with pytest.raises(ValueError, match="at least 3"):
            cycle_graph(2)
        with pytest.raises(ValueError, match="edge attributes"):
            path_graph(3, edge_attrs=[(0.0,)])

    def test_counterexample_names_unique(self) -> None:
        """Curated pairs are identified by name."""
        names = [pair.name for pair in counterexamples()]
        assert len(names) == len(set(names))
        assert all(set(pair.expected) == {"1wl", "awl", "iso"} for pair in counterexamples())

    def test_depth_bound_witness_diameter(self) -> None:
        """The witness has diameter 2."""
        g, _ = depth_bound_witness()
        assert diameter(g) == 2
        assert len(g) == 11

    def test_statification_witness(self) -> None:
        """Both witness nodes exist at every timestamp."""
        dg, (u, v) = statification_witness()
        assert all(u in s and v in s for s in dg.snapshots)
