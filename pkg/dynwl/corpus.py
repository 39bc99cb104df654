"""
Seeded test corpora and curated counterexample families.

Graphs are drawn with numpy's default_rng using integer draws only, and
attributes come from a fixed alphabet of exactly representable floats, so
one CorpusSpec always produces a byte-identical corpus.

Example usage:
    from dynwl.corpus import CorpusSpec, generate, write_corpus

    spec = CorpusSpec(seed=7, count=100, node_range=(2, 8))
    graphs = generate(spec)
    manifest = write_corpus(graphs, spec, "corpus/")
"""

import hashlib
import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import GraphFormatError, SpecError
from .graph import AttrVec, DynamicGraph, EdgeKey, Sauhg, relabel
from .io import content_hash, dump_graph, load_any
from .transform import stamp_time

logger = logging.getLogger(__name__)

#: Attribute values; all exactly representable in binary floating point.
ALPHABET: tuple[float, ...] = (0.0, 1.0, -1.0, 0.5, 2.0, -2.0, 0.25, 4.0)

_PROB_SCALE = 1_000_000
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class CorpusSpec:
    """
    Parameters of a generated corpus.

    Attributes:
        seed: Seed for numpy.random.default_rng
        count: Number of graphs
        node_range: Inclusive (min, max) node count per graph
        edge_probability: Probability of each possible edge
        attr_dim: Attribute dimension k
        attr_alphabet_size: Number of ALPHABET entries attributes are drawn from
        timeline_len: Snapshots per dynamic graph; None generates static graphs
        node_churn_prob: Per timestamp, chance a node toggles existence
            (and, for a node that stays, chance its attribute is redrawn)
        edge_churn_prob: Per timestamp, chance an edge disappears; absent
            pairs appear with edge_churn_prob * edge_probability
        self_loops: Allow self-loops
        time_stamped: Append the timestamp as an extra attribute (dynamic only)
    """

    seed: int = 0
    count: int = 100
    node_range: tuple[int, int] = (1, 8)
    edge_probability: float = 0.3
    attr_dim: int = 1
    attr_alphabet_size: int = 2
    timeline_len: int | None = None
    node_churn_prob: float = 0.3
    edge_churn_prob: float = 0.3
    self_loops: bool = False
    time_stamped: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_range", tuple(self.node_range))
        lo, hi = self.node_range
        if self.count < 0:
            raise SpecError("count must be >= 0", context={"count": self.count})
        if lo < 1 or hi < lo:
            raise SpecError("node_range must satisfy 1 <= min <= max", context={"range": (lo, hi)})
        for name in ("edge_probability", "node_churn_prob", "edge_churn_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise SpecError(f"{name} must lie in [0, 1]", context={name: p})
        if self.attr_dim < 0:
            raise SpecError("attr_dim must be >= 0", context={"attr_dim": self.attr_dim})
        if not 1 <= self.attr_alphabet_size <= len(ALPHABET):
            raise SpecError(
                f"attr_alphabet_size must lie in [1, {len(ALPHABET)}]",
                context={"attr_alphabet_size": self.attr_alphabet_size},
            )
        if self.timeline_len is not None and self.timeline_len < 1:
            raise SpecError(
                "timeline_len must be >= 1", context={"timeline_len": self.timeline_len}
            )
        if not 0 <= self.seed < 2**64:
            raise SpecError("seed must be a 64-bit unsigned integer", context={"seed": self.seed})

    @property
    def dynamic(self) -> bool:
        return self.timeline_len is not None

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["node_range"] = list(self.node_range)
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CorpusSpec":
        """
        Build a spec from a JSON-style mapping; missing keys take defaults.

        Raises:
            SpecError: Unknown keys or invalid values
        """
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise SpecError("Unknown corpus spec keys", context={"keys": unknown})
        try:
            kwargs = dict(data)
            if "node_range" in kwargs:
                lo, hi = kwargs["node_range"]
                kwargs["node_range"] = (int(lo), int(hi))
            return cls(**kwargs)
        except (TypeError, ValueError) as e:
            raise SpecError(f"Invalid corpus spec: {e}") from e

    @classmethod
    def from_json(cls, path: str | Path) -> "CorpusSpec":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise SpecError(f"Cannot read corpus spec: {e}", context={"path": str(path)}) from e
        if not isinstance(data, dict):
            raise SpecError("Corpus spec must be a JSON object", context={"path": str(path)})
        return cls.from_dict(data)


class _Sampler:
    """Integer-only draws on top of numpy's PCG64 generator."""

    def __init__(self, seed: int, alphabet_size: int):
        self.rng = np.random.default_rng(seed)
        self.alphabet_size = alphabet_size

    def below(self, n: int) -> int:
        return int(self.rng.integers(0, n))

    def between(self, lo: int, hi: int) -> int:
        return int(self.rng.integers(lo, hi + 1))

    def chance(self, p: float) -> bool:
        return self.below(_PROB_SCALE) < round(p * _PROB_SCALE)

    def attr(self, k: int) -> AttrVec:
        return tuple(ALPHABET[self.below(self.alphabet_size)] for _ in range(k))


def _pairs(nodes: Sequence[int], self_loops: bool) -> list[EdgeKey]:
    return [(u, v) for i, u in enumerate(nodes) for v in nodes[i if self_loops else i + 1 :]]


def _static(spec: CorpusSpec, sampler: _Sampler) -> Sauhg:
    n = sampler.between(*spec.node_range)
    nodes = list(range(n))
    node_attrs = {v: sampler.attr(spec.attr_dim) for v in nodes}
    edge_attrs = {
        e: sampler.attr(spec.attr_dim)
        for e in _pairs(nodes, spec.self_loops)
        if sampler.chance(spec.edge_probability)
    }
    return Sauhg(spec.attr_dim, node_attrs, edge_attrs)


def _dynamic(spec: CorpusSpec, sampler: _Sampler) -> DynamicGraph:
    first = _static(spec, sampler)
    snapshots = [first]
    node_attrs = dict(first.node_attrs)
    edge_attrs = dict(first.edge_attrs)
    universe = list(first.nodes)
    k = spec.attr_dim
    for _ in range(1, spec.timeline_len or 1):
        nxt_nodes: dict[int, AttrVec] = {}
        for v in universe:
            if v in node_attrs:
                if sampler.chance(spec.node_churn_prob):
                    continue
                keep = not sampler.chance(spec.node_churn_prob)
                nxt_nodes[v] = node_attrs[v] if keep else sampler.attr(k)
            elif sampler.chance(spec.node_churn_prob):
                nxt_nodes[v] = sampler.attr(k)
        nxt_edges: dict[EdgeKey, AttrVec] = {}
        for e in _pairs(sorted(nxt_nodes), spec.self_loops):
            if e in edge_attrs:
                if not sampler.chance(spec.edge_churn_prob):
                    nxt_edges[e] = edge_attrs[e]
            elif sampler.chance(spec.edge_churn_prob * spec.edge_probability):
                nxt_edges[e] = sampler.attr(k)
        node_attrs, edge_attrs = nxt_nodes, nxt_edges
        snapshots.append(Sauhg(k, node_attrs, edge_attrs))
    dg = DynamicGraph(k, tuple(snapshots))
    return stamp_time(dg) if spec.time_stamped else dg


def generate(spec: CorpusSpec) -> list[Sauhg] | list[DynamicGraph]:
    """
    Generate a corpus; static when spec.timeline_len is None, dynamic otherwise.

    Example:
        >>> graphs = generate(CorpusSpec(seed=1, count=3, edge_probability=0.0))
        >>> [len(g.edge_attrs) for g in graphs]
        [0, 0, 0]
    """
    sampler = _Sampler(spec.seed, spec.attr_alphabet_size)
    if spec.dynamic:
        dynamic = [_dynamic(spec, sampler) for _ in range(spec.count)]
        logger.debug("generated %d dynamic graphs (seed=%d)", len(dynamic), spec.seed)
        return dynamic
    static = [_static(spec, sampler) for _ in range(spec.count)]
    logger.debug("generated %d static graphs (seed=%d)", len(static), spec.seed)
    return static


def corpus_hash(graphs: Iterable[Sauhg | DynamicGraph]) -> str:
    """sha256 over the ordered content hashes of a corpus."""
    digest = hashlib.sha256()
    for g in graphs:
        digest.update(content_hash(g).encode())
    return digest.hexdigest()


def write_corpus(
    graphs: Sequence[Sauhg | DynamicGraph], spec: CorpusSpec | None, out_dir: str | Path
) -> dict[str, Any]:
    """
    Write one JSON file per graph plus manifest.json.

    The manifest records the spec, the per-file sha256 of each graph's
    canonical JSON, and the corpus hash over all of them.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, g in enumerate(graphs):
        name = f"g{i:05d}.json"
        dump_graph(g, out / name)
        files.append({"name": name, "sha256": content_hash(g)})
    manifest = {
        "spec": spec.to_dict() if spec is not None else None,
        "corpus_hash": corpus_hash(graphs),
        "files": files,
    }
    (out / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")
    logger.info("wrote %d graphs to %s", len(files), out)
    return manifest


def load_corpus(directory: str | Path) -> tuple[list[Sauhg | DynamicGraph], str]:
    """
    Load a corpus directory in manifest order.

    Returns:
        (graphs, corpus hash)

    Raises:
        GraphFormatError: Missing manifest, unreadable file, or a hash mismatch
    """
    root = Path(directory)
    try:
        manifest = json.loads((root / MANIFEST_NAME).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise GraphFormatError(
            f"Cannot read corpus manifest: {e}", context={"path": str(root)}
        ) from e
    graphs = []
    for entry in manifest["files"]:
        g = load_any(root / entry["name"])
        if content_hash(g) != entry["sha256"]:
            raise GraphFormatError("Corpus file hash mismatch", context={"file": entry["name"]})
        graphs.append(g)
    return graphs, corpus_hash(graphs)


# ---------------------------------------------------------------------------
# Small graph builders
# ---------------------------------------------------------------------------

UNIFORM: AttrVec = (0.0,)


def _build(
    nodes: Sequence[int],
    edges: Sequence[EdgeKey],
    node_attr: AttrVec = UNIFORM,
    edge_attrs: Sequence[AttrVec] | None = None,
) -> Sauhg:
    omegas = edge_attrs if edge_attrs is not None else [node_attr] * len(edges)
    if len(omegas) != len(edges):
        raise ValueError(f"expected {len(edges)} edge attributes, got {len(omegas)}")
    return Sauhg.build(
        len(node_attr),
        {v: node_attr for v in nodes},
        dict(zip(edges, omegas, strict=True)),
    )


def path_graph(
    n: int,
    start: int = 1,
    node_attr: AttrVec = UNIFORM,
    edge_attrs: Sequence[AttrVec] | None = None,
) -> Sauhg:
    """Path start - start+1 - ... with n nodes; edge_attrs follow the path order."""
    nodes = list(range(start, start + n))
    return _build(nodes, list(zip(nodes, nodes[1:])), node_attr, edge_attrs)


def cycle_graph(
    n: int,
    start: int = 1,
    node_attr: AttrVec = UNIFORM,
    edge_attrs: Sequence[AttrVec] | None = None,
) -> Sauhg:
    """Cycle on n >= 3 nodes; edge i joins start+i and start+(i+1) mod n."""
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 nodes, got {n}")
    nodes = list(range(start, start + n))
    return _build(nodes, [(nodes[i], nodes[(i + 1) % n]) for i in range(n)], node_attr, edge_attrs)


def complete_graph(n: int, start: int = 1, node_attr: AttrVec = UNIFORM) -> Sauhg:
    nodes = list(range(start, start + n))
    return _build(nodes, _pairs(nodes, self_loops=False), node_attr)


def star_graph(
    leaves: int,
    center: int = 0,
    node_attr: AttrVec = UNIFORM,
    edge_attrs: Sequence[AttrVec] | None = None,
) -> Sauhg:
    """Center node joined to leaves center+1 .. center+leaves."""
    nodes = [center] + [center + i for i in range(1, leaves + 1)]
    return _build(nodes, [(center, x) for x in nodes[1:]], node_attr, edge_attrs)


def two_triangles(
    first: Sequence[AttrVec] | None = None, second: Sequence[AttrVec] | None = None
) -> Sauhg:
    """Triangles on 1-2-3 and 4-5-6; each takes three edge attributes in cycle order."""
    a = cycle_graph(3, 1, edge_attrs=first)
    b = cycle_graph(3, 4, edge_attrs=second)
    return Sauhg(1, {**a.node_attrs, **b.node_attrs}, {**a.edge_attrs, **b.edge_attrs})


@dataclass(frozen=True)
class CounterexamplePair:
    """
    A named graph pair with expected verdicts.

    Attributes:
        expected: {"1wl": bool, "awl": bool, "iso": bool}; True means the test
            reports the pair as equivalent (iso: isomorphic)
    """

    name: str
    first: Sauhg
    second: Sauhg
    expected: dict[str, bool] = field(default_factory=dict)


def counterexamples() -> list[CounterexamplePair]:
    """
    The WL-hierarchy family around the hexagon C6 and two disjoint triangles.

    - uniform attributes: 1-WL and AWL equivalent, not isomorphic
    - triangles with constant but different edge attributes: AWL separates
      them, 1-WL does not
    - alternating edge attributes (0, 0, 1) per triangle and (0, 0, 1, 0, 0, 1)
      on the hexagon: still AWL equivalent
    - an attributed path and a relabelled copy: equivalent for every test
    """
    zero, one = (0.0,), (1.0,)
    relabel_source = path_graph(4, edge_attrs=[zero, one, zero], node_attr=one)
    relabelled = relabel(relabel_source, {1: 40, 2: 10, 3: 30, 4: 20})
    return [
        CounterexamplePair(
            "hexagon-vs-triangles",
            cycle_graph(6),
            two_triangles(),
            {"1wl": True, "awl": True, "iso": False},
        ),
        CounterexamplePair(
            "hexagon-vs-triangles-edge-attributed",
            cycle_graph(6, edge_attrs=[zero, zero, zero, one, one, one]),
            two_triangles([zero] * 3, [one] * 3),
            {"1wl": True, "awl": False, "iso": False},
        ),
        CounterexamplePair(
            "hexagon-vs-triangles-alternating",
            cycle_graph(6, edge_attrs=[zero, zero, one, zero, zero, one]),
            two_triangles([zero, zero, one], [zero, zero, one]),
            {"1wl": True, "awl": True, "iso": False},
        ),
        CounterexamplePair(
            "relabelled-path",
            relabel_source,
            relabelled,
            {"1wl": True, "awl": True, "iso": True},
        ),
    ]


def depth_bound_witness() -> tuple[Sauhg, tuple[int, int]]:
    """
    Path 1..10 plus node 11 joined to every path node (diameter 2).

    Nodes 4 and 5 have equal unfolding trees up to depth 3 = diameter + 1 but
    different trees at depth 4, and different stable AWL colors.
    """
    path = list(range(1, 11))
    edges = list(zip(path, path[1:])) + [(v, 11) for v in path]
    return _build(path + [11], edges), (4, 5)


def statification_witness() -> tuple[DynamicGraph, tuple[int, int]]:
    """
    Nodes 0 and 3 with one neighbour at each of two timestamps.

    Node 0 talks to 1 at t=0 and to 2 at t=1, node 3 talks to 4 at both.
    Their dynamic unfolding trees and DWL colors agree at every timestamp,
    but in the statified graph node 0 has two neighbours and node 3 one.
    """
    nodes = {v: UNIFORM for v in range(6)}
    t0 = Sauhg.build(1, nodes, {(0, 1): UNIFORM, (3, 4): UNIFORM})
    t1 = Sauhg.build(1, nodes, {(0, 2): UNIFORM, (3, 4): UNIFORM})
    return DynamicGraph(1, (t0, t1)), (0, 3)


def twin_timeline() -> tuple[DynamicGraph, tuple[int, int]]:
    """
    Worked example with nodes a=1 and c=3 sharing the neighbour b=2 at every
    timestamp, so a and c are dynamic WL and unfolding equivalent.
    """
    t0 = Sauhg.build(1, {1: (0.0,), 2: (1.0,), 3: (0.0,)}, {(1, 2): (0.5,), (2, 3): (0.5,)})
    t1 = Sauhg.build(
        1,
        {1: (2.0,), 2: (1.0,), 3: (2.0,), 4: (0.0,)},
        {(1, 2): (1.0,), (2, 3): (1.0,), (2, 4): (0.0,)},
    )
    return DynamicGraph(1, (t0, t1)), (1, 3)
