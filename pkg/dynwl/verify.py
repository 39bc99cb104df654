"""
Property suites that check each equivalence result on a corpus.

Every suite returns a VerdictReport. The two directions of a biconditional are
counted separately, under labels such as "aut=>awl" and "awl=>aut", so a
failure points at the engine on the side that over- or under-distinguishes.
Failing cases are shrunk by greedy node/edge/timestamp deletion while the
failure persists.

Reports are deterministic: cases are processed in corpus order (optionally on
a thread pool whose results are collected in submission order), failures are
sorted by case id, and wall time is left out of to_dict() unless asked for.

Example usage:
    from dynwl.corpus import CorpusSpec, generate
    from dynwl.verify import verify_tree_wl_equivalence

    report = verify_tree_wl_equivalence(generate(CorpusSpec(seed=1, count=200)))
    print(report.passed, report.violations)
"""

import itertools
import logging
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, TypeVar

import numpy as np

from .corpus import corpus_hash, counterexamples
from .exceptions import InfeasibleTarget
from .gnn import (
    NumericParams,
    TargetFunction,
    fit_readout,
    pattern_codes,
    run_dgnn,
    run_sgnn_codec,
    run_sgnn_numeric,
    snapshot_layers,
    target_from_values,
)
from .graph import DynamicGraph, Sauhg, diameter, neighbors, relabel
from .io import to_dict
from .oracle import ISO_NODE_LIMIT, brute_force_isomorphic
from .transform import make_dynamic, make_static, pad_timeline
from .unfolding import DynTreeBuilder, TreeBuilder, dut_graph_equivalent, seq_code
from .wl import (
    awl_graph_equivalent,
    dwl_equivalent,
    partition_of,
    run_1wl,
    run_awl,
    run_dwl,
    wl_graph_equivalent,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
Violation = tuple[str, dict[str, Any]]

#: Failures beyond this many per report are recorded without shrinking.
SHRINK_LIMIT = 5
#: Default depth range of the depth/coloring suite.
DEFAULT_MAX_DEPTH = 6
#: Numeric readout tolerance of the approximation suite.
APPROX_EPSILON = 1e-9


@dataclass(frozen=True)
class Failure:
    """
    One failing case.

    Attributes:
        case_id: Corpus position(s), e.g. "g00012" or "g00003+g00007"
        direction: Violated direction label
        detail: Nodes, depth and values involved
        witness: Shrunk counter-witness in the JSON graph format
    """

    case_id: str
    direction: str
    detail: dict[str, Any]
    witness: Any = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "case_id": self.case_id,
            "direction": self.direction,
            "detail": self.detail,
            "witness": self.witness,
        }


@dataclass
class VerdictReport:
    """
    Machine-readable outcome of one suite.

    Attributes:
        theorem_id: Suite slug, e.g. "tree-wl-equivalence"
        corpus_hash: sha256 over the corpus content hashes
        cases_checked: Number of node pairs / graph pairs / targets checked
        violations: direction label -> violation count
        failures: Counter-witnesses, sorted by case id
        wall_time: Seconds spent (only serialised on request)
    """

    theorem_id: str
    corpus_hash: str
    cases_checked: int = 0
    violations: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {
            "theorem_id": self.theorem_id,
            "corpus_hash": self.corpus_hash,
            "cases_checked": self.cases_checked,
            "violations": dict(self.violations),
            "passed": self.passed,
            "failures": [f.to_dict() for f in self.failures],
        }
        if include_timing:
            data["wall_time"] = round(self.wall_time, 6)
        return data


def _map(fn: Callable[[T], Any], items: Sequence[T], workers: int) -> list[Any]:
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _case_id(*indices: int) -> str:
    return "+".join(f"g{i:05d}" for i in indices)


class _ReportBuilder:
    """Collects per-case violations into a VerdictReport."""

    def __init__(self, theorem_id: str, corpus_hash: str, directions: Sequence[str]):
        self.report = VerdictReport(theorem_id, corpus_hash)
        self.report.violations = {d: 0 for d in directions}
        self._started = time.perf_counter()
        self._shrunk = 0

    def add(
        self,
        case_id: str,
        cases: int,
        violations: Iterable[Violation],
        shrink: Callable[[str], Any] | None = None,
    ) -> None:
        self.report.cases_checked += cases
        seen_directions: set[str] = set()
        for direction, detail in violations:
            self.report.violations[direction] = self.report.violations.get(direction, 0) + 1
            witness = None
            if shrink is not None and direction not in seen_directions:
                if self._shrunk < SHRINK_LIMIT:
                    witness = shrink(direction)
                    self._shrunk += 1
                seen_directions.add(direction)
            self.report.failures.append(Failure(case_id, direction, detail, witness))

    def finish(self) -> VerdictReport:
        report = self.report
        report.failures.sort(key=lambda f: (f.case_id, f.direction, repr(f.detail)))
        report.wall_time = time.perf_counter() - self._started
        logger.info(
            "%s: %d cases, violations=%s, %s",
            report.theorem_id,
            report.cases_checked,
            report.violations,
            "pass" if report.passed else "FAIL",
        )
        return report


# ---------------------------------------------------------------------------
# Shrinking
# ---------------------------------------------------------------------------


def shrink_static(g: Sauhg, still_failing: Callable[[Sauhg], bool]) -> Sauhg:
    """
    Greedily delete edges, then nodes, while still_failing() stays true.

    Args:
        g: Failing graph
        still_failing: Predicate that must hold on the returned graph

    Returns:
        A graph where no single edge or node deletion keeps the failure
    """
    current = g
    changed = True
    while changed:
        changed = False
        for e in current.edges:
            edges = {k: a for k, a in current.edge_attrs.items() if k != e}
            candidate = Sauhg(current.attr_dim, current.node_attrs, edges)
            if still_failing(candidate):
                current, changed = candidate, True
                break
        if changed:
            continue
        for v in current.nodes:
            if len(current) == 1:
                break
            nodes = {x: a for x, a in current.node_attrs.items() if x != v}
            edges = {k: a for k, a in current.edge_attrs.items() if v not in k}
            candidate = Sauhg(current.attr_dim, nodes, edges)
            if still_failing(candidate):
                current, changed = candidate, True
                break
    return current


def _without_node(dg: DynamicGraph, v: int) -> DynamicGraph:
    return DynamicGraph(
        dg.attr_dim,
        tuple(
            Sauhg(
                s.attr_dim,
                {x: a for x, a in s.node_attrs.items() if x != v},
                {k: a for k, a in s.edge_attrs.items() if v not in k},
            )
            for s in dg.snapshots
        ),
    )


def shrink_dynamic(dg: DynamicGraph, still_failing: Callable[[DynamicGraph], bool]) -> DynamicGraph:
    """Greedy deletion of timestamps, then snapshot edges, then nodes."""
    current = dg
    changed = True
    while changed:
        changed = False
        candidates: list[DynamicGraph] = []
        if len(current.snapshots) > 1:
            candidates += [
                DynamicGraph(current.attr_dim, current.snapshots[:t] + current.snapshots[t + 1 :])
                for t in current.timeline
            ]
        for t, s in enumerate(current.snapshots):
            for e in s.edges:
                edges = {k: a for k, a in s.edge_attrs.items() if k != e}
                snapshot = Sauhg(s.attr_dim, s.node_attrs, edges)
                candidates.append(
                    DynamicGraph(
                        current.attr_dim,
                        current.snapshots[:t] + (snapshot,) + current.snapshots[t + 1 :],
                    )
                )
        if len(current.union_nodes) > 1:
            candidates += [_without_node(current, v) for v in current.union_nodes]
        for candidate in candidates:
            if candidate.union_nodes and still_failing(candidate):
                current, changed = candidate, True
                break
    return current


def _shrinker(
    g: Any, check: Callable[[Any], list[Violation]], dynamic: bool = False
) -> Callable[[str], Any]:
    def shrink(direction: str) -> Any:
        def still_failing(candidate: Any) -> bool:
            return any(d == direction for d, _ in check(candidate))

        if dynamic:
            return to_dict(shrink_dynamic(g, still_failing))
        return to_dict(shrink_static(g, still_failing))

    return shrink


def _pairs(nodes: Sequence[int]) -> list[tuple[int, int]]:
    return list(itertools.combinations(nodes, 2))


# ---------------------------------------------------------------------------
# Node-level suites on static graphs
# ---------------------------------------------------------------------------


def check_tree_wl(g: Sauhg) -> list[Violation]:
    """Node pairs where codes at depth diameter+1 and stable AWL colors disagree."""
    if len(g) == 0:
        return []
    depth = diameter(g) + 1
    codes = TreeBuilder(g).codes(depth)
    colors = run_awl(g).final
    out: list[Violation] = []
    for u, v in _pairs(g.nodes):
        aut, awl = codes[u] == codes[v], colors[u] == colors[v]
        if aut and not awl:
            out.append(("aut=>awl", {"nodes": [u, v], "depth": depth}))
        elif awl and not aut:
            out.append(("awl=>aut", {"nodes": [u, v], "depth": depth}))
    return out


def _node_suite(
    theorem_id: str,
    directions: Sequence[str],
    check: Callable[[Sauhg], list[Violation]],
    cases: Callable[[Sauhg], int],
    corpus: Sequence[Sauhg],
    workers: int,
) -> VerdictReport:
    builder = _ReportBuilder(theorem_id, corpus_hash(corpus), directions)
    results = _map(check, corpus, workers)
    for i, (g, violations) in enumerate(zip(corpus, results, strict=True)):
        builder.add(_case_id(i), cases(g), violations, _shrinker(g, check))
    return builder.finish()


def _pair_count(g: Sauhg) -> int:
    n = len(g)
    return n * (n - 1) // 2


def verify_tree_wl_equivalence(corpus: Sequence[Sauhg], workers: int = 1) -> VerdictReport:
    """
    Tree/WL equivalence: for every node pair of every graph, equal tree codes
    at depth diameter + 1 coincide with equal stable AWL colors.

    Directions:
        aut=>awl  equal codes but different colors
        awl=>aut  equal colors but different codes
    """
    return _node_suite(
        "tree-wl-equivalence", ("aut=>awl", "awl=>aut"), check_tree_wl, _pair_count, corpus, workers
    )


def check_depth_coloring(g: Sauhg, max_depth: int = DEFAULT_MAX_DEPTH) -> list[Violation]:
    """Node pairs and depths d where T^d equality and iteration-d color equality disagree."""
    if len(g) == 0:
        return []
    builder = TreeBuilder(g)
    history = run_awl(g)
    out: list[Violation] = []
    for d in range(max_depth + 1):
        codes = builder.codes(d)
        colors = history.colors_at(d)
        for u, v in _pairs(g.nodes):
            tree_eq, color_eq = codes[u] == codes[v], colors[u] == colors[v]
            if tree_eq and not color_eq:
                out.append(("tree=>color", {"nodes": [u, v], "depth": d}))
            elif color_eq and not tree_eq:
                out.append(("color=>tree", {"nodes": [u, v], "depth": d}))
    return out


def verify_depth_coloring(
    corpus: Sequence[Sauhg], max_depth: int = DEFAULT_MAX_DEPTH, workers: int = 1
) -> VerdictReport:
    """
    Depth/coloring agreement: T_u^d = T_v^d exactly when c_u^(d) = c_v^(d),
    for every depth 0..max_depth.

    Colors past the stable iteration are the stable colors.
    """
    if max_depth < 0:
        raise ValueError(f"max_depth must be >= 0, got {max_depth}")
    return _node_suite(
        "depth-coloring",
        ("tree=>color", "color=>tree"),
        lambda g: check_depth_coloring(g, max_depth),
        lambda g: _pair_count(g) * (max_depth + 1),
        corpus,
        workers,
    )


def check_depth_bound(g: Sauhg) -> list[Violation]:
    """
    Node pairs whose trees agree at depth r + 1 (r = diameter) but differ at
    some depth up to 2(r + 1), or the reverse at the deepest level.

    Trees are compared through a shared TreeNumbering, so deep levels never
    materialise codes.
    """
    if len(g) == 0:
        return []
    r = diameter(g)
    builder = TreeBuilder(g)
    bound, deepest = r + 1, 2 * (r + 1)
    out: list[Violation] = []
    for u, v in _pairs(g.nodes):
        at_bound = builder.number(u, bound) == builder.number(v, bound)
        if at_bound:
            for d in range(bound + 1, deepest + 1):
                if builder.number(u, d) != builder.number(v, d):
                    out.append(("bound=>deeper", {"nodes": [u, v], "bound": bound, "depth": d}))
                    break
        elif builder.number(u, deepest) == builder.number(v, deepest):
            out.append(("deeper=>bound", {"nodes": [u, v], "bound": bound, "depth": deepest}))
    return out


def verify_depth_bound(corpus: Sequence[Sauhg], workers: int = 1) -> VerdictReport:
    """
    Depth bound: trees equal at depth r + 1 stay equal up to depth 2(r + 1).

    Directions:
        bound=>deeper  equal at r + 1, different deeper
        deeper=>bound  equal at 2(r + 1), different at r + 1 (impossible; checks the numbering)
    """
    return _node_suite(
        "depth-bound", ("bound=>deeper", "deeper=>bound"), check_depth_bound, _pair_count, corpus,
        workers,
    )


# ---------------------------------------------------------------------------
# Dynamic suites
# ---------------------------------------------------------------------------


def check_statify(dg: DynamicGraph, max_depth: int | None = None) -> list[Violation]:
    """
    Round trip plus per-depth tree and per-iteration color correspondence
    between a dynamic graph and its statified form.
    """
    out: list[Violation] = []
    static = make_static(dg)
    if make_dynamic(static, len(dg.snapshots), dg.attr_dim) != dg:
        out.append(("round-trip", {}))
    nodes = dg.union_nodes
    if not nodes:
        return out
    if max_depth is None:
        max_depth = max([diameter(static), *(d - 1 for d in snapshot_layers(dg))]) + 1
    dyn_trees, static_trees = DynTreeBuilder(dg), TreeBuilder(static)
    dyn_colors, static_colors = run_dwl(dg), run_awl(static)
    for d in range(max_depth + 1):
        dyn_codes = {v: dyn_trees.seq_code(v, d) for v in nodes}
        st_codes = static_trees.codes(d)
        dyn_vectors = dyn_colors.vectors_at(d)
        st_vector = static_colors.colors_at(d)
        for u, v in _pairs(nodes):
            dyn_eq, st_eq = dyn_codes[u] == dyn_codes[v], st_codes[u] == st_codes[v]
            if dyn_eq and not st_eq:
                out.append(("dynamic=>static", {"nodes": [u, v], "depth": d, "kind": "tree"}))
            elif st_eq and not dyn_eq:
                out.append(("static=>dynamic", {"nodes": [u, v], "depth": d, "kind": "tree"}))
            dyn_eq = dyn_vectors[u] == dyn_vectors[v]
            st_eq = st_vector[u] == st_vector[v]
            if dyn_eq and not st_eq:
                out.append(("dynamic=>static", {"nodes": [u, v], "iteration": d, "kind": "color"}))
            elif st_eq and not dyn_eq:
                out.append(("static=>dynamic", {"nodes": [u, v], "iteration": d, "kind": "color"}))
    return out


def verify_statify_correspondence(
    dyn_corpus: Sequence[DynamicGraph], max_depth: int | None = None, workers: int = 1
) -> VerdictReport:
    """
    Dynamic/static correspondence: for every node pair and depth (iteration),
    equal dynamic tree sequences (DWL color vectors) coincide with equal trees
    (AWL colors) in the statified graph; also make_dynamic(make_static(dg)) == dg.

    max_depth defaults to one more than the largest of the statified diameter
    and the snapshot diameters.

    Directions:
        dynamic=>static  dynamic side equal, statified side different
        static=>dynamic  statified side equal, dynamic side different
        round-trip       make_dynamic did not invert make_static
    """
    builder = _ReportBuilder(
        "statify-correspondence",
        corpus_hash(dyn_corpus),
        ("dynamic=>static", "static=>dynamic", "round-trip"),
    )

    def check(dg: DynamicGraph) -> list[Violation]:
        return check_statify(dg, max_depth)

    results = _map(check, dyn_corpus, workers)
    for i, (dg, violations) in enumerate(zip(dyn_corpus, results, strict=True)):
        n = len(dg.union_nodes)
        builder.add(_case_id(i), 1 + n * (n - 1) // 2, violations, _shrinker(dg, check, True))
    return builder.finish()


def _time_reversed(dg: DynamicGraph) -> DynamicGraph:
    return DynamicGraph(dg.attr_dim, tuple(reversed(dg.snapshots)))


def _relabel_dynamic(dg: DynamicGraph) -> DynamicGraph:
    nodes = dg.union_nodes
    mapping = dict(zip(nodes, reversed(nodes), strict=True))
    return DynamicGraph(
        dg.attr_dim, tuple(relabel(s, {v: mapping[v] for v in s.nodes}) for s in dg.snapshots)
    )


def _dynamic_bucket(dg: DynamicGraph) -> tuple[int, ...]:
    return (len(dg.union_nodes), *(len(s) for s in dg.snapshots))


def check_dynamic_pair(dg1: DynamicGraph, dg2: DynamicGraph) -> list[Violation]:
    """Graph-level DWL versus DUT verdict for one pair (timelines padded)."""
    dwl = dwl_equivalent(dg1, dg2, pad=True)
    dut = dut_graph_equivalent(dg1, dg2, pad=True)
    if dwl and not dut:
        return [("dwl=>dut", {"dwl": dwl, "dut": dut})]
    if dut and not dwl:
        return [("dut=>dwl", {"dwl": dwl, "dut": dut})]
    return []


def verify_dynamic_graph_equivalence(
    dyn_corpus: Sequence[DynamicGraph], max_pairs: int = 2000, workers: int = 1
) -> VerdictReport:
    """
    Graph-level DWL equivalence coincides with graph-level DUT equivalence.

    Checked pairs: every graph with itself, with a relabelled copy and with its
    time-reversed copy, plus corpus pairs sharing per-timestamp node counts
    (pairs outside such buckets are non-equivalent under both relations), up
    to max_pairs of them.
    """
    builder = _ReportBuilder(
        "dynamic-graph-equivalence", corpus_hash(dyn_corpus), ("dwl=>dut", "dut=>dwl")
    )
    jobs: list[tuple[str, DynamicGraph, DynamicGraph]] = []
    for i, dg in enumerate(dyn_corpus):
        case = _case_id(i)
        jobs.append((case, dg, dg))
        jobs.append((case + "~relabelled", dg, _relabel_dynamic(dg)))
        jobs.append((case + "~reversed", dg, _time_reversed(dg)))
    buckets: dict[tuple[int, ...], list[int]] = {}
    for i, dg in enumerate(pad_timeline(list(dyn_corpus))):
        buckets.setdefault(_dynamic_bucket(dg), []).append(i)
    corpus_pairs = [
        (i, j) for members in buckets.values() for i, j in itertools.combinations(members, 2)
    ]
    for i, j in sorted(corpus_pairs)[:max_pairs]:
        jobs.append((_case_id(i, j), dyn_corpus[i], dyn_corpus[j]))

    results = _map(lambda job: check_dynamic_pair(job[1], job[2]), jobs, workers)
    for (case, _, _), violations in zip(jobs, results, strict=True):
        builder.add(case, 1, violations)
    return builder.finish()


# ---------------------------------------------------------------------------
# GNN suites
# ---------------------------------------------------------------------------


def _random_values(rng: np.random.Generator, n: int, levels: int = 16) -> list[float]:
    return [float(x) for x in rng.integers(0, levels, size=n)]


def _approximation_checks(
    prefix: str,
    patterns: list[tuple[Any, int]],
    n_targets: int,
    rng: np.random.Generator,
    builder: _ReportBuilder,
) -> None:
    if not patterns:
        return
    codes = pattern_codes(patterns)
    knots = sorted(set(codes))
    for k in range(n_targets):
        target = TargetFunction(dict(zip(knots, _random_values(rng, len(knots)), strict=True)))
        violations: list[Violation] = []
        codec = fit_readout(patterns, target, "codec", codes=codes)
        if codec.max_error != 0.0:
            violations.append(("codec-exact", {"target": k, "max_error": codec.max_error}))
        interned = fit_readout(patterns, target, "numeric", "interned", codes=codes)
        if not interned.max_error <= APPROX_EPSILON:
            violations.append(("numeric-epsilon", {"target": k, "max_error": interned.max_error}))
        builder.add(f"{prefix}target{k:03d}", 1, violations)

    first_seen: dict[bytes, int] = {}
    repeated = None
    for i, code in enumerate(codes):
        if first_seen.setdefault(code, i) != i:
            repeated = i
            break
    if repeated is None:
        return
    values = [0.0] * len(codes)
    values[repeated] = 1.0
    try:
        target_from_values(list(zip(codes, values, strict=True)))
    except InfeasibleTarget:
        builder.add(f"{prefix}infeasible", 1, [])
    else:
        builder.add(f"{prefix}infeasible", 1, [("infeasible-rejected", {"pattern": repeated})])


def verify_approximation(
    corpus: Sequence[Sauhg],
    n_targets: int = 50,
    dyn_corpus: Sequence[DynamicGraph] = (),
    seed: int = 0,
    max_graphs: int = 50,
) -> VerdictReport:
    """
    Approximation on finite pattern sets.

    The patterns are all (graph, node) pairs of the first max_graphs graphs.
    For each of n_targets random tables on pattern codes the codec readout
    must be exact and the interned numeric readout within APPROX_EPSILON. A
    target that gives two unfolding-equivalent patterns different values must
    be rejected. Dynamic patterns, when given, are checked the same way on
    sequence codes (codec backend).

    Directions:
        codec-exact          codec lookup readout error > 0
        numeric-epsilon      interned readout error > APPROX_EPSILON
        infeasible-rejected  a non-preserving target was accepted
    """
    if n_targets < 0:
        raise ValueError(f"n_targets must be >= 0, got {n_targets}")
    graphs = list(corpus[:max_graphs])
    dyn_graphs = pad_timeline(list(dyn_corpus[:max_graphs]))
    builder = _ReportBuilder(
        "approximation",
        corpus_hash([*graphs, *dyn_graphs]),
        ("codec-exact", "numeric-epsilon", "infeasible-rejected"),
    )
    rng = np.random.default_rng(seed)
    static_patterns: list[tuple[Any, int]] = [(g, v) for g in graphs for v in g.nodes]
    _approximation_checks("static-", static_patterns, n_targets, rng, builder)
    dyn_patterns: list[tuple[Any, int]] = [(dg, v) for dg in dyn_graphs for v in dg.union_nodes]
    _approximation_checks("dynamic-", dyn_patterns, n_targets, rng, builder)
    return builder.finish()


def check_sgnn(g: Sauhg, seed: int = 0) -> list[Violation]:
    """
    Codec embeddings versus tree codes and same-iteration AWL colors;
    numeric embeddings versus stable AWL colors.
    """
    if len(g) == 0:
        return []
    layers = diameter(g) + 1
    h = run_sgnn_codec(g, layers).final
    codes = TreeBuilder(g).codes(layers)
    history = run_awl(g)
    same_iteration, stable = history.colors_at(layers), history.final
    params = NumericParams.random(3, g.attr_dim, layers, seed=seed)
    numeric = {v: x.tobytes() for v, x in run_sgnn_numeric(g, layers, params).final.items()}
    out: list[Violation] = []
    for v in g.nodes:
        if h[v] != codes[v]:
            out.append(("embedding=tree-code", {"node": v, "layers": layers}))
    for u, v in _pairs(g.nodes):
        embedding_eq = h[u] == h[v]
        if embedding_eq != (same_iteration[u] == same_iteration[v]):
            out.append(("embedding~awl", {"nodes": [u, v], "embedding_eq": embedding_eq}))
        if stable[u] == stable[v] and numeric[u] != numeric[v]:
            out.append(("numeric<=awl", {"nodes": [u, v]}))
    return out


def check_dgnn(dg: DynamicGraph) -> list[Violation]:
    """Codec DGNN state q_v(t) against the sequence code of (T_v(0), ..., T_v(t))."""
    layers = snapshot_layers(dg)
    states = run_dgnn(dg, "codec", layers)
    trees = DynTreeBuilder(dg)
    out: list[Violation] = []
    for v in dg.union_nodes:
        sequence = trees.trees(v, layers)
        for t, state in enumerate(states):
            if state.q[v] != seq_code(sequence[: t + 1]):
                out.append(("dgnn-state=dut-sequence", {"node": v, "t": t}))
    return out


def verify_sgnn_attainment(
    corpus: Sequence[Sauhg],
    dyn_corpus: Sequence[DynamicGraph] = (),
    seed: int = 0,
    workers: int = 1,
) -> VerdictReport:
    """
    Reference GNN attainment.

    Directions:
        embedding=tree-code      codec h_v^(r+1) differs from the tree code of T_v^(r+1)
        embedding~awl            codec embedding equality differs from AWL equality after
                                 the same number of iterations
        numeric<=awl             AWL-equivalent nodes got different numeric embeddings
        dgnn-state=dut-sequence  codec DGNN state differs from the tree sequence code
    """
    builder = _ReportBuilder(
        "sgnn-attainment",
        corpus_hash([*corpus, *dyn_corpus]),
        ("embedding=tree-code", "embedding~awl", "numeric<=awl", "dgnn-state=dut-sequence"),
    )

    def check(g: Sauhg) -> list[Violation]:
        return check_sgnn(g, seed)

    for i, (g, violations) in enumerate(zip(corpus, _map(check, corpus, workers), strict=True)):
        builder.add(_case_id(i), len(g) + _pair_count(g), violations, _shrinker(g, check))
    dyn_results = _map(check_dgnn, dyn_corpus, workers)
    for i, (dg, violations) in enumerate(zip(dyn_corpus, dyn_results, strict=True)):
        builder.add(
            "d" + _case_id(i), len(dg.union_nodes), violations, _shrinker(dg, check_dgnn, True)
        )
    return builder.finish()


# ---------------------------------------------------------------------------
# Hierarchy and oracle suites
# ---------------------------------------------------------------------------


def _refines(fine: Sequence[tuple[int, ...]], coarse: Sequence[tuple[int, ...]]) -> bool:
    owner = {v: i for i, cls in enumerate(coarse) for v in cls}
    return all(len({owner[v] for v in cls}) == 1 for cls in fine)


def verify_wl_hierarchy(corpus: Sequence[Sauhg], workers: int = 1) -> VerdictReport:
    """
    1-WL versus AWL.

    Directions:
        awl-refines-1wl   a corpus graph whose AWL partition does not refine its 1-WL partition
        curated-verdicts  a curated counterexample pair whose 1-WL / AWL / isomorphism
                          verdict differs from the expected one
    """
    pairs = counterexamples()
    builder = _ReportBuilder(
        "wl-hierarchy",
        corpus_hash([*corpus, *(g for p in pairs for g in (p.first, p.second))]),
        ("awl-refines-1wl", "curated-verdicts"),
    )

    def check(g: Sauhg) -> list[Violation]:
        if len(g) == 0:
            return []
        awl = partition_of(run_awl(g).final)
        plain = partition_of(run_1wl(g).final)
        return [] if _refines(awl, plain) else [("awl-refines-1wl", {"awl": awl, "1wl": plain})]

    for i, (g, violations) in enumerate(zip(corpus, _map(check, corpus, workers), strict=True)):
        builder.add(_case_id(i), 1, violations)
    for pair in pairs:
        got = {
            "1wl": wl_graph_equivalent(pair.first, pair.second),
            "awl": awl_graph_equivalent(pair.first, pair.second),
            "iso": brute_force_isomorphic(pair.first, pair.second) is not None,
        }
        violations = [
            ("curated-verdicts", {"test": test, "expected": pair.expected[test], "got": got[test]})
            for test in sorted(pair.expected)
            if got[test] != pair.expected[test]
        ]
        builder.add(pair.name, len(pair.expected), violations)
    return builder.finish()


def _iso_bucket(g: Sauhg) -> tuple[Any, ...]:
    degrees = sorted(len(neighbors(g, v)) for v in g.nodes)
    return (
        len(g),
        len(g.edge_attrs),
        tuple(degrees),
        tuple(sorted(g.node_attrs.values())),
        tuple(sorted(g.edge_attrs.values())),
    )


def verify_oracle_soundness(
    corpus: Sequence[Sauhg], max_pairs: int = 2000, max_nodes: int = ISO_NODE_LIMIT
) -> VerdictReport:
    """
    Isomorphism implies AWL graph equivalence.

    Checked pairs: every graph with a relabelled copy of itself (which must be
    found isomorphic) and corpus pairs with equal size, degree sequence and
    attribute multisets, up to max_pairs. Graphs above max_nodes are skipped.

    Directions:
        iso=>awl         isomorphic but not AWL equivalent
        relabelled-copy  a relabelled copy was not found isomorphic
    """
    builder = _ReportBuilder(
        "oracle-soundness", corpus_hash(corpus), ("iso=>awl", "relabelled-copy")
    )
    small = [(i, g) for i, g in enumerate(corpus) if len(g) <= max_nodes]
    for i, g in small:
        nodes = g.nodes
        copy = relabel(g, dict(zip(nodes, reversed(nodes), strict=True)))
        violations: list[Violation] = []
        if brute_force_isomorphic(g, copy, max_nodes=max_nodes) is None:
            violations.append(("relabelled-copy", {}))
        elif not awl_graph_equivalent(g, copy):
            violations.append(("iso=>awl", {"pair": "relabelled"}))
        builder.add(_case_id(i) + "~relabelled", 1, violations)

    buckets: dict[tuple[Any, ...], list[int]] = {}
    for i, g in small:
        buckets.setdefault(_iso_bucket(g), []).append(i)
    corpus_pairs = sorted(
        (i, j) for members in buckets.values() for i, j in itertools.combinations(members, 2)
    )
    for i, j in corpus_pairs[:max_pairs]:
        violations = []
        witness = brute_force_isomorphic(corpus[i], corpus[j], max_nodes=max_nodes)
        if witness is not None and not awl_graph_equivalent(corpus[i], corpus[j]):
            violations.append(("iso=>awl", {"bijection": witness.node_bijection}))
        builder.add(_case_id(i, j), 1, violations)
    return builder.finish()


def run_all(
    corpus: Sequence[Sauhg],
    dyn_corpus: Sequence[DynamicGraph],
    seed: int = 0,
    n_targets: int = 50,
    max_depth: int = DEFAULT_MAX_DEPTH,
    workers: int = 1,
    oracle_max_nodes: int = ISO_NODE_LIMIT,
) -> list[VerdictReport]:
    """Run every suite; reports come back in a fixed order."""
    return [
        verify_tree_wl_equivalence(corpus, workers),
        verify_depth_coloring(corpus, max_depth, workers),
        verify_depth_bound(corpus, workers),
        verify_statify_correspondence(dyn_corpus, workers=workers),
        verify_dynamic_graph_equivalence(dyn_corpus, workers=workers),
        verify_approximation(corpus, n_targets, dyn_corpus, seed),
        verify_wl_hierarchy(corpus, workers),
        verify_oracle_soundness(corpus, max_nodes=oracle_max_nodes),
        verify_sgnn_attainment(corpus, dyn_corpus, seed, workers),
    ]
