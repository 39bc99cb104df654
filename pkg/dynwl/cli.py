"""
Command-line entry point: ``dynwl <command> ...``.

Commands:
    statify / dynamify      dynamic <-> static transformation
    wl run / wl compare     color refinement and equivalence verdicts
    tree build / compare    unfolding tree codes and DOT rendering
    oracle iso              brute-force isomorphism
    gnn run / dyn-run / fit reference GNN embeddings and readout fitting
    corpus generate         seeded corpus directory with manifest
    verify all              every property suite, one report

Exit codes: 0 success (or "equivalent"), 1 "not equivalent" / failing
verification, 2 error.

Example usage:
    dynwl corpus generate --spec spec.json -o corpus/
    dynwl verify all --corpus corpus/ --report report.json --seed 7
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import __version__
from .config import Settings
from .corpus import CorpusSpec, generate, load_corpus, write_corpus
from .exceptions import DynwlException, GraphFormatError
from .gnn import (
    NumericParams,
    RecurrentParams,
    fit_readout,
    pattern_codes,
    run_dgnn,
    run_sgnn_codec,
    run_sgnn_numeric,
    snapshot_layers,
    target_from_values,
)
from .graph import DynamicGraph, Sauhg, quantize, quantize_dynamic
from .io import dump_graph, load_any
from .oracle import brute_force_isomorphic
from .transform import make_dynamic, make_static
from .unfolding import TreeBuilder, aut_equivalent, dut_equivalent, to_dot
from .verify import run_all
from .wl import (
    awl_graph_equivalent,
    awl_node_equivalent,
    dwl_equivalent,
    dwl_node_equivalent,
    run_1wl,
    run_awl,
    run_dwl,
)

logger = logging.getLogger(__name__)


def _emit(data: Any, report: str | None = None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if report:
        path = Path(report)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
        print(f"✅ Wrote {path}")
    else:
        print(text)


def _load(path: str, settings: Settings) -> Sauhg | DynamicGraph:
    g = load_any(path)
    if settings.quantize_digits is None:
        return g
    if isinstance(g, DynamicGraph):
        return quantize_dynamic(g, settings.quantize_digits)
    return quantize(g, settings.quantize_digits)


def _static(path: str, settings: Settings) -> Sauhg:
    g = _load(path, settings)
    if isinstance(g, DynamicGraph):
        raise GraphFormatError("Expected a static graph", context={"path": path})
    return g


def _dynamic(path: str, settings: Settings) -> DynamicGraph:
    g = _load(path, settings)
    if not isinstance(g, DynamicGraph):
        raise GraphFormatError("Expected a dynamic graph", context={"path": path})
    return g


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise GraphFormatError(f"Cannot read {path}: {e}", context={"path": path}) from e


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_statify(args: argparse.Namespace, settings: Settings) -> int:
    dump_graph(make_static(_dynamic(args.input, settings)), args.output)
    print(f"✅ Wrote {args.output}")
    return 0


def cmd_dynamify(args: argparse.Namespace, settings: Settings) -> int:
    g = make_dynamic(_static(args.input, settings), args.timeline, args.attr_dim)
    dump_graph(g, args.output)
    print(f"✅ Wrote {args.output}")
    return 0


def cmd_wl_run(args: argparse.Namespace, settings: Settings) -> int:
    if args.variant == "dwl":
        history: Any = run_dwl(_dynamic(args.graph, settings), args.max_iter)
    else:
        runner = run_1wl if args.variant == "1wl" else run_awl
        history = runner(_static(args.graph, settings), args.max_iter)
    _emit({"variant": args.variant, **history.to_dict()}, args.report)
    return 0


def cmd_wl_compare(args: argparse.Namespace, settings: Settings) -> int:
    verdict: dict[str, Any] = {"variant": args.variant}
    if args.variant == "dwl":
        a, b = _dynamic(args.first, settings), _dynamic(args.second, settings)
        if args.nodes:
            equivalent = dwl_node_equivalent(a, args.nodes[0], b, args.nodes[1], pad=args.pad)
        else:
            equivalent = dwl_equivalent(a, b, pad=args.pad)
    else:
        g1, g2 = _static(args.first, settings), _static(args.second, settings)
        if args.nodes:
            equivalent = awl_node_equivalent(g1, args.nodes[0], g2, args.nodes[1])
        else:
            equivalent = awl_graph_equivalent(g1, g2)
    if args.nodes:
        verdict["nodes"] = list(args.nodes)
    verdict["equivalent"] = equivalent
    _emit(verdict)
    return 0 if equivalent else 1


def cmd_tree_build(args: argparse.Namespace, settings: Settings) -> int:
    g = _static(args.graph, settings)
    tree = TreeBuilder(g).tree(args.node, args.depth)
    _emit({"node": args.node, "depth": args.depth, "code": tree.code.hex()})
    if args.dot:
        Path(args.dot).write_text(to_dot(tree) + "\n")
        print(f"✅ Wrote {args.dot}")
    return 0


def cmd_tree_compare(args: argparse.Namespace, settings: Settings) -> int:
    a, b = _load(args.first, settings), _load(args.second, settings)
    u, v = args.nodes
    if isinstance(a, DynamicGraph) and isinstance(b, DynamicGraph):
        equivalent = dut_equivalent(a, u, b, v, pad=args.pad)
    elif isinstance(a, Sauhg) and isinstance(b, Sauhg):
        equivalent = aut_equivalent(a, u, b, v, args.depth)
    else:
        raise GraphFormatError("Cannot compare a static with a dynamic graph")
    _emit({"nodes": [u, v], "equivalent": equivalent})
    return 0 if equivalent else 1


def cmd_oracle_iso(args: argparse.Namespace, settings: Settings) -> int:
    witness = brute_force_isomorphic(
        _static(args.first, settings),
        _static(args.second, settings),
        mode=args.mode,
        max_nodes=settings.oracle_max_nodes,
    )
    result: dict[str, Any] = {"mode": args.mode, "isomorphic": witness is not None}
    if witness is not None:
        result["node_bijection"] = {str(k): v for k, v in witness.node_bijection.items()}
        result["node_attr_map"] = [[list(k), list(v)] for k, v in witness.node_attr_map.items()]
        result["edge_attr_map"] = [[list(k), list(v)] for k, v in witness.edge_attr_map.items()]
    _emit(result)
    return 0 if witness is not None else 1


def _numeric_params(args: argparse.Namespace, attr_dim: int, layers: int) -> NumericParams:
    if args.params:
        return NumericParams.from_dict(_read_json(args.params))
    return NumericParams.random(args.state_dim, attr_dim, layers, seed=args.seed)


def cmd_gnn_run(args: argparse.Namespace, settings: Settings) -> int:
    g = _static(args.graph, settings)
    if args.backend == "codec":
        codes = run_sgnn_codec(g, args.layers).final
        embeddings: dict[str, Any] = {str(v): code.hex() for v, code in codes.items()}
    else:
        params = _numeric_params(args, g.attr_dim, args.layers)
        final = run_sgnn_numeric(g, args.layers, params).final
        embeddings = {str(v): [float(x) for x in h] for v, h in final.items()}
    _emit({"backend": args.backend, "layers": args.layers, "embeddings": embeddings}, args.report)
    return 0


def cmd_gnn_dyn_run(args: argparse.Namespace, settings: Settings) -> int:
    dg = _dynamic(args.graph, settings)
    layers = [args.layers] * len(dg.snapshots) if args.layers else snapshot_layers(dg)
    if args.backend == "codec":
        states = run_dgnn(dg, "codec", layers)
        timeline = [{str(v): q.hex() for v, q in s.q.items()} for s in states]
    else:
        params = _numeric_params(args, dg.attr_dim, max(layers))
        recurrent = (
            RecurrentParams.from_dict(_read_json(args.recurrent))
            if args.recurrent
            else RecurrentParams.random(params.state_dim, seed=args.seed)
        )
        states = run_dgnn(dg, "numeric", layers, params, recurrent)
        timeline = [{str(v): [float(x) for x in q] for v, q in s.q.items()} for s in states]
    _emit({"backend": args.backend, "layers": layers, "states": timeline}, args.report)
    return 0


def cmd_gnn_fit(args: argparse.Namespace, settings: Settings) -> int:
    graphs, digest = load_corpus(args.patterns)
    patterns = [
        (g, v) for g in graphs for v in (g.union_nodes if isinstance(g, DynamicGraph) else g.nodes)
    ]
    document = _read_json(args.target)
    values = document.get("values") if isinstance(document, dict) else None
    if not isinstance(values, list) or len(values) != len(patterns):
        raise GraphFormatError(
            "Target document needs one value per pattern",
            context={"path": args.target, "patterns": len(patterns)},
        )
    codes = pattern_codes(patterns)
    target = target_from_values(list(zip(codes, (float(x) for x in values), strict=True)))
    fit = fit_readout(patterns, target, args.backend, args.readout, codes=codes)
    _emit(
        {
            "corpus_hash": digest,
            "backend": fit.backend,
            "readout": fit.readout,
            "depth": fit.depth,
            "max_error": fit.max_error,
            "predictions": list(fit.predictions),
        },
        args.report,
    )
    return 0


def cmd_corpus_generate(args: argparse.Namespace, settings: Settings) -> int:
    spec = CorpusSpec.from_json(args.spec)
    manifest = write_corpus(generate(spec), spec, args.output)
    print(f"✅ Wrote {len(manifest['files'])} graphs to {args.output}")
    print(f"   corpus_hash: {manifest['corpus_hash']}")
    return 0


def _corpus_or_generated(
    directory: str | None, dynamic: bool, seed: int, count: int
) -> list[Any]:
    if directory:
        graphs, _ = load_corpus(directory)
        wanted = [g for g in graphs if isinstance(g, DynamicGraph) == dynamic]
        if len(wanted) != len(graphs):
            logger.warning("skipped %d graphs of the other kind", len(graphs) - len(wanted))
        return wanted
    spec = CorpusSpec(seed=seed, count=count, timeline_len=3 if dynamic else None)
    return list(generate(spec))


def cmd_verify_all(args: argparse.Namespace, settings: Settings) -> int:
    corpus = _corpus_or_generated(args.corpus, False, args.seed, args.count)
    dyn_corpus = _corpus_or_generated(args.dyn_corpus, True, args.seed, args.count)
    workers = args.workers or settings.workers
    reports = run_all(
        corpus,
        dyn_corpus,
        seed=args.seed,
        workers=workers,
        oracle_max_nodes=settings.oracle_max_nodes,
    )
    document = {
        "seed": args.seed,
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict(include_timing=args.timing) for r in reports],
    }
    for r in reports:
        mark = "✅" if r.passed else "❌"
        print(f"{mark} {r.theorem_id}: {r.cases_checked} cases, violations {r.violations}")
    if args.report:
        _emit(document, args.report)
    return 0 if document["passed"] else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _nodes(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument(
        "--nodes",
        nargs=2,
        type=int,
        metavar=("U", "V"),
        required=required,
        help="node in the first graph and node in the second graph",
    )


def _numeric_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--params", help="NumericParams JSON (random when omitted)")
    parser.add_argument("--state-dim", type=int, default=4, help="random params state size")
    parser.add_argument("--seed", type=int, default=0, help="random params seed")
    parser.add_argument("--report", help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynwl",
        description="Attributed and dynamic WL refinement, unfolding trees, GNNs.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  dynwl wl compare a.json b.json --variant awl
  dynwl corpus generate --spec spec.json -o corpus/
  dynwl verify all --corpus corpus/ --report report.json --seed 7

Exit codes: 0 success or equivalent, 1 not equivalent or failing, 2 error.
""",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("statify", help="dynamic graph -> statified static graph")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_statify)

    p = commands.add_parser("dynamify", help="statified static graph -> dynamic graph")
    p.add_argument("input")
    p.add_argument("--timeline", type=int, required=True, help="number of timestamps")
    p.add_argument("--attr-dim", type=int, required=True, help="original attribute dimension")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dynamify)

    wl = commands.add_parser("wl", help="color refinement").add_subparsers(
        dest="wl_command", required=True
    )
    p = wl.add_parser("run")
    p.add_argument("graph")
    p.add_argument("--variant", choices=("1wl", "awl", "dwl"), default="awl")
    p.add_argument("--max-iter", type=int)
    p.add_argument("--report")
    p.set_defaults(func=cmd_wl_run)
    p = wl.add_parser("compare")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--variant", choices=("awl", "dwl"), default="awl")
    p.add_argument("--pad", action="store_true", help="pad the shorter timeline (dwl)")
    _nodes(p, required=False)
    p.set_defaults(func=cmd_wl_compare)

    tree = commands.add_parser("tree", help="unfolding trees").add_subparsers(
        dest="tree_command", required=True
    )
    p = tree.add_parser("build")
    p.add_argument("graph")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--dot", help="write a Graphviz rendering here")
    p.set_defaults(func=cmd_tree_build)
    p = tree.add_parser("compare")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--depth", type=int, help="static depth (default: max diameter + 1)")
    p.add_argument("--pad", action="store_true", help="pad the shorter timeline (dynamic)")
    _nodes(p, required=True)
    p.set_defaults(func=cmd_tree_compare)

    oracle = commands.add_parser("oracle", help="brute-force ground truth").add_subparsers(
        dest="oracle_command", required=True
    )
    p = oracle.add_parser("iso")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--mode", choices=("strict", "renaming"), default="strict")
    p.set_defaults(func=cmd_oracle_iso)

    gnn = commands.add_parser("gnn", help="reference GNN").add_subparsers(
        dest="gnn_command", required=True
    )
    p = gnn.add_parser("run")
    p.add_argument("graph")
    p.add_argument("--backend", choices=("codec", "numeric"), default="codec")
    p.add_argument("--layers", type=int, required=True)
    _numeric_options(p)
    p.set_defaults(func=cmd_gnn_run)
    p = gnn.add_parser("dyn-run")
    p.add_argument("graph")
    p.add_argument("--backend", choices=("codec", "numeric"), default="codec")
    p.add_argument("--layers", type=int, help="layers per snapshot (default: r_t + 1)")
    p.add_argument("--recurrent", help="RecurrentParams JSON (random when omitted)")
    _numeric_options(p)
    p.set_defaults(func=cmd_gnn_dyn_run)
    p = gnn.add_parser("fit")
    p.add_argument("--patterns", required=True, help="corpus directory; every node is a pattern")
    p.add_argument("--target", required=True, help='JSON {"values": [one per pattern]}')
    p.add_argument("--backend", choices=("codec", "numeric"), default="codec")
    p.add_argument("--readout", choices=("lookup", "interned", "lstsq"))
    p.add_argument("--report")
    p.set_defaults(func=cmd_gnn_fit)

    corpus = commands.add_parser("corpus", help="corpus generation").add_subparsers(
        dest="corpus_command", required=True
    )
    p = corpus.add_parser("generate")
    p.add_argument("--spec", required=True, help="CorpusSpec JSON")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_corpus_generate)

    verify = commands.add_parser("verify", help="property suites").add_subparsers(
        dest="verify_command", required=True
    )
    p = verify.add_parser("all")
    p.add_argument("--corpus", help="static corpus directory (generated when omitted)")
    p.add_argument("--dyn-corpus", help="dynamic corpus directory (generated when omitted)")
    p.add_argument("--report", help="write the full JSON report here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100, help="size of generated corpora")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.add_argument("--workers", type=int, help="thread pool size (default: DYNWL_WORKERS)")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    try:
        settings = Settings.from_env()
        level = logging.DEBUG if args.verbose else settings.log_level_value
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
        return int(args.func(args, settings))
    except (DynwlException, ValueError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
