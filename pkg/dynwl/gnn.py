"""
Reference SGNN and discrete DGNN with two interchangeable backends.

codec backend:
    The state of a node is a tree code. AGGREGATE decodes the neighbours'
    trees and joins them under a void root (tree_union); COMBINE puts the
    node's own root feature back on top (attach). After k layers the state
    of v is exactly the code of its depth-k unfolding tree. The recurrent
    DGNN cell appends each snapshot tree to the decoded sequence state.

numeric backend:
    A message-passing network with tanh activations:
        h_v^0 = tanh(W_in alpha_v + b_in)
        m_u   = tanh(W_msg [h_u ; omega_uv] + b_msg)
        h_v^k = tanh(W_upd [h_v ; sum_u m_u] + b_upd)
    Messages are summed in byte-sorted order, so nodes with equal multisets
    of messages get bitwise-equal sums.

Example usage:
    from dynwl.gnn import run_sgnn_codec, run_sgnn_numeric, NumericParams

    table = run_sgnn_codec(g, layers=3)
    params = NumericParams.random(state_dim=4, attr_dim=g.attr_dim, layers=3, seed=7)
    numeric = run_sgnn_numeric(g, 3, params)
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Generic, Literal, TypeVar

import numpy as np
import numpy.typing as npt

from .exceptions import InfeasibleTarget, ShapeError, TargetUndefined, TimelineMismatch
from .graph import DynamicGraph, Sauhg, diameter, neighbor_edge_attrs, snapshot_diameter
from .unfolding import (
    BOTTOM_LEAF,
    SeqCode,
    TreeCode,
    UTree,
    append_tree,
    attach,
    decode_seq,
    decode_tree,
    seq_code,
    tree_union,
)

logger = logging.getLogger(__name__)

Vector = npt.NDArray[np.float64]
Backend = Literal["codec", "numeric"]
Readout = Literal["lookup", "interned", "lstsq"]
S = TypeVar("S")


@dataclass(frozen=True)
class NodeEmbeddingTable(Generic[S]):
    """
    Per-layer node states of one SGNN run.

    Attributes:
        layers: layers[k] maps node -> h^k (tree code or vector)
    """

    layers: tuple[Mapping[int, S], ...]

    @property
    def final(self) -> Mapping[int, S]:
        return self.layers[-1]

    def at(self, k: int) -> Mapping[int, S]:
        return self.layers[k]


@dataclass(frozen=True)
class DgnnState(Generic[S]):
    """
    States of a DGNN at one timestamp.

    Attributes:
        h: node -> snapshot embedding h_v(t)
        q: node -> recurrent state q_v(t)
    """

    h: Mapping[int, S]
    q: Mapping[int, S]


class _DecodeCache:
    """Memoised decode_tree / decode_seq; states repeat heavily across nodes."""

    def __init__(self) -> None:
        self._trees: dict[bytes, UTree] = {}
        self._seqs: dict[bytes, tuple[UTree, ...]] = {}

    def tree(self, code: TreeCode) -> UTree:
        tree = self._trees.get(code)
        if tree is None:
            tree = self._trees.setdefault(code, decode_tree(code))
        return tree

    def seq(self, code: SeqCode) -> tuple[UTree, ...]:
        trees = self._seqs.get(code)
        if trees is None:
            trees = self._seqs.setdefault(code, decode_seq(code))
        return trees


def _check_layers(layers: int) -> None:
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")


def run_sgnn_codec(g: Sauhg, layers: int) -> NodeEmbeddingTable[TreeCode]:
    """
    Exact tree-codec SGNN.

    Args:
        g: Graph (may be empty)
        layers: Number of message-passing layers, >= 1

    Returns:
        Table with h^0..h^layers; h_v^k is the code of T_v^k

    Raises:
        ValueError: layers < 1
    """
    _check_layers(layers)
    cache = _DecodeCache()
    current: dict[int, TreeCode] = {v: UTree(g.node_attrs[v]).code for v in g.nodes}
    history = [current]
    for _ in range(layers):
        nxt: dict[int, TreeCode] = {}
        for v in g.nodes:
            aggregated = tree_union(
                (omega, cache.tree(current[u])) for u, omega in neighbor_edge_attrs(g, v)
            )
            nxt[v] = attach(cache.tree(current[v]), aggregated).code
        history.append(nxt)
        current = nxt
    return NodeEmbeddingTable(tuple(history))


def _array(data: Any, shape: tuple[int, ...], name: str) -> Vector:
    arr = np.asarray(data, dtype=np.float64)
    if arr.shape != shape:
        raise ShapeError(
            f"{name} has the wrong shape", context={"expected": shape, "got": arr.shape}
        )
    return arr


@dataclass(frozen=True, eq=False)
class LayerParams:
    """Weights of one numeric message-passing layer."""

    msg_weight: Vector
    msg_bias: Vector
    upd_weight: Vector
    upd_bias: Vector

    def to_dict(self) -> dict[str, Any]:
        return {
            "msg_weight": self.msg_weight.tolist(),
            "msg_bias": self.msg_bias.tolist(),
            "upd_weight": self.upd_weight.tolist(),
            "upd_bias": self.upd_bias.tolist(),
        }


@dataclass(frozen=True, eq=False)
class NumericParams:
    """
    Parameters of the numeric SGNN backend.

    Attributes:
        state_dim: m, dimension of every hidden state
        attr_dim: k, dimension of node and edge attributes
        input_weight: m x k
        input_bias: m
        layers: One LayerParams per layer; msg_weight m x (m + k), upd_weight m x 2m

    Raises:
        ShapeError: Any array has the wrong shape
    """

    state_dim: int
    attr_dim: int
    input_weight: Vector
    input_bias: Vector
    layers: tuple[LayerParams, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        m, k = self.state_dim, self.attr_dim
        if m < 1:
            raise ShapeError("state_dim must be >= 1", context={"state_dim": m})
        _array(self.input_weight, (m, k), "input_weight")
        _array(self.input_bias, (m,), "input_bias")
        for i, layer in enumerate(self.layers):
            _array(layer.msg_weight, (m, m + k), f"layers[{i}].msg_weight")
            _array(layer.msg_bias, (m,), f"layers[{i}].msg_bias")
            _array(layer.upd_weight, (m, 2 * m), f"layers[{i}].upd_weight")
            _array(layer.upd_bias, (m,), f"layers[{i}].upd_bias")

    @classmethod
    def random(
        cls, state_dim: int, attr_dim: int, layers: int, seed: int = 0, scale: float = 0.5
    ) -> "NumericParams":
        """Gaussian parameters from numpy's default_rng(seed)."""
        rng = np.random.default_rng(seed)
        m, k = state_dim, attr_dim

        def draw(*shape: int) -> Vector:
            return rng.normal(0.0, scale, size=shape)

        return cls(
            state_dim=m,
            attr_dim=k,
            input_weight=draw(m, k),
            input_bias=draw(m),
            layers=tuple(
                LayerParams(draw(m, m + k), draw(m), draw(m, 2 * m), draw(m))
                for _ in range(layers)
            ),
        )

    @classmethod
    def zeros(cls, state_dim: int, attr_dim: int, layers: int) -> "NumericParams":
        m, k = state_dim, attr_dim
        return cls(
            state_dim=m,
            attr_dim=k,
            input_weight=np.zeros((m, k)),
            input_bias=np.zeros(m),
            layers=tuple(
                LayerParams(np.zeros((m, m + k)), np.zeros(m), np.zeros((m, 2 * m)), np.zeros(m))
                for _ in range(layers)
            ),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "state_dim": self.state_dim,
            "attr_dim": self.attr_dim,
            "input_weight": self.input_weight.tolist(),
            "input_bias": self.input_bias.tolist(),
            "layers": [layer.to_dict() for layer in self.layers],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "NumericParams":
        """
        Parse parameters serialised by to_dict().

        Raises:
            ShapeError: Missing keys or wrongly shaped arrays
        """
        try:
            m, k = int(data["state_dim"]), int(data["attr_dim"])
            return cls(
                state_dim=m,
                attr_dim=k,
                input_weight=_array(data["input_weight"], (m, k), "input_weight"),
                input_bias=_array(data["input_bias"], (m,), "input_bias"),
                layers=tuple(
                    LayerParams(
                        _array(layer["msg_weight"], (m, m + k), "msg_weight"),
                        _array(layer["msg_bias"], (m,), "msg_bias"),
                        _array(layer["upd_weight"], (m, 2 * m), "upd_weight"),
                        _array(layer["upd_bias"], (m,), "upd_bias"),
                    )
                    for layer in data["layers"]
                ),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ShapeError(f"Malformed numeric parameters: {e}") from e

    def perturbed(self, scale: float, seed: int = 0) -> "NumericParams":
        """Copy with Gaussian noise of the given scale added to every array."""
        rng = np.random.default_rng(seed)

        def jitter(arr: Vector) -> Vector:
            return arr + rng.normal(0.0, scale, size=arr.shape)

        return NumericParams(
            state_dim=self.state_dim,
            attr_dim=self.attr_dim,
            input_weight=jitter(self.input_weight),
            input_bias=jitter(self.input_bias),
            layers=tuple(
                LayerParams(
                    jitter(layer.msg_weight),
                    jitter(layer.msg_bias),
                    jitter(layer.upd_weight),
                    jitter(layer.upd_bias),
                )
                for layer in self.layers
            ),
        )


def _canonical_sum(messages: list[Vector], m: int) -> Vector:
    total = np.zeros(m)
    for msg in sorted(messages, key=lambda x: x.tobytes()):
        total = total + msg
    return total


def run_sgnn_numeric(g: Sauhg, layers: int, params: NumericParams) -> NodeEmbeddingTable[Vector]:
    """
    Numeric message-passing SGNN.

    Args:
        g: Graph
        layers: Number of layers, >= 1
        params: Parameters with at least `layers` layers

    Returns:
        Table with h^0..h^layers as float64 vectors of length state_dim

    Raises:
        ValueError: layers < 1
        ShapeError: attr_dim mismatch or too few parameter layers
    """
    _check_layers(layers)
    if params.attr_dim != g.attr_dim:
        raise ShapeError(
            "Parameter attr_dim differs from graph attr_dim",
            context={"params": params.attr_dim, "graph": g.attr_dim},
        )
    if len(params.layers) < layers:
        raise ShapeError(
            "Parameters define too few layers",
            context={"defined": len(params.layers), "requested": layers},
        )
    m = params.state_dim
    current: dict[int, Vector] = {
        v: np.tanh(params.input_weight @ np.asarray(g.node_attrs[v]) + params.input_bias)
        for v in g.nodes
    }
    history = [current]
    for layer in params.layers[:layers]:
        nxt: dict[int, Vector] = {}
        for v in g.nodes:
            messages = [
                np.tanh(
                    layer.msg_weight @ np.concatenate([current[u], np.asarray(omega)])
                    + layer.msg_bias
                )
                for u, omega in neighbor_edge_attrs(g, v)
            ]
            aggregated = _canonical_sum(messages, m)
            nxt[v] = np.tanh(
                layer.upd_weight @ np.concatenate([current[v], aggregated]) + layer.upd_bias
            )
        history.append(nxt)
        current = nxt
    return NodeEmbeddingTable(tuple(history))


@dataclass(frozen=True, eq=False)
class RecurrentParams:
    """
    Shared affine-recurrent DGNN cell for the numeric backend.

        q_v(0) = tanh(A [h_v(0) ; present] + c)
        q_v(t) = tanh(B q_v(t-1) + A [h_v(t) ; present] + c)

    present is 1.0 when v exists at t and 0.0 otherwise (h is then zero).

    Attributes:
        input_weight: A, m x (m + 1)
        state_weight: B, m x m
        bias: c, m
    """

    state_dim: int
    input_weight: Vector
    state_weight: Vector
    bias: Vector

    def __post_init__(self) -> None:
        m = self.state_dim
        _array(self.input_weight, (m, m + 1), "input_weight")
        _array(self.state_weight, (m, m), "state_weight")
        _array(self.bias, (m,), "bias")

    @classmethod
    def random(cls, state_dim: int, seed: int = 0, scale: float = 0.5) -> "RecurrentParams":
        rng = np.random.default_rng(seed)
        m = state_dim
        return cls(
            m,
            rng.normal(0.0, scale, size=(m, m + 1)),
            rng.normal(0.0, scale, size=(m, m)),
            rng.normal(0.0, scale, size=m),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "state_dim": self.state_dim,
            "input_weight": self.input_weight.tolist(),
            "state_weight": self.state_weight.tolist(),
            "bias": self.bias.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RecurrentParams":
        try:
            m = int(data["state_dim"])
            return cls(
                m,
                _array(data["input_weight"], (m, m + 1), "input_weight"),
                _array(data["state_weight"], (m, m), "state_weight"),
                _array(data["bias"], (m,), "bias"),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ShapeError(f"Malformed recurrent parameters: {e}") from e


def snapshot_layers(dg: DynamicGraph) -> list[int]:
    """r_t + 1 per snapshot, r_t the snapshot diameter (0 when empty)."""
    return [snapshot_diameter(s) + 1 for s in dg.snapshots]


def run_dgnn(
    dg: DynamicGraph,
    backend: Backend = "codec",
    layers_per_snapshot: int | Sequence[int] | None = None,
    params: NumericParams | None = None,
    recurrent: RecurrentParams | None = None,
) -> tuple[DgnnState[Any], ...]:
    """
    Discrete DGNN: one SGNN run per snapshot stacked with a recurrent cell.

    Args:
        dg: Dynamic graph
        backend: "codec" (exact) or "numeric"
        layers_per_snapshot: One layer count for all snapshots, one per
            snapshot, or None for r_t + 1
        params: Numeric SGNN parameters (numeric backend)
        recurrent: Numeric recurrent cell (numeric backend)

    Returns:
        One DgnnState per timestamp. With the codec backend q_v(t) is the
        sequence code of (T_v(0), ..., T_v(t)), a ⊥ leaf where v is absent.

    Raises:
        ValueError: Unknown backend, missing numeric parameters, or a
            per-snapshot layer list of the wrong length
        ShapeError: Parameter shapes do not fit
    """
    if layers_per_snapshot is None:
        layer_counts = snapshot_layers(dg)
    elif isinstance(layers_per_snapshot, int):
        layer_counts = [layers_per_snapshot] * len(dg.snapshots)
    else:
        layer_counts = list(layers_per_snapshot)
        if len(layer_counts) != len(dg.snapshots):
            raise ValueError(
                f"expected {len(dg.snapshots)} layer counts, got {len(layer_counts)}"
            )
    nodes = dg.union_nodes

    if backend == "codec":
        cache = _DecodeCache()
        states: list[DgnnState[Any]] = []
        prev_q: dict[int, SeqCode] = {}
        for s, layers in zip(dg.snapshots, layer_counts, strict=True):
            final = run_sgnn_codec(s, layers).final
            h = {v: final[v] if v in s else BOTTOM_LEAF.code for v in nodes}
            q = {
                v: seq_code(
                    append_tree(cache.seq(prev_q[v]) if v in prev_q else None, cache.tree(h[v]))
                )
                for v in nodes
            }
            states.append(DgnnState(h, q))
            prev_q = q
        return tuple(states)

    if backend == "numeric":
        if params is None or recurrent is None:
            raise ValueError("numeric backend needs params and recurrent")
        if recurrent.state_dim != params.state_dim:
            raise ShapeError(
                "Recurrent state_dim differs from SGNN state_dim",
                context={"recurrent": recurrent.state_dim, "sgnn": params.state_dim},
            )
        m = params.state_dim
        numeric_states: list[DgnnState[Any]] = []
        prev: dict[int, Vector] | None = None
        for s, layers in zip(dg.snapshots, layer_counts, strict=True):
            final_h = run_sgnn_numeric(s, layers, params).final
            h_vecs = {v: final_h[v] if v in s else np.zeros(m) for v in nodes}
            q_vecs: dict[int, Vector] = {}
            for v in nodes:
                cell_input = np.concatenate([h_vecs[v], [1.0 if v in s else 0.0]])
                pre = recurrent.input_weight @ cell_input + recurrent.bias
                if prev is not None:
                    pre = recurrent.state_weight @ prev[v] + pre
                q_vecs[v] = np.tanh(pre)
            numeric_states.append(DgnnState(h_vecs, q_vecs))
            prev = q_vecs
        return tuple(numeric_states)

    raise ValueError(f"backend must be 'codec' or 'numeric', got {backend!r}")


@dataclass(frozen=True)
class TargetFunction:
    """
    A target defined as a table on tree codes (or sequence codes).

    Any such function gives equal values to unfolding-equivalent nodes.
    """

    table: Mapping[bytes, float]

    def __call__(self, code: bytes) -> float:
        try:
            return self.table[code]
        except KeyError:
            raise TargetUndefined(
                "Target has no value for this code", context={"code_bytes": len(code)}
            ) from None


def target_from_values(pairs: Sequence[tuple[bytes, float]]) -> TargetFunction:
    """
    Build a target from (code, value) observations.

    Raises:
        InfeasibleTarget: One code observed with two different values
    """
    table: dict[bytes, float] = {}
    for i, (code, value) in enumerate(pairs):
        seen = table.setdefault(code, value)
        if seen != value:
            raise InfeasibleTarget(
                "Equivalent patterns carry different target values",
                context={"pattern": i, "values": (seen, value)},
            )
    return TargetFunction(table)


Pattern = tuple[Sauhg | DynamicGraph, int]


@dataclass(frozen=True)
class ReadoutFit:
    """
    Result of fit_readout().

    Attributes:
        backend: Backend that produced the embeddings
        readout: "lookup", "interned" or "lstsq"
        depth: Layers used (R + 1 for static patterns)
        max_error: max |readout(pattern) - target(pattern)| over the patterns
        predictions: Readout value per pattern, in input order
        codes: Code per pattern (the keys the target is evaluated on)
    """

    backend: Backend
    readout: Readout
    depth: int
    max_error: float
    predictions: tuple[float, ...]
    codes: tuple[bytes, ...]


def pattern_depth(patterns: Sequence[Pattern]) -> int:
    """R + 1 with R the largest diameter among the pattern graphs."""
    static = [g for g, _ in patterns if isinstance(g, Sauhg)]
    return max((diameter(g) for g in _distinct(static)), default=0) + 1


def _distinct(graphs: Sequence[Any]) -> list[Any]:
    seen: dict[int, Any] = {}
    for g in graphs:
        seen.setdefault(id(g), g)
    return list(seen.values())


def pattern_codes(patterns: Sequence[Pattern], depth: int | None = None) -> list[bytes]:
    """
    Codec-backend code of every pattern.

    Static patterns give h_v^{depth} of run_sgnn_codec; dynamic patterns give
    q_v at the last timestamp of run_dgnn with r_t + 1 layers, r_t the largest
    snapshot diameter at t over all dynamic patterns.

    Raises:
        TimelineMismatch: Dynamic patterns with different timeline lengths
    """
    depth = pattern_depth(patterns) if depth is None else depth
    static_runs: dict[int, Mapping[int, TreeCode]] = {}
    dynamic = _distinct([g for g, _ in patterns if isinstance(g, DynamicGraph)])
    dyn_runs: dict[int, Mapping[int, SeqCode]] = {}
    if dynamic:
        lengths = {len(dg.snapshots) for dg in dynamic}
        if len(lengths) > 1:
            raise TimelineMismatch(
                "Dynamic patterns differ in timeline length", context={"lengths": sorted(lengths)}
            )
        layers = [
            max(snapshot_diameter(dg.snapshots[t]) for dg in dynamic) + 1
            for t in range(lengths.pop())
        ]
        for dg in dynamic:
            dyn_runs[id(dg)] = run_dgnn(dg, "codec", layers)[-1].q
    codes = []
    for g, v in patterns:
        if isinstance(g, DynamicGraph):
            codes.append(dyn_runs[id(g)][v])
        else:
            if id(g) not in static_runs:
                static_runs[id(g)] = run_sgnn_codec(g, depth).final
            codes.append(static_runs[id(g)][v])
    return codes


def fit_readout(
    patterns: Sequence[Pattern],
    target: TargetFunction,
    backend: Backend = "codec",
    readout: Readout | None = None,
    params: NumericParams | None = None,
    depth: int | None = None,
    codes: Sequence[bytes] | None = None,
) -> ReadoutFit:
    """
    Fit a READOUT so that readout(embedding of pattern) matches the target.

    codec + "lookup":     READOUT is the table code -> value (exact).
    numeric + "interned": each distinct code is interned to its rank, a
                          one-dimensional real state; READOUT interpolates
                          piecewise-linearly between (rank, value) knots.
    numeric + "lstsq":    least squares on [h_v ; 1] of run_sgnn_numeric
                          (static patterns only).

    Args:
        patterns: (graph, node) pairs
        target: Target on codes
        backend: "codec" or "numeric"
        readout: Readout kind; defaults to "lookup" (codec) / "interned" (numeric)
        params: Numeric parameters for "lstsq"; random(4, k, depth) if omitted
        depth: Override for R + 1
        codes: Precomputed pattern_codes(patterns, depth), reused across targets

    Raises:
        TargetUndefined: A pattern code is missing from the target table
        ValueError: Incompatible backend and readout
    """
    if not patterns:
        raise ValueError("fit_readout needs at least one pattern")
    readout = readout or ("lookup" if backend == "codec" else "interned")
    valid = {"codec": ("lookup",), "numeric": ("interned", "lstsq")}
    if readout not in valid.get(backend, ()):
        raise ValueError(f"readout {readout!r} is not available for backend {backend!r}")
    depth = pattern_depth(patterns) if depth is None else depth
    codes = list(codes) if codes is not None else pattern_codes(patterns, depth)
    values = np.array([target(code) for code in codes], dtype=np.float64)

    if readout == "lookup":
        lookup = {code: target(code) for code in codes}
        predictions = np.array([lookup[code] for code in codes])
    elif readout == "interned":
        knots = sorted(set(codes))
        rank = {code: float(i) for i, code in enumerate(knots)}
        xs = np.array([rank[code] for code in codes])
        knot_values = np.array([target(code) for code in knots])
        predictions = np.interp(xs, np.arange(len(knots), dtype=np.float64), knot_values)
    else:
        predictions = _lstsq_predictions(patterns, values, depth, params)

    max_error = float(np.max(np.abs(predictions - values)))
    logger.debug(
        "readout %s/%s over %d patterns: max_error=%g", backend, readout, len(patterns), max_error
    )
    return ReadoutFit(
        backend=backend,
        readout=readout,
        depth=depth,
        max_error=max_error,
        predictions=tuple(float(x) for x in predictions),
        codes=tuple(codes),
    )


def _lstsq_predictions(
    patterns: Sequence[Pattern], values: Vector, depth: int, params: NumericParams | None
) -> Vector:
    rows = []
    runs: dict[int, Mapping[int, Vector]] = {}
    for g, v in patterns:
        if not isinstance(g, Sauhg):
            raise ValueError("lstsq readout supports static patterns only")
        if params is None:
            params = NumericParams.random(4, g.attr_dim, depth)
        if id(g) not in runs:
            runs[id(g)] = run_sgnn_numeric(g, depth, params).final
        rows.append(np.concatenate([runs[id(g)][v], [1.0]]))
    design = np.vstack(rows)
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    return np.asarray(design @ coef, dtype=np.float64)


def perturbation_gain(
    g: Sauhg, layers: int, params: NumericParams, scale: float = 1e-6, seed: int = 0
) -> float:
    """
    Largest change of any final embedding entry per unit of parameter noise.

    Small values mean the numeric network responds about linearly to small
    parameter perturbations on this graph.
    """
    if scale <= 0:
        raise ValueError(f"scale must be > 0, got {scale}")
    base = run_sgnn_numeric(g, layers, params).final
    moved = run_sgnn_numeric(g, layers, params.perturbed(scale, seed)).final
    if not base:
        return 0.0
    return max(float(np.max(np.abs(moved[v] - base[v]))) for v in base) / scale
