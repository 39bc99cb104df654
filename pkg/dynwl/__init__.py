"""
dynwl: executable expressivity theory for attributed and dynamic graphs.

Attributed (AWL) and dynamic (DWL) Weisfeiler-Lehman refinement, unfolding
trees with injective byte codes, the dynamic -> static transformation, a
constructive reference GNN, and property suites that check the equivalences
between all of them on generated corpora.

Quick start:
    from dynwl import Sauhg, awl_graph_equivalent, aut_equivalent

    g = Sauhg.build(1, {1: [0.0], 2: [0.0], 3: [1.0]}, {(1, 2): [0.5], (2, 3): [0.5]})
    print(aut_equivalent(g, 1, g, 3))

Error handling:
    All functions raise on failure. Every library error derives from
    DynwlException and carries a context dict:
    - InvalidGraph / GraphFormatError: fix the input data or file
    - NotStatified: the static graph was not produced by make_static
    - TimelineMismatch: pass pad=True or align timelines first
    - TooLarge: brute-force oracles are for small graphs only
"""

from .exceptions import (
    AttrDimMismatch,
    ConfigurationError,
    DynwlException,
    EmptyGraph,
    GraphFormatError,
    InfeasibleTarget,
    InvalidGraph,
    InvalidTree,
    NodeNotFound,
    NotStatified,
    ShapeError,
    SpecError,
    TargetUndefined,
    TimelineMismatch,
    TooLarge,
)
from .graph import BOTTOM, DynamicGraph, Sauhg, diameter, disjoint_union, neighbors
from .transform import make_dynamic, make_static, pad_timeline
from .unfolding import (
    UTree,
    aut_equivalent,
    build_attr_tree,
    build_dyn_trees,
    dut_equivalent,
    dut_graph_equivalent,
    seq_code,
    tree_code,
)
from .wl import (
    awl_graph_equivalent,
    awl_node_equivalent,
    dwl_equivalent,
    run_1wl,
    run_awl,
    run_dwl,
)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "DynamicGraph",
    "Sauhg",
    "UTree",
    "diameter",
    "disjoint_union",
    "neighbors",
    "make_static",
    "make_dynamic",
    "pad_timeline",
    "run_1wl",
    "run_awl",
    "run_dwl",
    "awl_node_equivalent",
    "awl_graph_equivalent",
    "dwl_equivalent",
    "build_attr_tree",
    "build_dyn_trees",
    "tree_code",
    "seq_code",
    "aut_equivalent",
    "dut_equivalent",
    "dut_graph_equivalent",
    "DynwlException",
    "InvalidGraph",
    "NodeNotFound",
    "EmptyGraph",
    "AttrDimMismatch",
    "GraphFormatError",
    "NotStatified",
    "TimelineMismatch",
    "TooLarge",
    "InvalidTree",
    "ShapeError",
    "TargetUndefined",
    "InfeasibleTarget",
    "SpecError",
    "ConfigurationError",
]
