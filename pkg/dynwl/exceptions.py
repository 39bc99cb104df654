"""
dynwl exception hierarchy.

All exceptions include context for debugging. No silent failures.
"""

from typing import Any


class DynwlException(Exception):  # noqa: N818
    """
    Base exception for all dynwl errors.

    Attributes:
        message: Human-readable error description
        context: Additional error context (node ids, dimensions, file paths, etc.)
    """

    def __init__(self, message: str, context: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.context = context or {}

    def __str__(self) -> str:
        if self.context:
            context_str = ", ".join(f"{k}={v}" for k, v in self.context.items())
            return f"{self.message} ({context_str})"
        return self.message


class InvalidGraph(DynwlException):
    """
    Graph construction rejected its input.

    Raised when:
    - An attribute contains NaN or Inf
    - An attribute length differs from the declared attribute dimension
    - An edge endpoint is not a node of the graph
    - A dynamic graph has no snapshots or mixed attribute dimensions

    Resolution:
    - Fix the input data; graphs are validated once and immutable afterwards
    """

    pass


class NodeNotFound(DynwlException):
    """
    A node id was queried that the graph does not contain.

    Attributes:
        node: The missing node id
    """

    def __init__(self, node: int, context: dict[str, Any] | None = None):
        context = context or {}
        context.setdefault("node", node)
        super().__init__(f"Node {node} not found", context)
        self.node = node


class EmptyGraph(DynwlException):
    """
    Operation needs at least one node.

    Raised when:
    - diameter() or a refinement run is asked for a graph without nodes
    """

    pass


class AttrDimMismatch(DynwlException):
    """
    Two graphs with different attribute dimensions were combined.

    Attributes:
        left: Attribute dimension of the first graph
        right: Attribute dimension of the second graph
    """

    def __init__(self, left: int, right: int, context: dict[str, Any] | None = None):
        context = context or {}
        context.update({"left": left, "right": right})
        super().__init__("Attribute dimensions differ", context)
        self.left = left
        self.right = right


class GraphFormatError(DynwlException):
    """
    A JSON graph document does not follow the graph file format.

    Raised when:
    - Required keys are missing ("attr_dim", "nodes", "edges", "snapshots")
    - The file is not valid JSON
    - "timeline_len" disagrees with the number of snapshots

    Resolution:
    - Compare the document with the format in README.md
    """

    pass


class NotStatified(DynwlException):
    """
    A static graph cannot be read back as a dynamic graph.

    Raised when:
    - attr_dim is not (k+1) * timeline_len
    - An existence flag is neither 0 nor 1
    - A flag is 0 but its attribute slot is not all zeros
    - An edge exists at a timestamp where one of its endpoints does not
    """

    pass


class TimelineMismatch(DynwlException):
    """
    Dynamic graphs over different timelines were compared.

    Resolution:
    - Pad both graphs with pad_timeline() or pass pad=True
    """

    pass


class TooLarge(DynwlException):
    """
    Input exceeds the size bound of a brute-force oracle.

    Attributes:
        size: Offending node count
        limit: Maximum supported node count
    """

    def __init__(self, size: int, limit: int, context: dict[str, Any] | None = None):
        context = context or {}
        context.update({"size": size, "limit": limit})
        super().__init__("Input too large for brute-force oracle", context)
        self.size = size
        self.limit = limit


class InvalidTree(DynwlException):
    """
    An unfolding tree or tree code is malformed.

    Raised when:
    - A tree with an absent (⊥) root is given children
    - A byte string does not decode as a tree or sequence code
    """

    pass


class ShapeError(DynwlException):
    """
    Numeric GNN parameters do not fit the graph or each other.

    Raised when:
    - A weight matrix has the wrong shape for the state/attribute dimension
    - More layers are requested than the parameters define
    """

    pass


class TargetUndefined(DynwlException):
    """
    A readout target has no value for a pattern's tree code.

    Resolution:
    - Extend the target table to every pattern code
    """

    pass


class InfeasibleTarget(DynwlException):
    """
    A target assigns different values to unfolding-equivalent patterns.

    Such a target does not preserve unfolding equivalence, so no GNN
    (and no function of unfolding trees) can realise it.
    """

    pass


class SpecError(DynwlException):
    """
    A corpus specification is invalid.

    Raised when:
    - Node range is empty or negative
    - A probability is outside [0, 1]
    - The attribute alphabet size exceeds the built-in alphabet
    """

    pass


class ConfigurationError(DynwlException):
    """
    Library configuration is invalid.

    Raised when:
    - A DYNWL_* environment variable cannot be parsed
    - A configured value is out of range

    Resolution:
    - Check the DYNWL_* variables in your environment
    """

    pass
