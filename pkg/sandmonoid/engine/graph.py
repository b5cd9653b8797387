"""
sandmonoid - ENGINE: Graph
Finite directed multigraph with a sink.

Vertices are dense indices 0..n-1; the sink index is explicit.
Parallel edges are stored once as (tail, head, multiplicity).
Validation runs once at construction; instances are immutable.
"""

import logging
from collections import defaultdict, deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import GraphValidationError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, int]


# ============================================================
# MULTIDIGRAPH
# ============================================================

class MultiDigraph:
    """
    Immutable directed multigraph with a designated sink.

    Invariants checked at construction:
        - at least one non-sink vertex
        - every vertex reaches the sink
        - weakly connected
        - indices in range, multiplicities >= 1

    Args:
        vertex_count: number of vertices, sink included
        sink: index of the sink
        edges: (tail, head, multiplicity) triples; repeated pairs are merged
        labels: optional display name per vertex
        origin: parent vertex index per vertex, set on induced subgraphs
    """

    __slots__ = (
        "_n", "_sink", "_edges", "_labels", "_origin",
        "_succ", "_pred", "_out_degree", "_non_sink", "_position",
    )

    def __init__(
        self,
        vertex_count: int,
        sink: int,
        edges: Iterable[Edge],
        labels: Optional[Sequence[str]] = None,
        origin: Optional[Sequence[int]] = None,
    ):
        violations: List[str] = []
        if vertex_count < 2:
            violations.append(f"need a sink and at least one other vertex, got {vertex_count} vertices")
        if not 0 <= sink < max(vertex_count, 1):
            violations.append(f"sink {sink} out of range")

        merged: Dict[Tuple[int, int], int] = defaultdict(int)
        for tail, head, mult in edges:
            if not (0 <= tail < vertex_count and 0 <= head < vertex_count):
                violations.append(f"edge ({tail}, {head}) has a vertex out of range")
                continue
            if mult < 1:
                violations.append(f"edge ({tail}, {head}) has multiplicity {mult}")
                continue
            merged[(tail, head)] += mult

        if labels is not None and len(labels) != vertex_count:
            violations.append(f"{len(labels)} labels for {vertex_count} vertices")
        if origin is not None and len(origin) != vertex_count:
            violations.append(f"{len(origin)} origin indices for {vertex_count} vertices")
        if violations:
            raise GraphValidationError(violations)

        self._n = vertex_count
        self._sink = sink
        self._edges: Tuple[Edge, ...] = tuple(sorted((t, h, m) for (t, h), m in merged.items()))
        self._labels = tuple(labels) if labels is not None else None
        self._origin = tuple(origin) if origin is not None else None

        succ: List[List[Tuple[int, int]]] = [[] for _ in range(vertex_count)]
        pred: List[List[Tuple[int, int]]] = [[] for _ in range(vertex_count)]
        out_degree = [0] * vertex_count
        for tail, head, mult in self._edges:
            succ[tail].append((head, mult))
            pred[head].append((tail, mult))
            out_degree[tail] += mult
        self._succ = tuple(tuple(s) for s in succ)
        self._pred = tuple(tuple(p) for p in pred)
        self._out_degree = tuple(out_degree)
        self._non_sink = tuple(v for v in range(vertex_count) if v != sink)
        self._position = {v: i for i, v in enumerate(self._non_sink)}

        self._validate()

    def _validate(self):
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(self._n))
        digraph.add_edges_from((t, h) for t, h, _ in self._edges)

        violations = []
        if not nx.is_weakly_connected(digraph):
            violations.append("graph is not weakly connected")
        reaching = nx.ancestors(digraph, self._sink)
        stuck = [v for v in self._non_sink if v not in reaching]
        if stuck:
            violations.append(f"sink not reachable from {self.describe(stuck)}")
        if violations:
            raise GraphValidationError(violations)

    # ------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        """Number of vertices, sink included."""
        return self._n

    @property
    def sink(self) -> int:
        """Index of the sink."""
        return self._sink

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """Merged (tail, head, multiplicity) triples, sorted."""
        return self._edges

    @property
    def labels(self) -> Optional[Tuple[str, ...]]:
        """Display names, or None for plain indices."""
        return self._labels

    @property
    def origin(self) -> Optional[Tuple[int, ...]]:
        """Parent vertex per vertex on induced subgraphs, else None."""
        return self._origin

    @property
    def non_sink(self) -> Tuple[int, ...]:
        """Non-sink vertices in index order; position i is grain slot i of a Config."""
        return self._non_sink

    @property
    def out_degree(self) -> Tuple[int, ...]:
        """deg⁺ per vertex, multiplicities counted."""
        return self._out_degree

    def degrees(self) -> Tuple[int, ...]:
        """Out-degrees of the non-sink vertices, in Config slot order."""
        return tuple(self._out_degree[v] for v in self._non_sink)

    def successors(self, v: int) -> Tuple[Tuple[int, int], ...]:
        """(head, multiplicity) pairs of v's outward edges."""
        return self._succ[v]

    def predecessors(self, v: int) -> Tuple[Tuple[int, int], ...]:
        """(tail, multiplicity) pairs of v's inward edges."""
        return self._pred[v]

    def position(self, v: int) -> int:
        """Config slot of a non-sink vertex."""
        return self._position[v]

    def has_loop(self, v: int) -> bool:
        """v has an edge to itself."""
        return any(head == v for head, _ in self._succ[v])

    def multiplicity(self, tail: int, head: int) -> int:
        """Number of tail -> head edges."""
        for h, m in self._succ[tail]:
            if h == head:
                return m
        return 0

    def label(self, v: int) -> str:
        """Display name of v."""
        if self._labels is not None:
            return self._labels[v]
        return "sink" if v == self._sink else str(v)

    def vertex_by_label(self, label: str) -> int:
        """Vertex index for a label, "sink" or a plain index."""
        if self._labels is not None and label in self._labels:
            return self._labels.index(label)
        if label == "sink":
            return self._sink
        return int(label)

    def describe(self, vertices: Iterable[int]) -> str:
        """Vertex set as "{a, b, ...}"."""
        return "{" + ", ".join(self.label(v) for v in sorted(vertices)) + "}"

    def sink_out_degree(self) -> int:
        """Edges leaving the sink."""
        return self._out_degree[self._sink]

    def to_networkx(self) -> nx.MultiDiGraph:
        """Expanded networkx view: one networkx edge per parallel edge."""
        graph = nx.MultiDiGraph(sink=self._sink)
        graph.add_nodes_from(range(self._n))
        for tail, head, mult in self._edges:
            for _ in range(mult):
                graph.add_edge(tail, head)
        return graph

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiDigraph):
            return NotImplemented
        return (self._n, self._sink, self._edges) == (other._n, other._sink, other._edges)

    def __hash__(self) -> int:
        return hash((self._n, self._sink, self._edges))

    def __repr__(self) -> str:
        return f"MultiDigraph(n={self._n}, sink={self._sink}, edges={sum(m for _, _, m in self._edges)})"


# ============================================================
# REACHABILITY
# ============================================================

def reach(g: MultiDigraph, sources: Iterable[int], reverse: bool = False) -> FrozenSet[int]:
    """
    Non-sink vertices reachable from sources inside X (paths avoid the sink).

    With reverse=True, the vertices that can reach a source instead.
    """
    seen = {v for v in sources if v != g.sink}
    queue = deque(seen)
    step = g.predecessors if reverse else g.successors
    while queue:
        v = queue.popleft()
        for w, _ in step(v):
            if w != g.sink and w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


# ============================================================
# OPERATIONS
# ============================================================

def sink_strip(g: MultiDigraph) -> MultiDigraph:
    """Drop the sink's outward edges. Sandpile behavior is unchanged."""
    if g.sink_out_degree() == 0:
        return g
    kept = [(t, h, m) for t, h, m in g.edges if t != g.sink]
    return MultiDigraph(g.vertex_count, g.sink, kept, labels=g.labels, origin=g.origin)


def closure(g: MultiDigraph, w: Iterable[int]) -> FrozenSet[int]:
    """cl(W): every non-sink vertex reachable (trivially or not) from W."""
    w = set(w)
    if g.sink in w:
        raise GraphValidationError("closure is defined on non-sink vertices only")
    return reach(g, w)


def induced_subgraph(g: MultiDigraph, keep: Iterable[int]) -> MultiDigraph:
    """
    Subgraph on keep + sink with every outward edge of a kept non-sink vertex.

    keep must be closed under successors (otherwise edges would dangle).
    Vertices are renumbered in index order; origin maps back to g.
    """
    keep = set(keep) | {g.sink}
    order = sorted(keep)
    index = {v: i for i, v in enumerate(order)}
    edges = []
    for tail, head, mult in g.edges:
        if tail == g.sink or tail not in keep:
            continue
        if head not in keep:
            raise GraphValidationError(
                f"vertex set is not closed: edge {g.label(tail)}->{g.label(head)} leaves it"
            )
        edges.append((index[tail], index[head], mult))
    labels = [g.label(v) for v in order]
    return MultiDigraph(len(order), index[g.sink], edges, labels=labels, origin=order)


def iota_subgraph(g: MultiDigraph, s: Iterable[int]) -> MultiDigraph:
    """ι(S): the subgraph induced by cl(S) and the sink."""
    s = set(s)
    if not s:
        raise GraphValidationError("iota_subgraph needs a nonempty vertex set")
    return induced_subgraph(g, closure(g, s))


def is_undirected(g: MultiDigraph) -> bool:
    """
    Classical shape: every edge between non-sink vertices is paired with its
    reverse (same multiplicity) and X is weakly connected.
    """
    x_edges = {(t, h): m for t, h, m in g.edges if g.sink not in (t, h)}
    for (t, h), m in x_edges.items():
        if x_edges.get((h, t)) != m:
            return False
    x = nx.Graph()
    x.add_nodes_from(g.non_sink)
    x.add_edges_from(x_edges)
    return nx.is_connected(x)
