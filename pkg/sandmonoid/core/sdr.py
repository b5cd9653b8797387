"""
sandmonoid - CORE: Sink-distance-regular graphs
Distance layers toward the sink, the layer regularity test, and the closed
form of the group identity on graphs that pass it.

Layers: Γ_i = vertices at directed distance i from the sink.
Parameters per layer: a_i (edges inside Γ_i), b_i (to Γ_{i+1}),
c_i (to Γ_{i-1}); b_d = 0.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

import networkx as nx

from ..engine.errors import InvariantError, PreconditionError
from ..engine.graph import MultiDigraph
from ..engine.sandpile import Config, is_stable, oplus

logger = logging.getLogger(__name__)


# ============================================================
# TYPES
# ============================================================

@dataclass(frozen=True)
class SdrProfile:
    """
    Layer parameters of a sink-distance-regular graph.

    Lists are 0-based: a[i - 1] is a_i. b has d - 1 entries; n has d + 1
    entries with n[d] = n_{d+1} = 0.
    """
    d: int
    gamma: Tuple[FrozenSet[int], ...]
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    c: Tuple[int, ...]
    n: Tuple[int, ...]

    def b_at(self, i: int) -> int:
        """b_i, with b_d = 0."""
        return self.b[i - 1] if i < self.d else 0

    def degree(self, i: int) -> int:
        """deg⁺(Γ_i) = a_i + b_i + c_i."""
        return self.a[i - 1] + self.b_at(i) + self.c[i - 1]

    def coefficient(self, i: int) -> int:
        """Grains per Γ_i vertex in the identity: n_i c_i - n_{i+1} b_i."""
        return self.n[i - 1] * self.c[i - 1] - self.n[i] * self.b_at(i)

    def layer_of(self, v: int) -> int:
        """Layer index of v."""
        for i, layer in enumerate(self.gamma, start=1):
            if v in layer:
                return i
        raise KeyError(v)


@dataclass(frozen=True)
class SdrViolation:
    """First vertex breaking a layer condition."""
    vertex: int
    condition: str
    detail: str

    def describe(self, g: MultiDigraph) -> str:
        """Violation as one line with the vertex label."""
        return f"{g.label(self.vertex)}: condition {self.condition}: {self.detail}"


def _floor_coefficients(degrees: List[int], b: List[int], c: List[int]) -> Tuple[int, ...]:
    """n_d = ⌊(deg_d - 1)/c_d⌋, n_i = ⌊(deg_i - 1 + n_{i+1} b_i)/c_i⌋, n_{d+1} = 0."""
    d = len(degrees)
    n = [0] * (d + 1)
    for i in range(d, 0, -1):
        b_i = b[i - 1] if i < d else 0
        n[i - 1] = (degrees[i - 1] - 1 + n[i] * b_i) // c[i - 1]
    return tuple(n)


# ============================================================
# LAYERS
# ============================================================

def distance_partition(g: MultiDigraph) -> List[FrozenSet[int]]:
    """Γ_0 = {sink}, Γ_1, ..., Γ_d by breadth-first search on reversed edges."""
    if g.sink_out_degree():
        raise PreconditionError("strip the sink's outward edges first (sink_strip)")
    reverse = nx.DiGraph()
    reverse.add_nodes_from(range(g.vertex_count))
    reverse.add_edges_from((h, t) for t, h, _ in g.edges)
    dist = nx.single_source_shortest_path_length(reverse, g.sink)
    d = max(dist.values())
    layers = [set() for _ in range(d + 1)]
    for v, i in dist.items():
        layers[i].add(v)
    return [frozenset(layer) for layer in layers]


def _layer_counts(g: MultiDigraph, layer_of: dict, v: int) -> Tuple[dict, dict]:
    """Edge counts by layer offset (-1, 0, +1): outgoing from v, incoming to v."""
    out = {-1: 0, 0: 0, 1: 0}
    into = {-1: 0, 0: 0, 1: 0}
    i = layer_of[v]
    for h, m in g.successors(v):
        out[layer_of[h] - i] += m
    for t, m in g.predecessors(v):
        offset = layer_of[t] - i
        if offset in into:
            into[offset] += m
    return out, into


def check_sdr(g: MultiDigraph) -> Tuple[Optional[SdrProfile], Optional[SdrViolation]]:
    """
    Test whether g is sink-distance-regular.

    Head and tail counts are checked separately, multiplicities summed, loops
    counted on both sides. At Γ_1 only the tail count toward the sink is
    required.

    Returns:
        (profile, None) on success, (None, first violation) otherwise
    """
    if g.sink_out_degree():
        return None, SdrViolation(g.sink, "sink", f"sink has {g.sink_out_degree()} outward edges")

    layers = distance_partition(g)
    d = len(layers) - 1
    layer_of = {v: i for i, layer in enumerate(layers) for v in layer}

    # edges move at most one layer
    for t, h, _ in g.edges:
        if abs(layer_of[h] - layer_of[t]) > 1:
            return None, SdrViolation(
                t, "jump", f"edge to {g.label(h)} jumps from layer {layer_of[t]} to {layer_of[h]}"
            )

    a: List[int] = []
    b: List[int] = []
    c: List[int] = []
    for i in range(1, d + 1):
        members = sorted(layers[i])
        out0, in0 = _layer_counts(g, layer_of, members[0])
        c_i, a_i, b_i = out0[-1], out0[0], out0[1]
        if i < d and b_i < 1:
            return None, SdrViolation(members[0], "upper", f"b_{i} must be positive")
        for v in members:
            out, into = _layer_counts(g, layer_of, v)
            checks = [
                ("lower", f"tails toward layer {i - 1}", out[-1], c_i),
                ("level", "tails inside the layer", out[0], a_i),
                ("level", "heads from inside the layer", into[0], a_i),
                ("upper", f"tails toward layer {i + 1}", out[1], b_i),
                ("upper", f"heads from layer {i + 1}", into[1], b_i),
            ]
            if i > 1:
                checks.insert(1, ("lower", f"heads from layer {i - 1}", into[-1], c_i))
            for condition, what, got, want in checks:
                if got != want:
                    return None, SdrViolation(
                        v, condition, f"{what} is {got}, layer {i} expects {want}"
                    )
        a.append(a_i)
        c.append(c_i)
        if i < d:
            b.append(b_i)

    degrees = [a[i] + (b[i] if i < d - 1 else 0) + c[i] for i in range(d)]
    profile = SdrProfile(
        d=d,
        gamma=tuple(layers[1:]),
        a=tuple(a),
        b=tuple(b),
        c=tuple(c),
        n=_floor_coefficients(degrees, b, c),
    )
    logger.debug(f"SDR profile d={d} a={a} b={b} c={c} n={profile.n}")
    return profile, None


# ============================================================
# CLOSED-FORM IDENTITY
# ============================================================

def layer_config(g: MultiDigraph, profile: SdrProfile, per_layer: List[int]) -> Config:
    """Σ per_layer[i-1]·γ_i."""
    grains = [0] * len(g.non_sink)
    for i, layer in enumerate(profile.gamma, start=1):
        for v in layer:
            grains[g.position(v)] = per_layer[i - 1]
    return Config(tuple(grains))


def sdr_identity(profile: SdrProfile, g: MultiDigraph) -> Config:
    """e = Σ_i (n_i c_i - n_{i+1} b_i) γ_i; checked stable and idempotent."""
    coefficients = [profile.coefficient(i) for i in range(1, profile.d + 1)]
    for i, k in enumerate(coefficients, start=1):
        if not 0 <= k <= profile.degree(i) - 1:
            raise InvariantError(f"layer {i} coefficient {k} outside [0, {profile.degree(i) - 1}]")
        if i < profile.d and k < profile.a[i - 1] + profile.b_at(i):
            raise InvariantError(f"layer {i} coefficient {k} below a_{i} + b_{i}")
    e = layer_config(g, profile, coefficients)
    if not is_stable(g, e) or oplus(g, e, e) != e:
        raise InvariantError(f"closed-form identity {e} is not a stable idempotent")
    return e


def wave_topple(g: MultiDigraph, profile: SdrProfile, x: Config, i: int) -> Config:
    """
    U_i: topple every vertex of Γ_i, then Γ_{i+1}, ..., Γ_d, once each.

    Needs each Γ_i vertex ready to topple and each Γ_j vertex (j > i) holding
    at least deg⁺(Γ_j) - c_j grains. The result is checked against
    x + b_{i-1}γ_{i-1} - c_iγ_i (x - c_1γ_1 when i = 1).
    """
    if not 1 <= i <= profile.d:
        raise PreconditionError(f"layer {i} outside 1..{profile.d}")
    for j in range(i, profile.d + 1):
        need = profile.degree(j) - (0 if j == i else profile.c[j - 1])
        short = [v for v in profile.gamma[j - 1] if x.grains[g.position(v)] < need]
        if short:
            raise PreconditionError(
                f"layer {j} needs {need} grains per vertex, {g.describe(short)} hold less"
            )

    grains = list(x.grains)
    for j in range(i, profile.d + 1):
        for v in sorted(profile.gamma[j - 1]):
            slot = g.position(v)
            if grains[slot] < g.out_degree[v]:
                raise InvariantError(f"toppling {g.label(v)} in layer {j} is not legal")
            grains[slot] -= g.out_degree[v]
            for h, m in g.successors(v):
                if h != g.sink:
                    grains[g.position(h)] += m

    shift = [0] * profile.d
    shift[i - 1] -= profile.c[i - 1]
    if i > 1:
        shift[i - 2] += profile.b_at(i - 1)
    expected = [x.grains[s] + shift[profile.layer_of(v) - 1] for s, v in enumerate(g.non_sink)]
    if grains != expected:
        raise InvariantError(f"wave from layer {i} gave {grains}, closed form gives {expected}")
    return Config(tuple(grains))


def replay_doubling(g: MultiDigraph, profile: SdrProfile, e: Config) -> Config:
    """Apply U_d^{n_d}, then U_{d-1}^{n_{d-1}}, ..., then U_1^{n_1} to e + e."""
    x = e + e
    for i in range(profile.d, 0, -1):
        for _ in range(profile.n[i - 1]):
            x = wave_topple(g, profile, x, i)
    return x


def doubling_topple_counts(profile: SdrProfile, g: MultiDigraph) -> Tuple[int, ...]:
    """Topple counts of e + e -> e: a Γ_j vertex topples n_1 + ... + n_j times."""
    per_layer = []
    total = 0
    for j in range(1, profile.d + 1):
        total += profile.n[j - 1]
        per_layer.append(total)
    return tuple(per_layer[profile.layer_of(v) - 1] for v in g.non_sink)


# ============================================================
# UNDIRECTED INPUT
# ============================================================

def from_undirected(graph: nx.Graph, sink) -> MultiDigraph:
    """
    Pair every undirected edge into two directed edges, pick a sink and drop
    its outward edges. Nodes are renumbered in sorted order; labels keep the
    original names.
    """
    if sink not in graph:
        raise PreconditionError(f"sink {sink!r} is not a node of the graph")
    nodes = sorted(graph.nodes)
    index = {v: k for k, v in enumerate(nodes)}
    s = index[sink]
    edges = []
    for u, v in graph.edges():
        iu, iv = index[u], index[v]
        if iu == iv:
            if iu != s:
                edges.append((iu, iu, 1))
            continue
        if iu != s:
            edges.append((iu, iv, 1))
        if iv != s:
            edges.append((iv, iu, 1))
    return MultiDigraph(len(nodes), s, edges, labels=[str(v) for v in nodes])


def matches_intersection_array(profile: SdrProfile, graph: nx.Graph) -> bool:
    """Compare layer parameters with networkx's intersection array [b_0..b_{d-1}; c_1..c_d]."""
    b, c = nx.intersection_array(graph)
    k = b[0]
    a = [k - (b[i] if i < len(b) else 0) - c[i - 1] for i in range(1, len(c) + 1)]
    return (
        profile.d == len(c)
        and list(profile.c) == list(c)
        and list(profile.b) == list(b[1:])
        and list(profile.a) == a
    )
