"""
sandmonoid - ENGINE: Sandpile dynamics
Configurations, toppling, the monoid operation, MAX, the group identity.

A Config holds one grain count per non-sink vertex, in vertex-index order
(slot i <-> g.non_sink[i]). Grain counts are checked against the signed
64-bit range; exceeding it raises GrainOverflowError, never wraps.
"""

import heapq
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, GrainOverflowError, InvariantError, PreconditionError
from .graph import MultiDigraph, reach
from .poset import ComponentPoset

logger = logging.getLogger(__name__)

INT64_MAX = int(np.iinfo(np.int64).max)

POLICIES = ("fifo", "priority", "parallel")


# ============================================================
# CONFIG
# ============================================================

@dataclass(frozen=True)
class Config:
    """Grain counts per non-sink vertex. Stable or not; never negative."""
    grains: Tuple[int, ...]

    def __post_init__(self):
        grains = tuple(int(x) for x in self.grains)
        bad = [x for x in grains if x < 0 or x > INT64_MAX]
        if bad:
            raise ConfigError(f"grain counts must lie in [0, 2^63-1], got {bad[0]}")
        object.__setattr__(self, "grains", grains)

    def __len__(self) -> int:
        return len(self.grains)

    def __add__(self, other: "Config") -> "Config":
        if len(other) != len(self):
            raise ConfigError(f"cannot add configs of length {len(self)} and {len(other)}")
        total = tuple(a + b for a, b in zip(self.grains, other.grains))
        if any(x > INT64_MAX for x in total):
            raise GrainOverflowError("pointwise sum exceeds 64-bit grain range")
        return Config(total)

    def __sub__(self, other: "Config") -> "Config":
        if len(other) != len(self):
            raise ConfigError(f"cannot subtract configs of length {len(self)} and {len(other)}")
        return Config(tuple(a - b for a, b in zip(self.grains, other.grains)))

    def is_zero(self) -> bool:
        """No grains anywhere."""
        return not any(self.grains)

    def support(self, g: MultiDigraph) -> FrozenSet[int]:
        """supp(m) as graph vertices."""
        return frozenset(v for v, x in zip(g.non_sink, self.grains) if x)

    def leq(self, other: "Config") -> bool:
        """Pointwise <=."""
        return all(a <= b for a, b in zip(self.grains, other.grains))

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.grains)


class Avalanche(NamedTuple):
    config: Config
    topple_counts: Tuple[int, ...]


def zero(g: MultiDigraph) -> Config:
    """The empty configuration."""
    return Config((0,) * len(g.non_sink))


def unit(g: MultiDigraph, v: int) -> Config:
    """1_v: one grain on v."""
    grains = [0] * len(g.non_sink)
    grains[g.position(v)] = 1
    return Config(tuple(grains))


def from_mapping(g: MultiDigraph, grains_by_vertex: dict) -> Config:
    """Config from {vertex or label: grains}; absent vertices get 0."""
    grains = [0] * len(g.non_sink)
    for key, count in grains_by_vertex.items():
        v = g.vertex_by_label(key) if isinstance(key, str) else key
        grains[g.position(v)] = count
    return Config(tuple(grains))


def check_config(g: MultiDigraph, c: Config, stable: bool = False):
    """Raise ConfigError on a slot-count mismatch, or when stable is required and c is not."""
    if len(c) != len(g.non_sink):
        raise ConfigError(f"config has {len(c)} slots, graph has {len(g.non_sink)} non-sink vertices")
    if stable and not is_stable(g, c):
        raise ConfigError(f"config {c} is not stable")


def is_stable(g: MultiDigraph, c: Config) -> bool:
    """Every vertex holds fewer grains than its out-degree."""
    return all(x < d for x, d in zip(c.grains, g.degrees()))


# ============================================================
# TOPPLING
# ============================================================

@lru_cache(maxsize=256)
def _topple_plan(g: MultiDigraph) -> Tuple[Tuple[int, ...], Tuple[Tuple[Tuple[int, int], ...], ...]]:
    """Per slot: out-degree and (slot, multiplicity) of non-sink heads."""
    degrees = g.degrees()
    heads = tuple(
        tuple((g.position(h), m) for h, m in g.successors(v) if h != g.sink)
        for v in g.non_sink
    )
    return degrees, heads


def _stabilize_fifo(degrees, heads, grains: List[int], counts: List[int]):
    n = len(grains)
    queued = [grains[i] >= degrees[i] for i in range(n)]
    queue = deque(i for i in range(n) if queued[i])
    while queue:
        i = queue.popleft()
        queued[i] = False
        k = grains[i] // degrees[i]
        if not k:
            continue
        grains[i] -= k * degrees[i]
        counts[i] += k
        for j, m in heads[i]:
            grains[j] += k * m
            if grains[j] > INT64_MAX:
                raise GrainOverflowError(f"slot {j} exceeds 64-bit grain range during toppling")
            if not queued[j] and grains[j] >= degrees[j]:
                queued[j] = True
                queue.append(j)


def _stabilize_priority(degrees, heads, grains: List[int], counts: List[int]):
    heap = [i for i in range(len(grains)) if grains[i] >= degrees[i]]
    heapq.heapify(heap)
    in_heap = set(heap)
    while heap:
        i = heapq.heappop(heap)
        in_heap.discard(i)
        if grains[i] < degrees[i]:
            continue
        grains[i] -= degrees[i]
        counts[i] += 1
        for j, m in heads[i]:
            grains[j] += m
            if grains[j] > INT64_MAX:
                raise GrainOverflowError(f"slot {j} exceeds 64-bit grain range during toppling")
        for j in [i] + [j for j, _ in heads[i]]:
            if j not in in_heap and grains[j] >= degrees[j]:
                in_heap.add(j)
                heapq.heappush(heap, j)


def _stabilize_parallel(degrees, heads, grains: List[int], counts: List[int]):
    """Every unstable vertex topples floor(grains/deg) times per round (numpy scatter-add)."""
    deg = np.array(degrees, dtype=np.int64)
    tails = np.array([i for i, hs in enumerate(heads) for _ in hs], dtype=np.int64)
    dests = np.array([j for hs in heads for j, _ in hs], dtype=np.int64)
    mults = np.array([m for hs in heads for _, m in hs], dtype=np.int64)
    in_weight = np.zeros(len(grains), dtype=np.int64)
    np.add.at(in_weight, dests, mults)
    max_in = int(in_weight.max()) if len(in_weight) else 0

    state = np.array(grains, dtype=np.int64)
    total = np.zeros(len(grains), dtype=np.int64)
    while True:
        k = state // deg
        if not k.any():
            break
        if int(k.max()) * max_in > INT64_MAX - int(state.max()):
            raise GrainOverflowError("grain counts exceed 64-bit range during parallel toppling")
        total += k
        state -= k * deg
        np.add.at(state, dests, k[tails] * mults)
    grains[:] = [int(x) for x in state]
    counts[:] = [int(x) for x in total]


_POLICY_FNS = {
    "fifo": _stabilize_fifo,
    "priority": _stabilize_priority,
    "parallel": _stabilize_parallel,
}


def stabilize(g: MultiDigraph, c: Config, policy: str = "fifo") -> Avalanche:
    """
    Topple until stable.

    Args:
        g: graph
        c: configuration, possibly unstable
        policy: "fifo" (batch topples per dequeue), "priority" (lowest index
            first, one topple at a time) or "parallel" (numpy rounds)

    Returns:
        Avalanche(config, topple_counts); both are independent of policy
    """
    check_config(g, c)
    if policy not in _POLICY_FNS:
        raise PreconditionError(f"unknown toppling policy {policy!r}, expected one of {POLICIES}")
    degrees, heads = _topple_plan(g)
    grains = list(c.grains)
    counts = [0] * len(grains)
    _POLICY_FNS[policy](degrees, heads, grains, counts)
    return Avalanche(Config(tuple(grains)), tuple(counts))


def oplus(g: MultiDigraph, a: Config, b: Config) -> Config:
    """a ⊕ b: pointwise sum, then stabilize."""
    check_config(g, a, stable=True)
    check_config(g, b, stable=True)
    return stabilize(g, a + b).config


def max_config(g: MultiDigraph) -> Config:
    """MAX: deg⁺(v) - 1 grains everywhere."""
    return Config(tuple(d - 1 for d in g.degrees()))


@lru_cache(maxsize=256)
def group_identity(g: MultiDigraph) -> Config:
    """e = [MAX - (MAX ⊕ MAX)] ⊕ MAX, the identity of the sandpile group."""
    top = max_config(g)
    doubled = oplus(g, top, top)
    if not doubled.leq(top):
        raise InvariantError(f"MAX ⊕ MAX = {doubled} is not below MAX = {top}")
    identity = stabilize(g, (top - doubled) + top).config
    logger.debug(f"group identity on {g!r}: {identity}")
    return identity


def is_recurrent(g: MultiDigraph, a: Config, e: Optional[Config] = None) -> bool:
    """a is recurrent iff a ⊕ e = a."""
    if e is None:
        e = group_identity(g)
    return oplus(g, a, e) == a


def idempotent_of(g: MultiDigraph, a: Config) -> Config:
    """e_a: the idempotent in the sequence a, a⊕a, a⊕a⊕a, ..."""
    check_config(g, a, stable=True)
    bound = 1
    for d in g.degrees():
        bound *= d
    b = a
    steps = 0
    while True:
        doubled = oplus(g, b, b)
        if doubled == b:
            return b
        b = oplus(g, b, a)
        steps += 1
        if steps > bound:
            raise InvariantError(f"no idempotent among the first {bound} multiples of {a}")


def cycle_reaching_vertices(g: MultiDigraph, p: ComponentPoset) -> FrozenSet[int]:
    """Vertices from which some cycle of X is reachable."""
    return reach(g, p.cyclic_vertices(), reverse=True)


def can_access_zero(g: MultiDigraph, a: Config, p: ComponentPoset) -> bool:
    """0 is accessible from a iff no grain sits on a vertex that reaches a cycle."""
    return not (a.support(g) & cycle_reaching_vertices(g, p))


# ============================================================
# SUBGRAPH EMBEDDING
# ============================================================

def embed(sub: MultiDigraph, c: Config, parent: MultiDigraph) -> Config:
    """Zero-extend a config on an induced subgraph to its parent graph."""
    if sub.origin is None:
        raise PreconditionError("embed needs an induced subgraph (origin is unset)")
    check_config(sub, c)
    grains = [0] * len(parent.non_sink)
    for v, x in zip(sub.non_sink, c.grains):
        grains[parent.position(sub.origin[v])] = x
    return Config(tuple(grains))


def restrict(parent: MultiDigraph, c: Config, sub: MultiDigraph) -> Config:
    """Read a parent config on the subgraph's vertices."""
    if sub.origin is None:
        raise PreconditionError("restrict needs an induced subgraph (origin is unset)")
    return Config(tuple(c.grains[parent.position(sub.origin[v])] for v in sub.non_sink))


def stable_count(degrees: Sequence[int]) -> int:
    """|M| = product of out-degrees."""
    total = 1
    for d in degrees:
        total *= d
    return total

