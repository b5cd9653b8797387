"""
sandmonoid - FAMILIES
Deterministic graph constructors. Generated graphs put the sink at index 0.

Undirected edges become two directed edges; edges out of the sink are never
emitted.
"""

import logging
import random
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..connectors.formats import read_graph
from ..engine.errors import PreconditionError
from ..engine.graph import MultiDigraph

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).parent / "fixtures"

SINK = 0


def _paired(u: int, v: int, m: int = 1) -> List[Tuple[int, int, int]]:
    edges = []
    if u != SINK:
        edges.append((u, v, m))
    if v != SINK:
        edges.append((v, u, m))
    return edges


def _require(condition: bool, message: str):
    if not condition:
        raise PreconditionError(message)


# ============================================================
# CLASSICAL FAMILIES
# ============================================================

def star_of_cyclic(ks: Sequence[int]) -> MultiDigraph:
    """One vertex per k with k parallel edges to a shared sink; M = G = product of Z_k."""
    _require(len(ks) >= 1 and all(k >= 1 for k in ks), f"star needs parameters >= 1, got {list(ks)}")
    edges = [(i, SINK, k) for i, k in enumerate(ks, start=1)]
    return MultiDigraph(len(ks) + 1, SINK, edges)


def undirected_cycle(n: int) -> MultiDigraph:
    """C_n with vertex 0 as the sink."""
    _require(n >= 3, f"cycle needs n >= 3, got {n}")
    edges = []
    for i in range(n):
        edges.extend(_paired(i, (i + 1) % n))
    return MultiDigraph(n, SINK, edges)


def undirected_path(k: int) -> MultiDigraph:
    """Path 1 - 2 - ... - k, with vertex 1 joined to the sink."""
    _require(k >= 1, f"path needs k >= 1, got {k}")
    edges = [(1, SINK, 1)]
    for i in range(1, k):
        edges.extend(_paired(i, i + 1))
    return MultiDigraph(k + 1, SINK, edges)


# ============================================================
# SINK-DISTANCE-REGULAR FAMILIES
# ============================================================

def iterated_wheel(n: int, d: int) -> MultiDigraph:
    """
    d concentric n-cycles joined by spokes; each vertex of the innermost cycle
    has one edge to the central sink. Ring r (1 = innermost) holds vertices
    1 + (r-1)n .. rn. n = 2 gives a doubled edge per ring.
    """
    _require(n >= 2 and d >= 1, f"wheel needs n >= 2 and d >= 1, got n={n}, d={d}")

    def vertex(r: int, j: int) -> int:
        return 1 + (r - 1) * n + j % n

    edges = []
    for r in range(1, d + 1):
        for j in range(n):
            edges.extend(_paired(vertex(r, j), vertex(r, j + 1)))
            if r < d:
                edges.extend(_paired(vertex(r, j), vertex(r + 1, j)))
    edges.extend((vertex(1, j), SINK, 1) for j in range(n))
    return MultiDigraph(1 + n * d, SINK, edges)


def regular_tree(n: int, d: int) -> MultiDigraph:
    """
    n-regular undirected tree with d levels (root at index 1, breadth-first
    numbering); each leaf gets n - 1 edges to the sink.
    """
    _require(n >= 3 and d >= 2, f"tree needs n >= 3 and d >= 2, got n={n}, d={d}")
    edges = []
    level = [1]
    count = 2
    for depth in range(1, d):
        children_each = n if depth == 1 else n - 1
        nxt = []
        for parent in level:
            for _ in range(children_each):
                edges.extend(_paired(parent, count))
                nxt.append(count)
                count += 1
        level = nxt
    edges.extend((leaf, SINK, n - 1) for leaf in level)
    return MultiDigraph(count, SINK, edges)


def regular_tournament(k: int, r: int, seed: Optional[int] = None) -> MultiDigraph:
    """
    Rotational tournament on 2k + 1 vertices (i beats i+1, ..., i+k mod 2k+1),
    each vertex with r edges to the sink. A seed relabels the vertices by a
    seeded permutation.
    """
    _require(k >= 1 and r >= 1, f"tournament needs k >= 1 and r >= 1, got k={k}, r={r}")
    size = 2 * k + 1
    names = list(range(1, size + 1))
    if seed is not None:
        random.Random(seed).shuffle(names)
    edges = []
    for i in range(size):
        for j in range(1, k + 1):
            edges.append((names[i], names[(i + j) % size], 1))
        edges.append((names[i], SINK, r))
    return MultiDigraph(size + 1, SINK, edges)


# ============================================================
# FIXTURES
# ============================================================

def example_graph() -> MultiDigraph:
    """Fifteen-vertex example with components B, C, D and six idempotents."""
    return read_graph(FIXTURES_DIR / "example.graph")


def layered_graph() -> MultiDigraph:
    """Seven-vertex sink-distance-regular graph with loops at v1 and v2."""
    return read_graph(FIXTURES_DIR / "layered.graph")


# name -> (constructor, parameter names)
FAMILIES: Dict[str, Tuple[Callable[..., MultiDigraph], Tuple[str, ...]]] = {
    "star": (lambda *ks: star_of_cyclic(list(ks)), ("k...",)),
    "cycle": (undirected_cycle, ("n",)),
    "path": (undirected_path, ("k",)),
    "wheel": (iterated_wheel, ("n", "d")),
    "tree": (regular_tree, ("n", "d")),
    "tournament": (regular_tournament, ("k", "r")),
    "example": (example_graph, ()),
    "layered": (layered_graph, ()),
}


def generate(family: str, params: Sequence[int], seed: Optional[int] = None) -> MultiDigraph:
    """Build a family member from integer parameters (CLI `generate`)."""
    if family not in FAMILIES:
        raise PreconditionError(f"unknown family {family!r}, expected one of {sorted(FAMILIES)}")
    build, names = FAMILIES[family]
    if names != ("k...",) and len(params) != len(names):
        raise PreconditionError(f"{family} takes {len(names)} parameters ({' '.join(names)}), got {len(params)}")
    if family == "tournament":
        return build(*params, seed=seed)
    return build(*params)
