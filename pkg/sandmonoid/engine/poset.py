"""
sandmonoid - ENGINE: Component poset
Cyclic strong components, their reachability order, filters, A(e) and S(e).

The sink belongs to no component. A strong component is cyclic when it has
more than one vertex or its single vertex carries a loop.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from .errors import PreconditionError
from .graph import MultiDigraph, closure, induced_subgraph, reach

logger = logging.getLogger(__name__)


# ============================================================
# TYPES
# ============================================================

def _bits(mask: int) -> FrozenSet[int]:
    return frozenset(j for j in range(mask.bit_length()) if mask >> j & 1)


@dataclass(frozen=True)
class ComponentPoset:
    """
    Cyclic strong components (sorted by minimum vertex) under C <= D iff C -> D.

    up_masks[i] has bit j set iff component i reaches component j (reflexive).
    """
    components: Tuple[FrozenSet[int], ...]
    up_masks: Tuple[int, ...]
    acyclic_vertices: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.components)

    def leq(self, i: int, j: int) -> bool:
        """Component i reaches component j."""
        return bool(self.up_masks[i] >> j & 1)

    def up_set(self, i: int) -> FrozenSet[int]:
        """Components reachable from component i, i included."""
        return _bits(self.up_masks[i])

    def component_of(self) -> Dict[int, int]:
        """vertex -> component index, for cyclic vertices only."""
        return {v: i for i, comp in enumerate(self.components) for v in comp}

    def cyclic_vertices(self) -> FrozenSet[int]:
        """Every vertex lying on some cycle of X."""
        return frozenset().union(*self.components) if self.components else frozenset()

    def names(self, g: MultiDigraph, members: Iterable[int]) -> List[str]:
        """Display names of the given components."""
        return [g.describe(self.components[i]) for i in sorted(members)]


@dataclass(frozen=True)
class Filter:
    """Upward-closed set of component indices. The empty set is a filter."""
    members: FrozenSet[int]

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Size first, then sorted members."""
        return (len(self.members), tuple(sorted(self.members)))

    def vertices(self, poset: ComponentPoset) -> FrozenSet[int]:
        """Union of the member components."""
        return frozenset().union(*(poset.components[i] for i in self.members)) if self.members else frozenset()

    def is_upward_closed(self, poset: ComponentPoset) -> bool:
        """Every member's up-set lies inside the filter."""
        return all(poset.up_set(i) <= self.members for i in self.members)


# ============================================================
# STRONG COMPONENTS
# ============================================================

def cyclic_strong_components(g: MultiDigraph) -> ComponentPoset:
    """
    Cyclic strong components of X and their reachability order.

    The order is read off the condensation of X: each node's up-mask is its
    own bit or'ed with its successors' masks, successors first.
    """
    if g.sink_out_degree():
        raise PreconditionError("strip the sink's outward edges first (sink_strip)")

    x = nx.DiGraph()
    x.add_nodes_from(g.non_sink)
    x.add_edges_from((t, h) for t, h, _ in g.edges if h != g.sink)
    dag = nx.condensation(x)

    cyclic_nodes = []
    acyclic = set()
    for node, members in dag.nodes(data="members"):
        if len(members) > 1 or g.has_loop(next(iter(members))):
            cyclic_nodes.append(node)
        else:
            acyclic.update(members)
    cyclic_nodes.sort(key=lambda node: min(dag.nodes[node]["members"]))
    bit = {node: 1 << i for i, node in enumerate(cyclic_nodes)}

    masks: Dict[int, int] = {}
    for node in reversed(list(nx.topological_sort(dag))):
        mask = bit.get(node, 0)
        for succ in dag.successors(node):
            mask |= masks[succ]
        masks[node] = mask

    components = tuple(frozenset(dag.nodes[node]["members"]) for node in cyclic_nodes)
    logger.debug(f"{len(components)} cyclic components, {len(acyclic)} acyclic vertices")
    return ComponentPoset(components, tuple(masks[node] for node in cyclic_nodes), frozenset(acyclic))


# ============================================================
# FILTERS
# ============================================================

def filters(p: ComponentPoset) -> List[Filter]:
    """
    Every upward-closed subset, sorted by size then members.

    Components are decided in an order where all strict upper bounds come
    first, so a component may join a partial filter only if its up-set is
    already in; every branch is a valid filter.
    """
    order = sorted(range(len(p)), key=lambda i: bin(p.up_masks[i]).count("1"))
    partial: List[int] = [0]
    for i in order:
        strict_up = p.up_masks[i] & ~(1 << i)
        partial = partial + [f | 1 << i for f in partial if f & strict_up == strict_up]
    return sorted((Filter(_bits(f)) for f in partial), key=Filter.sort_key)


def filter_of_support(g: MultiDigraph, p: ComponentPoset, support: Iterable[int]) -> Filter:
    """Components contained in ι(support)."""
    cl = closure(g, support)
    return Filter(frozenset(i for i, comp in enumerate(p.components) if comp <= cl))


# ============================================================
# A(e) AND S(e)
# ============================================================

def a_set(g: MultiDigraph, e_support: Iterable[int], p: ComponentPoset) -> FrozenSet[int]:
    """
    A(e): acyclic vertices outside cl(supp(e)) from which every reachable
    cyclic component lies inside ι(supp(e)).
    """
    cl = closure(g, e_support)
    outside = [comp for comp in p.components if not comp <= cl]
    blocked = reach(g, frozenset().union(*outside), reverse=True) if outside else frozenset()
    return frozenset(v for v in p.acyclic_vertices if v not in cl and v not in blocked)


def s_subgraph(g: MultiDigraph, e_support: Iterable[int], p: ComponentPoset) -> Optional[MultiDigraph]:
    """
    S(e): the subgraph induced by cl(supp(e)), A(e) and the sink.

    Returns None when that is the bare sink (only possible for e = 0).
    """
    e_support = frozenset(e_support)
    keep = closure(g, e_support) | a_set(g, e_support, p)
    if not keep:
        return None
    return induced_subgraph(g, keep)
