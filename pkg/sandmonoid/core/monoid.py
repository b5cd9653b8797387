"""
sandmonoid - CORE: Monoid structure
Exhaustive enumeration of the sandpile monoid, idempotents via filters,
maximal subgroups, and the two-idempotent checks.

Element indices follow a mixed-radix counter over the out-degrees with
vertex 0 most significant, so index 0 is always the zero configuration.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ..engine.errors import InvariantError, PreconditionError, SizeCapError, check_invariant
from ..engine.graph import MultiDigraph, closure, iota_subgraph, is_undirected, sink_strip
from ..engine.poset import (
    ComponentPoset,
    Filter,
    a_set,
    cyclic_strong_components,
    filter_of_support,
    filters,
    s_subgraph,
)
from ..engine.sandpile import (
    Config,
    embed,
    group_identity,
    idempotent_of,
    is_recurrent,
    oplus,
    stabilize,
    stable_count,
    unit,
    zero,
)
from ..engine.settings import Settings

logger = logging.getLogger(__name__)


# ============================================================
# ENUMERATION
# ============================================================

def radix_weights(degrees: Sequence[int]) -> Tuple[int, ...]:
    """Place values of the mixed-radix counter (last slot least significant)."""
    weights = [1] * len(degrees)
    for i in range(len(degrees) - 2, -1, -1):
        weights[i] = weights[i + 1] * degrees[i + 1]
    return tuple(weights)


def config_index(degrees: Sequence[int], c: Config) -> int:
    """Position of c in the enumeration order."""
    return sum(x * w for x, w in zip(c.grains, radix_weights(degrees)))


def stable_configs(g: MultiDigraph) -> List[Config]:
    """All stable configurations in lexicographic order."""
    return [Config(t) for t in itertools.product(*(range(d) for d in g.degrees()))]


@dataclass
class MonoidEnumeration:
    """The whole sandpile monoid of a graph, optionally with its Cayley table."""
    graph: MultiDigraph
    elements: List[Config]
    recurrent_mask: List[bool]
    identity_index: int
    op_table: Optional[np.ndarray] = None
    _index: Dict[Config, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {c: i for i, c in enumerate(self.elements)}

    @property
    def order(self) -> int:
        """|M|."""
        return len(self.elements)

    @property
    def group_order(self) -> int:
        """|G|, the number of recurrent elements."""
        return sum(self.recurrent_mask)

    @property
    def recurrent_indices(self) -> List[int]:
        """Indices of the recurrent elements."""
        return [i for i, r in enumerate(self.recurrent_mask) if r]

    def index(self, c: Config) -> int:
        """Index of a stable configuration."""
        return self._index[c]

    def product(self, i: int, j: int) -> int:
        """Index of elements[i] ⊕ elements[j]."""
        if self.op_table is not None:
            return int(self.op_table[i, j])
        return self._index[oplus(self.graph, self.elements[i], self.elements[j])]

    def require_table(self) -> np.ndarray:
        """The Cayley table, or PreconditionError when it was not built."""
        if self.op_table is None:
            raise PreconditionError("this check needs the Cayley table; enumerate with a larger table cap")
        return self.op_table


def _single_grain_steps(g: MultiDigraph, elements: List[Config], index: Dict[Config, int]) -> np.ndarray:
    """steps[a, v] = index of element a ⊕ 1_v, one column per non-sink slot."""
    units = [unit(g, v) for v in g.non_sink]
    steps = np.empty((len(elements), len(units)), dtype=np.int32)
    for a, c in enumerate(elements):
        for slot, u in enumerate(units):
            steps[a, slot] = index[stabilize(g, c + u).config]
    return steps


def _cayley_table(g: MultiDigraph, elements: List[Config], index: Dict[Config, int]) -> np.ndarray:
    """
    Fill table[:, b] column by column: with v the last nonzero slot of b,
    a ⊕ b = (a ⊕ (b - 1_v)) ⊕ 1_v, and b - 1_v has a smaller index.
    """
    degrees = g.degrees()
    weights = radix_weights(degrees)
    steps = _single_grain_steps(g, elements, index)
    table = np.empty((len(elements), len(elements)), dtype=np.int32)
    table[:, 0] = np.arange(len(elements), dtype=np.int32)
    for b in range(1, len(elements)):
        grains = elements[b].grains
        v = max(i for i, x in enumerate(grains) if x)
        table[:, b] = steps[table[:, b - weights[v]], v]
    return table


def enumerate_monoid(
    g: MultiDigraph,
    settings: Optional[Settings] = None,
    with_table: Optional[bool] = None,
) -> MonoidEnumeration:
    """
    Enumerate M(g) exhaustively.

    Args:
        g: graph
        settings: caps (defaults apply when None)
        with_table: force the Cayley table on (True) or off (False);
            None builds it whenever |M| is within cap_table

    Returns:
        MonoidEnumeration with recurrent mask and optional op table

    Raises:
        SizeCapError: |M| over cap_elements, or a forced table over cap_table
    """
    settings = settings or Settings()
    size = stable_count(g.degrees())
    if size > settings.cap_elements:
        raise SizeCapError("product of out-degrees", size, settings.cap_elements)
    if with_table and size > settings.cap_table:
        raise SizeCapError("product of out-degrees (Cayley table)", size, settings.cap_table)
    build_table = size <= settings.cap_table if with_table is None else with_table

    elements = stable_configs(g)
    index = {c: i for i, c in enumerate(elements)}
    e = group_identity(g)
    mask = [is_recurrent(g, c, e) for c in elements]
    table = _cayley_table(g, elements, index) if build_table else None

    logger.info(f"Enumerated |M|={size}, |G|={sum(mask)}, table={'yes' if table is not None else 'no'}")
    return MonoidEnumeration(g, elements, mask, index[e], table, index)


def recurrent_elements(g: MultiDigraph, settings: Optional[Settings] = None) -> List[Config]:
    """
    The sandpile group, grown from the group identity by single-grain additions.

    Every recurrent configuration is e ⊕ b for some b, and b is a sum of
    single grains, so breadth-first search over 1_v steps reaches all of them.
    """
    settings = settings or Settings()
    units = [unit(g, v) for v in g.non_sink]
    start = group_identity(g)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            for u in units:
                d = stabilize(g, c + u).config
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
        if len(seen) > settings.cap_elements:
            raise SizeCapError("sandpile group size", len(seen), settings.cap_elements)
        frontier = nxt
    return sorted(seen, key=lambda c: c.grains)


# ============================================================
# TABLE QUERIES
# ============================================================

def accessible(enum: MonoidEnumeration, a: int, b: int) -> bool:
    """b is accessible from a: a ⊕ c = b for some c."""
    return bool((enum.require_table()[a] == b).any())


def mutually_accessible(enum: MonoidEnumeration, a: int, b: int) -> bool:
    """a and b are accessible from each other."""
    return accessible(enum, a, b) and accessible(enum, b, a)


def mutual_accessibility_class(enum: MonoidEnumeration, e: int) -> List[int]:
    """Indices mutually accessible with e (the maximal subgroup at e when e is idempotent)."""
    table = enum.require_table()
    reachable = np.unique(table[e])
    back = (table[reachable] == e).any(axis=1)
    return sorted(int(i) for i in reachable[back])


def idempotent_table_search(enum: MonoidEnumeration) -> List[int]:
    """Indices i with i ⊕ i = i, found directly on the table diagonal."""
    table = enum.require_table()
    return [int(i) for i in np.nonzero(np.diag(table) == np.arange(enum.order))[0]]


def _prime_factors(n: int) -> List[int]:
    primes = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    return primes


def element_orders(enum: MonoidEnumeration) -> Dict[int, int]:
    """Order of every group element, by iterated ⊕ inside the table."""
    table = enum.require_table()
    group = np.array(enum.recurrent_indices, dtype=np.int64)
    orders = np.zeros(len(group), dtype=np.int64)
    power = group.copy()
    k = 1
    while (orders == 0).any():
        hit = (power == enum.identity_index) & (orders == 0)
        orders[hit] = k
        power = table[power, group]
        k += 1
        check_invariant(k <= len(group) + 1, "element order exceeds group order")
    return {int(i): int(o) for i, o in zip(group, orders)}


def invariant_factors(enum: MonoidEnumeration) -> List[int]:
    """
    Invariant factors d1 | d2 | ... of the sandpile group.

    For each prime p, the number of elements of order dividing p^k pins down
    how many cyclic p-factors have exponent at least k. The trivial group
    gives an empty list.
    """
    orders = list(element_orders(enum).values())
    size = len(orders)
    exponents: Dict[int, List[int]] = {}
    for p in _prime_factors(size):
        at_least = []
        prev = 1
        k = 1
        while True:
            count = sum(1 for o in orders if (p ** k) % o == 0)
            if count == prev:
                break
            ratio = count // prev
            r = 0
            while ratio > 1:
                ratio //= p
                r += 1
            at_least.append(r)
            prev = count
            k += 1
        # at_least[k-1] = number of cyclic factors with exponent >= k
        exps = []
        for k, r in enumerate(at_least, start=1):
            nxt = at_least[k] if k < len(at_least) else 0
            exps.extend([k] * (r - nxt))
        exponents[p] = sorted(exps, reverse=True)

    width = max((len(e) for e in exponents.values()), default=0)
    factors = []
    for j in range(width):
        d = 1
        for p, exps in exponents.items():
            if j < len(exps):
                d *= p ** exps[j]
        factors.append(d)
    factors.sort()
    check_invariant(math.prod(factors) == size,
                    f"invariant factors {factors} do not multiply to |G|={size}")
    return factors


# ============================================================
# IDEMPOTENTS
# ============================================================

@dataclass
class IdempotentRecord:
    """One idempotent per filter, with the data describing its maximal subgroup."""
    config: Config
    filter: Filter
    iota_support: FrozenSet[int]
    a_set: FrozenSet[int]
    s_graph: Optional[MultiDigraph]
    max_subgroup_order: int


def idempotents(g: MultiDigraph, settings: Optional[Settings] = None) -> List[IdempotentRecord]:
    """
    Every idempotent, one per filter of the cyclic-component poset.

    A nonempty filter q gives the group identity of ι(∪q), zero-extended.
    Does not enumerate the monoid.
    """
    x = sink_strip(g)
    p = cyclic_strong_components(x)
    records = []
    for f in filters(p):
        if f.members:
            y = iota_subgraph(x, f.vertices(p))
            e = embed(y, group_identity(y), x)
        else:
            e = zero(x)

        support = e.support(x)
        check_invariant(filter_of_support(x, p, support) == f,
                        f"idempotent {e} does not correspond to filter {sorted(f.members)}")
        check_invariant(oplus(x, e, e) == e, f"{e} is not idempotent")

        a = a_set(x, support, p)
        rec = IdempotentRecord(
            config=e,
            filter=f,
            iota_support=closure(x, support),
            a_set=a,
            s_graph=s_subgraph(x, support, p),
            max_subgroup_order=0,
        )
        rec.max_subgroup_order = maximal_subgroup_order(x, rec, settings)
        records.append(rec)
    logger.info(f"{len(records)} idempotents from {len(p)} cyclic components")
    return records


def maximal_subgroup_order(g: MultiDigraph, rec: IdempotentRecord, settings: Optional[Settings] = None) -> int:
    """|G_e| = |G(ι(supp e))| times the product of deg⁺ over A(e)."""
    a_product = stable_count([g.out_degree[v] for v in rec.a_set])
    if rec.config.is_zero():
        return a_product
    y = iota_subgraph(g, rec.config.support(g))
    return len(recurrent_elements(y, settings)) * a_product


def maximal_subgroup(g: MultiDigraph, rec: IdempotentRecord, settings: Optional[Settings] = None) -> List[Config]:
    """G_e as configurations of g: the sandpile group of S(e), zero-extended."""
    settings = settings or Settings()
    x = sink_strip(g)
    s = rec.s_graph
    if s is None:
        return [zero(x)]
    if rec.config.is_zero():
        size = stable_count(s.degrees())
        if size > settings.cap_elements:
            raise SizeCapError("product of out-degrees on S(0)", size, settings.cap_elements)
        members = [embed(s, c, x) for c in stable_configs(s)]
    else:
        members = [embed(s, c, x) for c in recurrent_elements(s, settings)]
    check_invariant(rec.config in members, f"idempotent {rec.config} missing from its own subgroup")
    return sorted(members, key=lambda c: c.grains)


def alternate_subgroup_build(g: MultiDigraph, rec: IdempotentRecord, settings: Optional[Settings] = None) -> List[Config]:
    """G_e as {h ⊕ j : h recurrent on ι(supp e), j stable with supp(j) ⊆ A(e)}."""
    if rec.config.is_zero():
        raise PreconditionError("alternate_subgroup_build needs a nonzero idempotent")
    x = sink_strip(g)
    y = iota_subgraph(x, rec.config.support(x))
    group = [embed(y, h, x) for h in recurrent_elements(y, settings)]

    a_vertices = sorted(rec.a_set)
    fillings = []
    for counts in itertools.product(*(range(x.out_degree[v]) for v in a_vertices)):
        grains = [0] * len(x.non_sink)
        for v, k in zip(a_vertices, counts):
            grains[x.position(v)] = k
        fillings.append(Config(tuple(grains)))

    members = {oplus(x, h, j) for h in group for j in fillings}
    return sorted(members, key=lambda c: c.grains)


# ============================================================
# TWO-IDEMPOTENT CHECKS
# ============================================================

def classical_idempotent_count(g: MultiDigraph) -> int:
    """1 when X is a single loopless vertex, else 2. Undirected graphs only."""
    x = sink_strip(g)
    if not is_undirected(x):
        raise PreconditionError("classical_idempotent_count needs an undirected graph with X connected")
    only = x.non_sink[0]
    count = 1 if len(x.non_sink) == 1 and not x.has_loop(only) else 2
    found = len(filters(cyclic_strong_components(x)))
    check_invariant(found == count, f"predicted {count} idempotents, filters give {found}")
    return count


def two_idempotent_recurrence_check(g: MultiDigraph, settings: Optional[Settings] = None) -> bool:
    """
    For every u: (u ⊕ a = u for some a ≠ 0) iff u is recurrent.

    Requires exactly two idempotents and |M| within the table cap.
    """
    count = len(filters(cyclic_strong_components(sink_strip(g))))
    if count != 2:
        raise PreconditionError(f"graph has {count} idempotents, the check needs exactly 2")
    enum = enumerate_monoid(g, settings, with_table=True)
    table = enum.op_table
    fixed = table == np.arange(enum.order)[:, None]
    fixed[:, 0] = False
    absorbs = fixed.any(axis=1)
    holds = bool(np.array_equal(absorbs, np.array(enum.recurrent_mask)))
    if not holds:
        logger.warning("two-idempotent recurrence equivalence failed")
    return holds


def eventually_recurrent_check(g: MultiDigraph, a: Config, p: Optional[ComponentPoset] = None) -> bool:
    """
    True iff ι(supp a) contains every cycle of X, which is exactly when
    repeated addition of a reaches a recurrent configuration.
    """
    x = sink_strip(g)
    p = p or cyclic_strong_components(x)
    predicate = p.cyclic_vertices() <= closure(x, a.support(x))
    dynamic = is_recurrent(x, idempotent_of(x, a))
    if predicate != dynamic:
        raise InvariantError(f"eventual recurrence of {a}: support test says {predicate}, dynamics say {dynamic}")
    return predicate
