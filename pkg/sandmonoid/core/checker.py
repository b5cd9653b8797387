"""
sandmonoid - CORE: Monoid checker
Finite commutative monoids given by Cayley table, and necessary conditions
for being the sandpile monoid of some graph.

None of the tests here is sufficient. A table that passes them all gets
"no known obstruction", never "realizable".
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..engine.errors import PreconditionError, TableFormatError

logger = logging.getLogger(__name__)

# Lattice verdicts
DISTRIBUTIVE = "distributive"
NOT_DISTRIBUTIVE = "not distributive"
NOT_A_LATTICE = "not a lattice"


# ============================================================
# TABLE
# ============================================================

@dataclass
class MonoidTable:
    """order x order table of element indices, with an explicit identity."""
    order: int
    table: np.ndarray
    identity: int

    def __post_init__(self):
        table = np.asarray(self.table)
        if self.order < 1:
            raise TableFormatError(f"order must be positive, got {self.order}")
        if table.shape != (self.order, self.order):
            raise TableFormatError(f"table shape {table.shape} does not match order {self.order}")
        if not np.issubdtype(table.dtype, np.integer):
            raise TableFormatError("table entries must be integers")
        if table.size and (table.min() < 0 or table.max() >= self.order):
            raise TableFormatError(f"table entries must lie in 0..{self.order - 1}")
        if not 0 <= self.identity < self.order:
            raise TableFormatError(f"identity {self.identity} out of range")
        self.table = table.astype(np.int64)

    def op(self, i: int, j: int) -> int:
        """i + j."""
        return int(self.table[i, j])

    def idempotents(self) -> List[int]:
        """Indices i with i + i = i."""
        return [int(i) for i in np.nonzero(np.diag(self.table) == np.arange(self.order))[0]]


@dataclass
class TableCheck:
    """Outcome of validate_table. Falsy when a law fails; witness names the first offending indices."""
    ok: bool
    law: Optional[str] = None
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        """One-line summary."""
        if self.ok:
            return "valid commutative monoid"
        return f"{self.law} fails at {self.witness}"


def validate_table(t: MonoidTable) -> TableCheck:
    """Commutativity, two-sided identity, then associativity over all triples."""
    table = t.table
    n = t.order

    bad = np.argwhere(table != table.T)
    if len(bad):
        return TableCheck(False, "commutativity", tuple(int(x) for x in bad[0]))

    ids = np.arange(n)
    bad = np.nonzero((table[t.identity] != ids) | (table[:, t.identity] != ids))[0]
    if len(bad):
        return TableCheck(False, "identity", (int(bad[0]),))

    for i in range(n):
        # left[j, k] = (i+j)+k, right[j, k] = i+(j+k)
        left = table[table[i]]
        right = table[i][table]
        bad = np.argwhere(left != right)
        if len(bad):
            j, k = (int(x) for x in bad[0])
            return TableCheck(False, "associativity", (i, j, k))
    return TableCheck(True)


# ============================================================
# OBSTRUCTIONS
# ============================================================

def u_plus_a_obstruction(t: MonoidTable) -> Optional[Tuple[int, int, int]]:
    """
    First (u, a, k) in lexicographic order with u+a = u, a != 0 and a+k = 0.

    A witness rules out every sandpile monoid: adding an invertible nonzero
    element can never fix a configuration.
    """
    table = t.table
    ids = np.arange(t.order)
    invertible = (table == t.identity).any(axis=1) & (ids != t.identity)
    fixes = (table == ids[:, None]) & invertible[None, :]
    hits = np.argwhere(fixes)
    if not len(hits):
        return None
    u, a = (int(x) for x in hits[0])
    k = int(np.argmax(table[a] == t.identity))
    return (u, a, k)


def idempotent_lattice(t: MonoidTable) -> Tuple[List[int], Optional[np.ndarray], np.ndarray]:
    """
    Idempotents under e <= f iff e+f = e, with their join table.

    Returns (idempotents, join, meet) over positions in the idempotent list;
    join is None when some pair has no least upper bound.
    """
    es = t.idempotents()
    m = len(es)
    sub = t.table[np.ix_(es, es)]
    position = np.full(t.order, -1, dtype=np.int64)
    position[es] = np.arange(m)
    meet = position[sub]
    leq = sub == np.array(es)[:, None]

    join = np.empty((m, m), dtype=np.int64)
    for x in range(m):
        for y in range(m):
            upper = [z for z in range(m) if leq[x, z] and leq[y, z]]
            least = [z for z in upper if all(leq[z, w] for w in upper)]
            if not least:
                return es, None, meet
            join[x, y] = least[0]
    return es, join, meet


def idempotent_lattice_distributive(t: MonoidTable) -> str:
    """DISTRIBUTIVE, NOT_DISTRIBUTIVE or NOT_A_LATTICE for the idempotents of t."""
    es, join, meet = idempotent_lattice(t)
    if join is None:
        return NOT_A_LATTICE
    m = len(es)
    for x in range(m):
        # x ∧ (y ∨ z) against (x ∧ y) ∨ (x ∧ z), all y, z at once
        left = meet[x][join]
        right = join[meet[x][:, None], meet[x][None, :]]
        if (left != right).any():
            return NOT_DISTRIBUTIVE
    return DISTRIBUTIVE


def is_power_of_two(n: int) -> bool:
    """n = 2^k for some k >= 0."""
    return n > 0 and n & (n - 1) == 0


@dataclass
class RealizabilityReport:
    order: int
    idempotent_count: int
    fully_idempotent: bool
    witness: Optional[Tuple[int, int, int]]
    lattice: str
    obstructions: List[str] = field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        """Some necessary condition failed."""
        return bool(self.obstructions)

    @property
    def verdict(self) -> str:
        """Either "obstructed (...)" or "no known obstruction"."""
        if self.obstructions:
            return f"obstructed ({'; '.join(self.obstructions)})"
        return "no known obstruction"


def realizability_report(t: MonoidTable) -> RealizabilityReport:
    """
    Run every known necessary condition on a valid table.

    - order must factor into out-degrees; for a monoid where every element is
      idempotent each out-degree is at most 2, so the order is a power of 2
    - no (u, a, k) witness
    - distributive lattice of idempotents
    """
    check = validate_table(t)
    if not check:
        raise PreconditionError(f"not a commutative monoid: {check.describe()}")

    es = t.idempotents()
    fully = len(es) == t.order
    witness = u_plus_a_obstruction(t)
    lattice = idempotent_lattice_distributive(t)

    obstructions = []
    if fully and not is_power_of_two(t.order):
        obstructions.append(
            f"every element is idempotent, so out-degrees are at most 2, but order {t.order} is not a power of 2"
        )
    if witness is not None:
        u, a, k = witness
        obstructions.append(f"u+a=u with a invertible: u={u}, a={a}, k={k}")
    if lattice != DISTRIBUTIVE:
        obstructions.append(f"idempotents: {lattice}")

    report = RealizabilityReport(t.order, len(es), fully, witness, lattice, obstructions)
    logger.info(f"Realizability of order-{t.order} table: {report.verdict}")
    return report


# ============================================================
# GENERATORS
# ============================================================

def make_chain_monoid(p: int) -> MonoidTable:
    """0 < 1 < ... < p-1 under min; the top p-1 is the identity."""
    if p < 1:
        raise PreconditionError(f"chain length must be positive, got {p}")
    ids = np.arange(p)
    return MonoidTable(p, np.minimum(ids[:, None], ids[None, :]), p - 1)


def make_group_plus_infinity(n: int) -> MonoidTable:
    """Z_{n-1} on 0..n-2 plus an absorbing element n-1; identity 0."""
    if n < 3:
        raise PreconditionError(f"group-plus-infinity needs n > 2, got {n}")
    ids = np.arange(n)
    table = (ids[:, None] + ids[None, :]) % (n - 1)
    table[n - 1, :] = n - 1
    table[:, n - 1] = n - 1
    return MonoidTable(n, table, 0)


def make_cyclic_group(n: int) -> MonoidTable:
    """Z_n under addition mod n."""
    if n < 1:
        raise PreconditionError(f"group order must be positive, got {n}")
    ids = np.arange(n)
    return MonoidTable(n, (ids[:, None] + ids[None, :]) % n, 0)


def make_lattice_monoid(leq: Sequence[Sequence[bool]]) -> MonoidTable:
    """
    A finite lattice as a monoid under meet, identity at the top.

    Args:
        leq: leq[x][y] is True iff x <= y; must be a partial order with
            all meets and a top element
    """
    rel = np.asarray(leq, dtype=bool)
    m = rel.shape[0]
    if rel.shape != (m, m) or not rel.diagonal().all():
        raise PreconditionError("order relation must be a reflexive square matrix")
    tops = [x for x in range(m) if rel[:, x].all()]
    if not tops:
        raise PreconditionError("lattice has no top element")

    table = np.empty((m, m), dtype=np.int64)
    for x in range(m):
        for y in range(m):
            lower = [z for z in range(m) if rel[z, x] and rel[z, y]]
            greatest = [z for z in lower if all(rel[w, z] for w in lower)]
            if not greatest:
                raise PreconditionError(f"elements {x} and {y} have no meet")
            table[x, y] = greatest[0]
    return MonoidTable(m, table, tops[0])


def sandpile_table(enum) -> MonoidTable:
    """Cayley table of an enumerated sandpile monoid; element 0 is the zero config."""
    return MonoidTable(enum.order, enum.require_table(), 0)
