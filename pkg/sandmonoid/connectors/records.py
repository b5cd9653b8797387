"""
sandmonoid - CONNECTORS: Records
Machine-readable output for `--format records`: one JSON object per line.

Every record carries a `kind` field. Vertex sets are lists of labels
(vertex indices as strings when the graph has no labels). Configurations
are grain lists in vertex-index order, sink omitted.
"""

from typing import List, Optional

from pydantic import BaseModel, Field

from ..core.checker import RealizabilityReport
from ..core.monoid import IdempotentRecord, MonoidEnumeration
from ..core.sdr import SdrProfile
from ..engine.graph import MultiDigraph
from ..engine.poset import ComponentPoset
from ..engine.sandpile import Avalanche, Config


# ============================================================
# SCHEMAS
# ============================================================

class Record(BaseModel):
    kind: str

    def to_line(self) -> str:
        """One JSON line."""
        return self.model_dump_json()


class IdentityRecord(Record):
    kind: str = "identity"
    config: List[int]
    sdr: Optional[str] = None  # "agree", "disagree", "not sdr" or None when not requested


class IdempotentRecordModel(Record):
    kind: str = "idempotent"
    filter: List[List[str]] = Field(description="cyclic strong components in the filter")
    config: List[int]
    support: List[str]
    iota_support: List[str]
    a_set: List[str]
    s_vertices: List[str] = Field(description="non-sink vertices of S(e); empty for the bare sink")
    subgroup_order: int


class MonoidSummaryRecord(Record):
    kind: str = "monoid"
    order: int
    group_order: int
    recurrent_fraction: float
    identity: List[int]
    invariant_factors: Optional[List[int]] = None
    table: Optional[List[List[int]]] = Field(default=None, description="Cayley table, present when --table-out is given")


class RealizabilityRecord(Record):
    kind: str = "realizability"
    order: int
    verdict: str
    obstructed: bool
    witness: Optional[List[int]] = None
    lattice: str
    idempotent_count: int
    fully_idempotent: bool


class StabilizeRecord(Record):
    kind: str = "stabilize"
    config: List[int]
    topple_counts: List[int]


class SdrRecord(Record):
    kind: str = "sdr"
    d: int
    a: List[int]
    b: List[int]
    c: List[int]
    n: List[int]
    layers: List[List[str]]


class ErrorRecord(Record):
    kind: str = "error"
    error: str
    violations: List[str]
    exit_code: int


# ============================================================
# BUILDERS
# ============================================================

def _labels(g: MultiDigraph, vertices) -> List[str]:
    return [g.label(v) for v in sorted(vertices)]


def identity_record(e: Config, sdr: Optional[str] = None) -> IdentityRecord:
    """Record for `identity`."""
    return IdentityRecord(config=list(e.grains), sdr=sdr)


def idempotent_record(g: MultiDigraph, p: ComponentPoset, rec: IdempotentRecord) -> IdempotentRecordModel:
    """Record for one idempotent, vertex sets as labels."""
    s = rec.s_graph
    s_vertices = [] if s is None else sorted(s.origin[v] for v in s.non_sink)
    return IdempotentRecordModel(
        filter=[_labels(g, p.components[i]) for i in sorted(rec.filter.members)],
        config=list(rec.config.grains),
        support=_labels(g, rec.config.support(g)),
        iota_support=_labels(g, rec.iota_support),
        a_set=_labels(g, rec.a_set),
        s_vertices=_labels(g, s_vertices),
        subgroup_order=rec.max_subgroup_order,
    )


def monoid_record(enum: MonoidEnumeration, factors: Optional[List[int]], with_table: bool = False) -> MonoidSummaryRecord:
    """Record for `monoid`; the table is included only when asked for."""
    table = enum.op_table.tolist() if with_table and enum.op_table is not None else None
    return MonoidSummaryRecord(
        order=enum.order,
        group_order=enum.group_order,
        recurrent_fraction=enum.group_order / enum.order,
        identity=list(enum.elements[enum.identity_index].grains),
        invariant_factors=factors,
        table=table,
    )


def realizability_record(report: RealizabilityReport) -> RealizabilityRecord:
    """Record for `check-monoid`."""
    return RealizabilityRecord(
        order=report.order,
        verdict=report.verdict,
        obstructed=report.obstructed,
        witness=list(report.witness) if report.witness is not None else None,
        lattice=report.lattice,
        idempotent_count=report.idempotent_count,
        fully_idempotent=report.fully_idempotent,
    )


def stabilize_record(result: Avalanche) -> StabilizeRecord:
    """Record for `stabilize`."""
    return StabilizeRecord(config=list(result.config.grains), topple_counts=list(result.topple_counts))


def sdr_record(g: MultiDigraph, profile: SdrProfile) -> SdrRecord:
    """Record for `sdr`."""
    return SdrRecord(
        d=profile.d,
        a=list(profile.a),
        b=list(profile.b),
        c=list(profile.c),
        n=list(profile.n),
        layers=[_labels(g, layer) for layer in profile.gamma],
    )
