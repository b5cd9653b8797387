"""
sandmonoid - CORE Module
Monoid structure + Monoid checker + Sink-distance-regular analysis
"""

from .monoid import (
    MonoidEnumeration,
    IdempotentRecord,
    stable_configs,
    config_index,
    enumerate_monoid,
    recurrent_elements,
    accessible,
    mutually_accessible,
    mutual_accessibility_class,
    idempotent_table_search,
    element_orders,
    invariant_factors,
    idempotents,
    maximal_subgroup_order,
    maximal_subgroup,
    alternate_subgroup_build,
    classical_idempotent_count,
    two_idempotent_recurrence_check,
    eventually_recurrent_check,
)

from .checker import (
    DISTRIBUTIVE,
    NOT_DISTRIBUTIVE,
    NOT_A_LATTICE,
    MonoidTable,
    TableCheck,
    RealizabilityReport,
    validate_table,
    u_plus_a_obstruction,
    idempotent_lattice_distributive,
    realizability_report,
    make_chain_monoid,
    make_group_plus_infinity,
    make_cyclic_group,
    make_lattice_monoid,
    sandpile_table,
)

from .sdr import (
    SdrProfile,
    SdrViolation,
    distance_partition,
    check_sdr,
    sdr_identity,
    wave_topple,
    replay_doubling,
    doubling_topple_counts,
    from_undirected,
    matches_intersection_array,
)
