"""
sandmonoid - ENGINE Module
Graphs + Component poset + Sandpile dynamics + Settings + Errors
"""

from .errors import (
    SandpileError,
    GraphValidationError,
    ConfigError,
    GrainOverflowError,
    SizeCapError,
    PreconditionError,
    InvariantError,
    FormatError,
    TableFormatError,
    SettingsError,
    check_invariant,
)

from .settings import (
    CONFIG_DIR,
    DEFAULT_CONFIG_FILE,
    Settings,
    load_settings,
)

from .graph import (
    MultiDigraph,
    reach,
    sink_strip,
    closure,
    induced_subgraph,
    iota_subgraph,
    is_undirected,
)

from .poset import (
    ComponentPoset,
    Filter,
    cyclic_strong_components,
    filters,
    filter_of_support,
    a_set,
    s_subgraph,
)

from .sandpile import (
    POLICIES,
    Config,
    Avalanche,
    zero,
    unit,
    from_mapping,
    check_config,
    is_stable,
    stabilize,
    oplus,
    max_config,
    group_identity,
    is_recurrent,
    idempotent_of,
    cycle_reaching_vertices,
    can_access_zero,
    embed,
    restrict,
    stable_count,
)
