"""
sandmonoid - CONNECTORS Module
Text formats (graph, config, table, profile) + JSON-lines records
"""

from .formats import (
    parse_graph,
    serialize_graph,
    read_graph,
    write_graph,
    parse_config,
    serialize_config,
    read_config,
    parse_table,
    serialize_table,
    read_table,
    format_profile,
)
