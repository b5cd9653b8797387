"""
sandmonoid - CONNECTORS: Text formats
Graph, configuration, Cayley table and layer-profile text.

Graph:   n <vertex_count> <sink>
         v <index> <label>          (optional, one per renamed vertex)
         e <tail> <head> <multiplicity>
Config:  grain counts in vertex-index order, sink omitted
Table:   m <order> <identity>, then order rows of order indices
Profile: d <d>, then one row "i a_i b_i c_i n_i" per layer

'#' starts a comment anywhere. serialize_* output parses back to an
equal object and re-serializes to the same text.
"""

import logging
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..core.checker import MonoidTable
from ..core.sdr import SdrProfile
from ..engine.errors import ConfigError, FormatError, TableFormatError
from ..engine.graph import MultiDigraph
from ..engine.sandpile import Config, check_config

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    """(line number, tokens) for every non-blank line, comments stripped."""
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield number, tokens


def _ints(tokens: List[str], line: int, error=FormatError) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise error(f"expected integers, got {' '.join(tokens)!r}", line)


def _default_label(v: int, sink: int) -> str:
    return "sink" if v == sink else str(v)


# ============================================================
# GRAPH
# ============================================================

def parse_graph(text: str) -> MultiDigraph:
    """Parse graph text. Validation errors from MultiDigraph pass through."""
    header: Optional[Tuple[int, int]] = None
    edges = []
    labels: Dict[int, str] = {}

    for line, tokens in _lines(text):
        kind, args = tokens[0], tokens[1:]
        if header is None:
            if kind != "n" or len(args) != 2:
                raise FormatError("first line must be 'n <vertex_count> <sink>'", line)
            header = tuple(_ints(args, line))
            continue
        if kind == "n":
            raise FormatError("repeated 'n' header", line)
        if kind == "e":
            if len(args) != 3:
                raise FormatError("edge line must be 'e <tail> <head> <multiplicity>'", line)
            edges.append(tuple(_ints(args, line)))
        elif kind == "v":
            if len(args) != 2:
                raise FormatError("label line must be 'v <index> <label>'", line)
            index = _ints(args[:1], line)[0]
            if not 0 <= index < header[0]:
                raise FormatError(f"label for vertex {index} out of range", line)
            if index in labels:
                raise FormatError(f"vertex {index} labelled twice", line)
            labels[index] = args[1]
        else:
            raise FormatError(f"unknown line type {kind!r}", line)

    if header is None:
        raise FormatError("empty graph text")
    n, sink = header

    names = None
    if labels:
        names = [labels.get(v, _default_label(v, sink)) for v in range(n)]
        if len(set(names)) != len(names):
            raise FormatError("vertex labels must be unique")
    return MultiDigraph(n, sink, edges, labels=names)


def serialize_graph(g: MultiDigraph) -> str:
    """Graph text; labels only where they differ from the defaults."""
    lines = [f"n {g.vertex_count} {g.sink}"]
    for v in range(g.vertex_count):
        if g.labels is not None and g.label(v) != _default_label(v, g.sink):
            lines.append(f"v {v} {g.label(v)}")
    lines.extend(f"e {t} {h} {m}" for t, h, m in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: PathLike) -> MultiDigraph:
    """Parse a graph file. Unreadable files raise FormatError."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read graph file {path}: {e}")
    g = parse_graph(text)
    logger.debug(f"Loaded {g!r} from {path}")
    return g


def write_graph(path: PathLike, g: MultiDigraph):
    """Write graph text to path."""
    Path(path).write_text(serialize_graph(g))


# ============================================================
# CONFIG
# ============================================================

def parse_config(text: str, g: Optional[MultiDigraph] = None) -> Config:
    """Grain counts, checked against g's non-sink vertex count when g is given."""
    grains: List[int] = []
    for line, tokens in _lines(text):
        grains.extend(_ints(tokens, line))
    try:
        c = Config(tuple(grains))
        if g is not None:
            check_config(g, c)
    except ConfigError as e:
        raise FormatError(str(e))
    return c


def serialize_config(c: Config) -> str:
    """Grain counts on one line."""
    return " ".join(str(x) for x in c.grains) + "\n"


def read_config(path: PathLike, g: Optional[MultiDigraph] = None) -> Config:
    """Parse a config file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read config file {path}: {e}")
    return parse_config(text, g)


# ============================================================
# CAYLEY TABLE
# ============================================================

def parse_table(text: str) -> MonoidTable:
    """Parse Cayley table text; ranges are checked by MonoidTable."""
    rows = list(_lines(text))
    if not rows:
        raise TableFormatError("empty table text")
    line, head = rows[0]
    if head[0] != "m" or len(head) != 3:
        raise TableFormatError("first line must be 'm <order> <identity>'", line)
    order, identity = _ints(head[1:], line, TableFormatError)
    body = rows[1:]
    if len(body) != order:
        raise TableFormatError(f"expected {order} rows, found {len(body)}")
    table = []
    for line, tokens in body:
        row = _ints(tokens, line, TableFormatError)
        if len(row) != order:
            raise TableFormatError(f"expected {order} entries, found {len(row)}", line)
        table.append(row)
    return MonoidTable(order, np.array(table, dtype=np.int64), identity)


def serialize_table(t: MonoidTable) -> str:
    """Cayley table text."""
    lines = [f"m {t.order} {t.identity}"]
    lines.extend(" ".join(str(int(x)) for x in row) for row in t.table)
    return "\n".join(lines) + "\n"


def read_table(path: PathLike) -> MonoidTable:
    """Parse a table file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise TableFormatError(f"cannot read table file {path}: {e}")
    return parse_table(text)


# ============================================================
# SDR PROFILE
# ============================================================

def format_profile(profile: SdrProfile) -> str:
    """Profile text: d, then i a_i b_i c_i n_i per layer."""
    lines = [f"d {profile.d}"]
    for i in range(1, profile.d + 1):
        lines.append(f"{i} {profile.a[i - 1]} {profile.b_at(i)} {profile.c[i - 1]} {profile.n[i - 1]}")
    return "\n".join(lines) + "\n"
