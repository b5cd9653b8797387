#!/usr/bin/env python3
"""
sandmonoid - Sandpile monoids and groups on directed multigraphs

COMMANDS:
  sandmonoid identity <graph> [--sdr]        Group identity (closed form check with --sdr)
  sandmonoid idempotents <graph>             One idempotent per filter, with subgroup data
  sandmonoid monoid <graph> [--table-out F]  |M|, |G|, invariant factors, Cayley table
  sandmonoid check-monoid <table>            Obstructions to being a sandpile monoid
  sandmonoid stabilize <graph> <config>      Stable result and topple counts
  sandmonoid sdr <graph>                     Sink-distance layer profile
  sandmonoid generate <family> [params...]   Emit a family member as graph text

ARCHITECTURE:
├── engine/         # SUPPORT
│   ├── graph.py         # MultiDigraph, closure, ι(S)
│   ├── poset.py         # Cyclic components, filters, A(e), S(e)
│   ├── sandpile.py      # Toppling, ⊕, MAX, identity
│   └── settings.py      # Caps, log level
├── core/           # CORE
│   ├── monoid.py        # Enumeration, idempotents, subgroups
│   ├── checker.py       # Abstract monoid obstructions
│   └── sdr.py           # Sink-distance-regular closed form
├── families/       # Graph constructors + fixtures
└── connectors/     # INTERFACES
    ├── formats.py       # Text formats
    └── records.py       # JSON-lines records

EXIT CODES:
  0 success / no known obstruction
  1 obstructed / SDR disagreement / not SDR
  2 invalid input
  3 size cap exceeded
  4 grain overflow
  5 internal invariant failure
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

VERSION = Path(__file__).parent.parent.joinpath("VERSION").read_text().strip() if Path(__file__).parent.parent.joinpath("VERSION").exists() else "0.0.0"

EXIT_OK = 0
EXIT_OBSTRUCTED = 1
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_OVERFLOW = 4
EXIT_INVARIANT = 5

logger = logging.getLogger("sandmonoid")


# ============================================================
# PARSER
# ============================================================

def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation and shared flags."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-elements", type=int, default=None,
                        help="max monoid elements to enumerate (default 1000000)")
    common.add_argument("--cap-table", type=int, default=None,
                        help="max monoid elements for a Cayley table (default 1000)")
    common.add_argument("--format", choices=("human", "records"), default="human",
                        help="records = one JSON object per line")
    common.add_argument("--seed", type=int, default=None, help="seed for tournament relabelling")
    common.add_argument("--config", type=Path, default=None, help="YAML settings file")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="sandmonoid",
        description="Sandpile monoids and groups on directed multigraphs",
    )
    parser.add_argument("--version", action="version", version=f"sandmonoid {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identity", parents=[common], help="group identity")
    p.add_argument("graph", type=Path)
    p.add_argument("--sdr", action="store_true", help="compare with the sink-distance-regular closed form")

    p = sub.add_parser("idempotents", parents=[common], help="all idempotents")
    p.add_argument("graph", type=Path)

    p = sub.add_parser("monoid", parents=[common], help="monoid and group summary")
    p.add_argument("graph", type=Path)
    p.add_argument("--table-out", type=Path, default=None, help="write the Cayley table here")

    p = sub.add_parser("check-monoid", parents=[common], help="realizability obstructions")
    p.add_argument("table", type=Path)

    p = sub.add_parser("stabilize", parents=[common], help="stabilize a configuration")
    p.add_argument("graph", type=Path)
    p.add_argument("config_file", type=Path)
    p.add_argument("--policy", choices=("fifo", "priority", "parallel"), default="fifo")

    p = sub.add_parser("sdr", parents=[common], help="sink-distance layer profile")
    p.add_argument("graph", type=Path)

    p = sub.add_parser("generate", parents=[common], help="emit a family member")
    p.add_argument("family")
    p.add_argument("params", nargs="*", type=int)

    return parser


def _emit(args, record, human: str):
    print(record.to_line() if args.format == "records" else human)


def _labelled(g, c) -> str:
    nonzero = [f"{g.label(v)}:{x}" for v, x in zip(g.non_sink, c.grains) if x]
    return "{" + ", ".join(nonzero) + "}"


# ============================================================
# COMMANDS
# ============================================================

def cmd_identity(args, settings) -> int:
    """Print the group identity, optionally against the layer closed form."""
    from sandmonoid.connectors.formats import read_graph
    from sandmonoid.connectors.records import identity_record
    from sandmonoid.core.sdr import check_sdr, sdr_identity
    from sandmonoid.engine.graph import sink_strip
    from sandmonoid.engine.sandpile import group_identity

    g = read_graph(args.graph)
    e = group_identity(g)
    status = None
    if args.sdr:
        x = sink_strip(g)
        profile, violation = check_sdr(x)
        if profile is None:
            status = "not sdr"
            logger.info(f"not sink-distance-regular: {violation.describe(x)}")
        else:
            status = "agree" if sdr_identity(profile, x) == e else "disagree"

    human = f"identity: {e}\n          {_labelled(g, e)}"
    if status is not None:
        human += f"\nSDR: {status}"
    _emit(args, identity_record(e, status), human)
    return EXIT_OK if status in (None, "agree") else EXIT_OBSTRUCTED


def cmd_idempotents(args, settings) -> int:
    """Print one idempotent per filter."""
    from sandmonoid.connectors.formats import read_graph
    from sandmonoid.connectors.records import idempotent_record
    from sandmonoid.core.monoid import idempotents
    from sandmonoid.engine.graph import sink_strip
    from sandmonoid.engine.poset import cyclic_strong_components

    g = read_graph(args.graph)
    x = sink_strip(g)
    p = cyclic_strong_components(x)
    records = idempotents(g, settings)
    if args.format == "human":
        print(f"{len(records)} idempotents, {len(p)} cyclic strong components")
    for k, rec in enumerate(records):
        model = idempotent_record(x, p, rec)
        human = "\n".join([
            f"e{k}: {rec.config}",
            f"  filter:   {' '.join(p.names(x, rec.filter.members)) or '{}'}",
            f"  grains:   {_labelled(x, rec.config)}",
            f"  cl(supp): {x.describe(rec.iota_support)}",
            f"  A(e):     {x.describe(rec.a_set)}",
            f"  S(e):     {'{' + ', '.join(model.s_vertices) + '}'}",
            f"  |G_e|:    {rec.max_subgroup_order}",
        ])
        _emit(args, model, human)
    return EXIT_OK


def cmd_monoid(args, settings) -> int:
    """Print the monoid summary and optionally write the Cayley table."""
    from sandmonoid.connectors.formats import read_graph, serialize_table
    from sandmonoid.connectors.records import monoid_record
    from sandmonoid.core.checker import sandpile_table
    from sandmonoid.core.monoid import enumerate_monoid, invariant_factors

    g = read_graph(args.graph)
    enum = enumerate_monoid(g, settings, with_table=True if args.table_out else None)
    factors = invariant_factors(enum) if enum.op_table is not None else None
    if args.table_out:
        args.table_out.write_text(serialize_table(sandpile_table(enum)))
        logger.info(f"Cayley table written to {args.table_out}")

    human = "\n".join([
        f"|M| = {enum.order}",
        f"|G| = {enum.group_order}",
        f"recurrent fraction = {enum.group_order / enum.order:.6g}",
        f"invariant factors = {factors if factors is not None else 'skipped (over table cap)'}",
    ])
    _emit(args, monoid_record(enum, factors, with_table=args.table_out is not None), human)
    return EXIT_OK


def cmd_check_monoid(args, settings) -> int:
    """Validate a table and run the obstruction checks."""
    from sandmonoid.connectors.formats import read_table
    from sandmonoid.connectors.records import ErrorRecord, realizability_record
    from sandmonoid.core.checker import realizability_report, validate_table

    t = read_table(args.table)
    check = validate_table(t)
    if not check:
        message = f"invalid table: {check.describe()}"
        _emit(args, ErrorRecord(error="TableCheck", violations=[check.describe()], exit_code=EXIT_INVALID), message)
        return EXIT_INVALID

    report = realizability_report(t)
    lines = [f"order {report.order}, {report.idempotent_count} idempotents, lattice: {report.lattice}"]
    if report.witness is not None:
        lines.append(f"witness (u, a, k) = {report.witness}")
    lines.append(report.verdict)
    _emit(args, realizability_record(report), "\n".join(lines))
    return EXIT_OBSTRUCTED if report.obstructed else EXIT_OK


def cmd_stabilize(args, settings) -> int:
    """Stabilize a configuration file under the chosen policy."""
    from sandmonoid.connectors.formats import read_config, read_graph
    from sandmonoid.connectors.records import stabilize_record
    from sandmonoid.engine.sandpile import stabilize

    g = read_graph(args.graph)
    c = read_config(args.config_file, g)
    result = stabilize(g, c, policy=args.policy)
    logger.info(f"avalanche: {sum(result.topple_counts)} topples")
    human = f"stable:  {result.config}\ntopples: {' '.join(str(k) for k in result.topple_counts)}"
    _emit(args, stabilize_record(result), human)
    return EXIT_OK


def cmd_sdr(args, settings) -> int:
    """Print the layer profile or the first violation."""
    from sandmonoid.connectors.formats import format_profile, read_graph
    from sandmonoid.connectors.records import ErrorRecord, sdr_record
    from sandmonoid.core.sdr import check_sdr
    from sandmonoid.engine.graph import sink_strip

    x = sink_strip(read_graph(args.graph))
    profile, violation = check_sdr(x)
    if profile is None:
        detail = violation.describe(x)
        _emit(args, ErrorRecord(error="NotSinkDistanceRegular", violations=[detail], exit_code=EXIT_OBSTRUCTED),
              f"not sink-distance-regular: {detail}")
        return EXIT_OBSTRUCTED
    _emit(args, sdr_record(x, profile), format_profile(profile).rstrip("\n"))
    return EXIT_OK


def cmd_generate(args, settings) -> int:
    """Emit a family member as graph text."""
    from sandmonoid.connectors.formats import serialize_graph
    from sandmonoid.families import generate

    g = generate(args.family, args.params, seed=args.seed)
    if args.seed is not None:
        print(f"# seed {args.seed}")
    print(serialize_graph(g), end="")
    return EXIT_OK


COMMANDS = {
    "identity": cmd_identity,
    "idempotents": cmd_idempotents,
    "monoid": cmd_monoid,
    "check-monoid": cmd_check_monoid,
    "stabilize": cmd_stabilize,
    "sdr": cmd_sdr,
    "generate": cmd_generate,
}


# ============================================================
# ENTRY POINT
# ============================================================

def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point. Returns the exit code."""
    sys.path.insert(0, str(Path(__file__).parent.parent))

    from sandmonoid.connectors.records import ErrorRecord
    from sandmonoid.engine.errors import (
        GrainOverflowError,
        InvariantError,
        SandpileError,
        SizeCapError,
    )
    from sandmonoid.engine.settings import load_settings

    args = build_parser().parse_args(argv)

    try:
        settings = load_settings(args.config).with_overrides(
            cap_elements=args.cap_elements,
            cap_table=args.cap_table,
        )
        level = "DEBUG" if args.verbose else settings.log_level
        logging.basicConfig(
            level=getattr(logging, level),
            format='%(asctime)s [%(levelname)s] %(message)s',
            stream=sys.stderr,
        )
        return COMMANDS[args.command](args, settings)
    except SandpileError as e:
        if isinstance(e, SizeCapError):
            code = EXIT_CAP
        elif isinstance(e, GrainOverflowError):
            code = EXIT_OVERFLOW
        elif isinstance(e, InvariantError):
            code = EXIT_INVARIANT
        else:
            code = EXIT_INVALID
        if args.format == "records":
            print(ErrorRecord(error=type(e).__name__, violations=e.violations, exit_code=code).to_line())
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
