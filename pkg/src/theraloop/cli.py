"""Command-line interface.

Subcommands:
    simulate          run a configured session to completion, write the trace
    validate-catalog  check catalog/table files and print diagnostics
    stats             chi-square on 2x2 counts, or a report over a trace file
    replay            re-run a trace's config and byte-compare the output
    serve             start the session HTTP service
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .behaviors import load_catalog
from .child import default_catalog, default_table, load_table, severity_dominance_violations
from .engine import (
    config_from_dict,
    create_session,
    load_config,
    trace_lines,
    write_trace,
    write_trace_csv,
)
from .errors import TheraloopError
from .stats import ContingencyTable2x2, chi_square_2x2, format_report, report_from_lines, trace_report


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    session = create_session(config)
    trace = session.run_to_completion()
    if args.out:
        write_trace(trace, args.out)
    else:
        for line in trace_lines(trace):
            print(line)
    if args.csv:
        write_trace_csv(trace, args.csv)
    if args.report:
        print(format_report(trace_report(trace)))
    return 0


def _cmd_validate_catalog(args: argparse.Namespace) -> int:
    problems = []
    catalog = None
    try:
        catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
        print(
            f"catalog ok: {len(catalog.features)} features,"
            f" {len(catalog.behaviors)} behaviors,"
            f" {len(catalog.activities)} activities"
        )
    except TheraloopError as exc:
        problems.append(f"catalog: {exc}")

    if args.table or not args.catalog:
        try:
            table = load_table(args.table) if args.table else default_table()
            n_cells = sum(len(v) for v in table.cells.values())
            print(f"table ok: {n_cells} cells")
            if catalog is not None:
                combos = [
                    f"{s}|{l}|{a}"
                    for s in table.categories["severity"]
                    for l in table.categories["language_ability"]
                    for a in table.categories["age_band"]
                ]
                for fid in sorted(catalog.features):
                    missing = [k for k in combos if k not in table.cells.get(fid, {})]
                    if missing:
                        problems.append(
                            f"table: feature {fid!r} missing cells, e.g. {missing[0]!r}"
                        )
                for violation in severity_dominance_violations(table):
                    print(f"warning: severity dominance: {violation}")
        except TheraloopError as exc:
            problems.append(f"table: {exc}")

    for problem in problems:
        print(f"error: {problem}", file=sys.stderr)
    return 1 if problems else 0


def _cmd_stats(args: argparse.Namespace) -> int:
    if args.counts:
        parts = args.counts.split(",")
        if len(parts) != 4:
            print("error: --counts expects four comma-separated integers", file=sys.stderr)
            return 1
        a, b, c, d = (int(p) for p in parts)
        result = chi_square_2x2(ContingencyTable2x2(a, b, c, d), yates=args.yates)
        variant = "yates" if args.yates else "uncorrected"
        print(f"chi-square(1) = {result.statistic:.2f} ({variant}), p = {result.p_value:.4g}")
        return 0
    if args.trace:
        records = [json.loads(line) for line in _read_lines(args.trace)]
        print(format_report(report_from_lines(records)))
        return 0
    print("error: provide --counts or --trace", file=sys.stderr)
    return 1


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.strip()]


def _cmd_replay(args: argparse.Namespace) -> int:
    recorded = _read_lines(args.trace)
    config = config_from_dict(json.loads(recorded[0])["config"])
    session = create_session(config)
    fresh = list(trace_lines(session.run_to_completion()))
    if recorded == fresh:
        print(f"replay ok: {len(recorded)} lines identical")
        return 0
    for i, (old, new) in enumerate(zip(recorded, fresh)):
        if old != new:
            print(f"replay mismatch at line {i + 1}", file=sys.stderr)
            break
    else:
        print(
            f"replay mismatch: line counts differ ({len(recorded)} vs {len(fresh)})",
            file=sys.stderr,
        )
    return 2


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    catalog = load_catalog(args.catalog) if args.catalog else None
    table = load_table(args.table) if args.table else None
    port = args.port if args.port is not None else int(os.environ.get("THERALOOP_PORT", "8000"))
    ui_dir = args.ui if args.ui else None
    if ui_dir is None:
        bundled = Path("frontend") / "dist"
        if bundled.is_dir():
            ui_dir = str(bundled)
    app = create_app(catalog=catalog, table=table, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="theraloop",
        description="Closed-loop simulator for robot-assisted therapy sessions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a session config to completion")
    p.add_argument("--config", required=True, help="session config JSON file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", help="trace output path (JSON lines); stdout if omitted")
    p.add_argument("--csv", help="also export the steps as CSV")
    p.add_argument("--report", action="store_true", help="print the session report")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("validate-catalog", help="check catalog and table files")
    p.add_argument("--catalog", help="catalog JSON (packaged default if omitted)")
    p.add_argument("--table", help="instantiation table JSON")
    p.set_defaults(func=_cmd_validate_catalog)

    p = sub.add_parser("stats", help="statistics over counts or a trace")
    p.add_argument("--counts", help="2x2 table as a,b,c,d")
    p.add_argument("--yates", action="store_true", help="apply the continuity correction")
    p.add_argument("--trace", help="trace file to report on")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("replay", help="re-run a trace's config and compare byte-for-byte")
    p.add_argument("trace", help="trace file produced by simulate")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("serve", help="start the session HTTP service")
    p.add_argument("--port", type=int, default=None,
                   help="port (flag wins over THERALOOP_PORT; default 8000)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--catalog", help="catalog JSON (packaged default if omitted)")
    p.add_argument("--table", help="instantiation table JSON")
    p.add_argument("--ui", help="static UI directory to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TheraloopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
