"""``carpet`` command line: wiener, distance, validate, export.

Exit codes: 0 ok, 1 formula and oracle disagree, 2 usage or parse error,
3 level cap exceeded, 4 I/O failure.  Results go to stdout (or ``--output``),
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import engine, export
from .metric import distance
from .oracle import DEFAULT_ORACLE_MAX_LEVEL, bfs_from, build_graph
from .words import (
    DEFAULT_MAX_LEVEL,
    LevelCapError,
    WordParseError,
    build_vertex_table,
    parse_word,
    word_to_point,
)

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_CAP, EXIT_IO = range(5)

log = logging.getLogger("carpet_wiener")


class _UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carpet", description="Wiener index and distances of the Sierpinski carpet graphs."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cap):
        p.add_argument("--level", type=_positive, required=True)
        p.add_argument("--max-level", type=_positive, default=cap,
                       help=f"level cap (default {cap})")
        p.add_argument("--output", "-o", help="write results here instead of stdout")

    p = sub.add_parser("wiener", help="Wiener index of one level or a table of levels")
    common(p, DEFAULT_MAX_LEVEL)
    p.add_argument("--method", choices=["formula", "oracle", "both"], default="formula")
    p.add_argument("--upto", action="store_true", help="one row per level 1..LEVEL")
    p.add_argument("--workers", type=_positive, default=None,
                   help="worker processes (default: $CARPET_WORKERS or 1)")
    p.add_argument("--symmetry", action="store_true",
                   help="sum one row per symmetry orbit, weighted by orbit size")
    p.add_argument("--oracle-max-level", type=_positive, default=DEFAULT_ORACLE_MAX_LEVEL,
                   help=f"level cap for the BFS oracle (default {DEFAULT_ORACLE_MAX_LEVEL})")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--timing", action="store_true", help="include elapsed seconds")

    p = sub.add_parser("distance", help="distance between two words with its trace")
    common(p, DEFAULT_MAX_LEVEL)
    p.add_argument("words", nargs=2, metavar="WORD")
    p.add_argument("--method", choices=["formula", "both"], default="formula")
    p.add_argument("--oracle-max-level", type=_positive, default=DEFAULT_ORACLE_MAX_LEVEL)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("validate", help="compare formula and BFS distances pair by pair")
    common(p, DEFAULT_ORACLE_MAX_LEVEL)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sample", type=_positive, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--max-traces", type=int, default=20,
                   help="mismatches printed with full traces (-1 for all)")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("export", help="write the graph as DOT, edge list or CSV")
    common(p, DEFAULT_ORACLE_MAX_LEVEL)
    p.add_argument("--format", choices=sorted(export.FORMATS), required=True)
    return parser


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    try:
        return engine.default_workers()
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def cmd_wiener(args) -> tuple[int, str]:
    workers = _workers(args)
    levels = range(1, args.level + 1) if args.upto else [args.level]
    cap = args.max_level if args.method == "formula" else args.oracle_max_level
    if args.level > cap:
        raise LevelCapError(f"level {args.level} exceeds the cap {cap} for method {args.method}")
    reports = []
    for n in levels:
        if args.method == "formula":
            r = engine.wiener_formula(n, workers, symmetry=args.symmetry, max_level=args.max_level)
        elif args.method == "oracle":
            r = engine.wiener_oracle(n, workers, symmetry=args.symmetry, max_level=cap)
        else:
            r = engine.wiener_both(n, workers, max_level=cap)
        log.info("level %d: W=%d (%s, %.2fs)", n, r.wiener, r.method, r.elapsed)
        reports.append(r)

    status = EXIT_OK
    for r in reports:
        if r.method == "both" and (r.mismatch_count or r.wiener != r.oracle_wiener):
            log.error("level %d: formula %d != oracle %d on %d pairs",
                      r.level, r.wiener, r.oracle_wiener, r.mismatch_count)
            status = EXIT_DISAGREE

    if args.format == "json":
        rows = [r.to_dict() for r in reports]
        if not args.timing:
            for row in rows:
                row.pop("elapsed")
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = engine.reports_to_tsv(reports, timing=args.timing)
    return status, text


def cmd_distance(args) -> tuple[int, str]:
    try:
        w1, w2 = (parse_word(w, args.level) for w in args.words)
    except WordParseError as exc:
        raise _UsageError(f"bad word: {exc}") from None
    if args.level > args.max_level:
        raise LevelCapError(f"level {args.level} exceeds the cap {args.max_level}")
    trace = distance(w1, w2)
    status = EXIT_OK
    oracle = None
    if args.method == "both":
        g = build_graph(args.level, max_level=args.oracle_max_level)
        dist = bfs_from(g, g.point_index[word_to_point(w1)])
        oracle = int(dist[g.point_index[word_to_point(w2)]])
        if oracle != trace.value:
            log.error("formula %d != oracle %d for %s %s", trace.value, oracle, w1, w2)
            status = EXIT_DISAGREE
    if args.format == "json":
        d = {"word1": str(w1), "word2": str(w2), **trace.to_dict()}
        if oracle is not None:
            d["oracle"] = oracle
        text = json.dumps(d, sort_keys=True) + "\n"
    else:
        text = f"word1={w1}\nword2={w2}\n{trace.to_lines()}\n"
        if oracle is not None:
            text += f"oracle={oracle}\n"
    return status, text


def cmd_validate(args) -> tuple[int, str]:
    workers = _workers(args)
    max_traces = None if args.max_traces < 0 else args.max_traces
    if args.exhaustive:
        report = engine.validate(args.level, "exhaustive", max_traces=max_traces,
                                 worker_count=workers, max_level=args.max_level)
    else:
        report = engine.validate(args.level, "sample", sample_size=args.sample, seed=args.seed,
                                 max_traces=max_traces, max_level=args.max_level)
    if args.format == "json":
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    else:
        lines = [
            f"level={report.level}",
            f"mode={report.mode}" + (f" seed={report.seed}" if report.seed is not None else ""),
            f"pairs_checked={report.pairs_checked}",
            f"mismatches={report.mismatch_count}",
        ]
        for m in report.mismatches:
            lines.append(f"--- {m.word1} {m.word2} formula={m.formula} oracle={m.oracle}")
            lines.append(m.trace.to_lines())
        if report.mismatch_count > len(report.mismatches):
            lines.append(f"... {report.mismatch_count - len(report.mismatches)} more mismatches")
        text = "\n".join(lines) + "\n"
    return (EXIT_OK if report.ok else EXIT_DISAGREE), text


def cmd_export(args) -> tuple[int, str]:
    g = build_graph(args.level, max_level=args.max_level)
    table = build_vertex_table(args.level)
    return EXIT_OK, export.render(g, table, args.format)


COMMANDS = {
    "wiener": cmd_wiener,
    "distance": cmd_distance,
    "validate": cmd_validate,
    "export": cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        status, text = COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"carpet: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LevelCapError as exc:
        print(f"carpet: {exc}", file=sys.stderr)
        return EXIT_CAP
    finally:
        log.removeHandler(handler)
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"carpet: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
