"""Command-line front end.

Exit codes: 0 success, 2 bound violation, 3 wrong outcome, 4 parse or
instance error, 5 capacity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import harness
from .errors import CapacityError, HSPError
from .subgroups import enumerate_subgroups

EXIT_OK = 0
EXIT_BOUND = 2
EXIT_WRONG = 3
EXIT_PARSE = 4
EXIT_CAPACITY = 5


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _row_exit(rows) -> int:
    if any(r.status == harness.WRONG for r in rows):
        return EXIT_WRONG
    if any(r.status == harness.BOUND_EXCEEDED for r in rows):
        return EXIT_BOUND
    return EXIT_OK


def cmd_run(args) -> int:
    spec = harness.InstanceSpec(args.group, args.hidden, args.alg, args.seed, args.dedupe, args.assert_bounds)
    row, rep, oracle = harness.run_spec(spec, timing=args.timing)
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(oracle.transcript_json())
    if args.format == "csv":
        _emit(_csv_text(harness.CSV_HEADER, [row.csv_values()]), args.out)
    else:
        doc = {"schema": harness.SCHEMA_VERSION, "instance": vars(spec) | {"hidden": spec.hidden},
               "row": row.to_dict(), "report": rep.to_dict()}
        if not args.trace:
            doc["report"].pop("trace")
        _emit(_json_text(doc), args.out)
    return _row_exit([row])


def cmd_sweep(args) -> int:
    family = harness.parse_family(args.family)
    algs = [a.strip() for a in args.algs.split(",") if a.strip()]
    for a in algs:
        if a not in harness.ALGORITHM_NAMES + harness.SWEEP_ONLY:
            raise harness.ParseError(f"unknown algorithm {a!r}")
    rows = harness.sweep(family, algs, seed=args.seed, dedupe=args.dedupe,
                         assert_bounds=args.assert_bounds, timing=args.timing)
    summary = harness.summarize(rows)
    if args.format == "csv":
        _emit(_csv_text(harness.CSV_HEADER, [r.csv_values() for r in rows]), args.out)
    else:
        _emit(_json_text({"schema": harness.SCHEMA_VERSION, "summary": summary,
                          "rows": [r.to_dict() for r in rows]}), args.out)
    ratio = summary["max_bound_ratio"]
    print(f"summary: rows={summary['rows']} failures={summary['failures']} "
          f"max_bound_ratio={'n/a' if ratio is None else f'{ratio:.4f}'} "
          f"capacity={summary['capacity']} uncertified={summary['uncertified']}", file=sys.stderr)
    for r in rows:
        if r.status in (harness.WRONG, harness.BOUND_EXCEEDED):
            print(f"failure: {r.group} m={r.m} {r.algorithm} {r.status}", file=sys.stderr)
    return _row_exit(rows)


def cmd_verify_pairs(args) -> int:
    family = harness.parse_family(args.family)
    report = harness.verify_pairs(family, args.construction, seeds=args.seeds)
    cols = ["group", "n", "construction", "seed", "s1", "s2", "limit", "verified", "within_limit"]
    if args.format == "csv":
        _emit(_csv_text(cols, [[("" if r[c] is None else r[c]) for c in cols] for r in report]), args.out)
    else:
        _emit(_json_text({"schema": harness.SCHEMA_VERSION, "pairs": report}), args.out)
    bad = [r for r in report if not r["verified"]]
    big = [r for r in report if r["verified"] and not r["within_limit"]]
    for r in bad:
        print(f"failure: {r['group']} pair does not cover the group (seed {r['seed']})", file=sys.stderr)
    for r in big:
        print(f"failure: {r['group']} pair sizes {r['s1']},{r['s2']} exceed {r['limit']:.3f}", file=sys.stderr)
    return EXIT_WRONG if bad else EXIT_BOUND if big else EXIT_OK


def cmd_plotdata(args) -> int:
    with open(args.input, newline="") as fh:
        rows = list(csv.DictReader(fh))
    series = harness.plotdata(rows)
    cols = ["algorithm", "n_over_m", "mean_queries", "max_queries", "mean_bound", "count"]
    text = _csv_text(cols, [[("" if s[c] is None else s[c]) for c in cols] for s in series])
    _emit(text, args.out)
    png = args.png
    if png is None and args.out:
        png = os.path.splitext(args.out)[0] + ".png"
    if png:
        from .plotting import render_queries

        render_queries(series, png, title=os.path.basename(args.input))
    return EXIT_OK


def cmd_subgroups(args) -> int:
    G = harness.load_group(args.group)
    subs = enumerate_subgroups(G)
    doc = {
        "schema": harness.SCHEMA_VERSION,
        "group": args.group,
        "n": G.order,
        "count": len(subs),
        "orders": sorted({H.order for H in subs}),
        "subgroups": [{"order": H.order, "generators": [G.format_element(g) for g in H.generators]}
                      for H in subs] if args.list else None,
    }
    _emit(_json_text(doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hsplab", description="Deterministic hidden subgroup algorithms and benchmarks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json"):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--assert-bounds", action="store_true", help="fail (exit 2) when a bound is exceeded")
        sp.add_argument("--dedupe", action="store_true", help="do not re-count repeated queries")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="fill wall_ms (makes output nondeterministic)")

    r = sub.add_parser("run", help="run one algorithm on one instance")
    r.add_argument("--group", required=True, help="e.g. Z8, Z4xZ2, Z2^3, D6, S4, A4, Q8, cayley:<path>")
    r.add_argument("--hidden", default="trivial", help="generators of H, comma separated, or 'trivial'")
    r.add_argument("--alg", required=True, choices=harness.ALGORITHM_NAMES)
    r.add_argument("--transcript", help="write the query transcript as JSON")
    r.add_argument("--trace", action="store_true", help="include per-iteration trace in JSON")
    common(r)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run algorithms on every subgroup of every group in a family")
    s.add_argument("--family", required=True, help="abelian:N, dihedral:N, nonabelian:N or a comma list")
    s.add_argument("--algs", required=True, help="comma list; also accepts subgroup-orders")
    common(s, "csv")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify-pairs", help="verify generating pairs over a family")
    v.add_argument("--family", required=True)
    v.add_argument("--construction", choices=harness.PAIR_CONSTRUCTIONS, default="abelian-recursive")
    v.add_argument("--seeds", type=int, default=1)
    v.add_argument("--format", choices=("json", "csv"), default="csv")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify_pairs)

    d = sub.add_parser("plotdata", help="aggregate a sweep CSV by n/m and render a figure")
    d.add_argument("input", help="sweep CSV")
    d.add_argument("--out", help="series CSV (figure goes next to it unless --png is given)")
    d.add_argument("--png")
    d.set_defaults(func=cmd_plotdata)

    g = sub.add_parser("subgroups", help="list subgroup orders of a group")
    g.add_argument("--group", required=True)
    g.add_argument("--list", action="store_true", help="include every subgroup's generators")
    g.add_argument("--out")
    g.set_defaults(func=cmd_subgroups)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except HSPError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
