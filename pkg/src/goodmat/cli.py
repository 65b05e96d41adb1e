"""Command-line interface.

Subcommands mirror the pipeline stages plus verification utilities:

  rowsums n              signed rowsum triples for order n
  candidates n           compressed candidate sets s_sk / s_sy
  match n                matched compressed quadruples S_q
  solve n [--shard i/N]  encode + solve (optionally one shard of) the instances
  enumerate n            the full pipeline: all inequivalent good matrices
  verify FILE            check quads in a row file against all certificates
  hadamard FILE          build + verify the order-4n skew Hadamard matrices
  oracle n               brute-force ground truth for n ≤ 15
  report DIR             merge shard outputs in DIR into one report

Exit status: 0 on success, 1 on verification failure or exhausted budgets,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .candidates import generate_candidates, write_compressed_rows
from .diophantine import signed_rowsums
from .equiv import canonical_form, dedup
from .errors import (
    GoodmatError,
    InvalidInputError,
    ParseError,
    PartialResultError,
)
from .matching import match_quadruples, write_quadruples
from .pipeline import (
    FilterConfig,
    SearchReport,
    brute_force_oracle,
    build_skew_hadamard,
    enumerate_good_matrices,
    prepare_instances,
    recover_amicable,
    solution_digest,
    verify_definition,
)
from .satsearch import build_instance, export_dimacs, product_rule_holds, write_manifest
from .seqcore import format_row, read_quads, write_quads
from .spectral import paf_certificate


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


def run_cli(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors with code 2
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except PartialResultError as exc:
        print(f"partial result: {exc}", file=sys.stderr)
        return 1
    except (InvalidInputError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GoodmatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goodmat",
        description="Exhaustive enumeration and verification of circulant good matrices.",
    )
    parser.add_argument("--version", action="version", version=f"goodmat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rowsums", help="signed rowsum triples for order n")
    p.add_argument("n", type=int)
    p.set_defaults(handler=_cmd_rowsums)

    p = sub.add_parser("candidates", help="generate compressed candidate sets")
    p.add_argument("n", type=int)
    p.add_argument("--out", type=Path, default=None, help="directory for s_sk.txt / s_sy.txt")
    p.set_defaults(handler=_cmd_candidates)

    p = sub.add_parser("match", help="match compressed quadruples (S_q)")
    p.add_argument("n", type=int)
    p.add_argument("--out", type=Path, default=None, help="directory for s_q.txt")
    p.set_defaults(handler=_cmd_match)

    p = sub.add_parser("solve", help="solve the SAT instances (optionally one shard)")
    _add_search_args(p)
    p.add_argument("--shard", type=_parse_shard, default=None, metavar="i/N",
                   help="solve only instances with index ≡ i (mod N)")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("enumerate", help="run the full enumeration pipeline")
    _add_search_args(p)
    p.set_defaults(handler=_cmd_enumerate, shard=None)

    p = sub.add_parser("verify", help="verify quads in a row file")
    p.add_argument("rowfile", type=Path)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("hadamard", help="build skew Hadamard matrices from a row file")
    p.add_argument("rowfile", type=Path)
    p.add_argument("--out", type=Path, default=None, help="write the matrices as ± rows")
    p.set_defaults(handler=_cmd_hadamard)

    p = sub.add_parser("oracle", help="brute-force enumeration (n ≤ 15)")
    p.add_argument("n", type=int)
    p.add_argument("--out", type=Path, default=None, help="directory for the row file")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("report", help="merge shard outputs from a directory")
    p.add_argument("dir", type=Path)
    p.set_defaults(handler=_cmd_report)
    return parser


def _add_search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("n", type=int)
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for SAT instances")
    p.add_argument("--max-conflicts", type=int, default=None,
                   help="per-instance conflict budget (default: unlimited)")
    p.add_argument("--allow-large", action="store_true",
                   help="permit orders beyond the desk-scale limit")
    p.add_argument("--dimacs", action="store_true",
                   help="also export each instance as a DIMACS .cnf file")


def _parse_shard(text: str) -> tuple[int, int]:
    try:
        i, total = (int(tok) for tok in text.split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i/N, got {text!r}") from None
    if total < 1 or not 0 <= i < total:
        raise argparse.ArgumentTypeError(f"shard {text!r} out of range")
    return i, total


# ── command handlers ─────────────────────────────────────────────────────────

def _cmd_rowsums(args) -> int:
    for triple in sorted(signed_rowsums(args.n)):
        print(f"{triple.x} {triple.y} {triple.z}")
    return 0


def _cmd_candidates(args) -> int:
    cands = generate_candidates(args.n, signed_rowsums(args.n))
    print(f"n={args.n}: |s_sk|={len(cands.s_sk)} |s_sy|={len(cands.s_sy)}")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for name, rows in (("s_sk.txt", cands.s_sk), ("s_sy.txt", cands.s_sy)):
            path = args.out / name
            with open(path, "w") as fp:
                write_compressed_rows(fp, sorted(rows))
            print(f"wrote {path}")
    return 0


def _cmd_match(args) -> int:
    cands = generate_candidates(args.n, signed_rowsums(args.n))
    s_q = match_quadruples(cands, args.n)
    print(f"n={args.n}: |S_q|={len(s_q)}")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / "s_q.txt"
        with open(path, "w") as fp:
            write_quadruples(fp, s_q)
        print(f"wrote {path}")
    return 0


def _cmd_solve(args) -> int:
    return _run_search(args, shard=args.shard)


def _cmd_enumerate(args) -> int:
    return _run_search(args, shard=None)


def _run_search(args, shard) -> int:
    tag = f"n{args.n}"
    if shard is not None:
        tag += f"-shard{shard[0]}of{shard[1]}"
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    instance_quads, _, _ = prepare_instances(args.n, allow_large=args.allow_large)
    if shard is not None:
        instance_quads = instance_quads[shard[0] :: shard[1]]
    instances = [build_instance(cq) for cq in instance_quads]
    manifest_path = out / f"manifest-{tag}.json"
    with open(manifest_path, "w") as fp:
        write_manifest(instances, fp)
    if args.dimacs:
        for idx, inst in enumerate(instances):
            (out / f"instance-{tag}-{idx}.cnf").write_text(export_dimacs(inst))

    partial = None
    try:
        quads, report = enumerate_good_matrices(
            args.n,
            shard=shard,
            seed=args.seed,
            jobs=args.jobs,
            max_conflicts=args.max_conflicts,
            allow_large=args.allow_large,
        )
    except PartialResultError as exc:
        quads, report, partial = exc.solutions, exc.report, exc
        if report is None:
            raise
    rows_path = out / f"solutions-{tag}.rows"
    with open(rows_path, "w") as fp:
        write_quads(fp, (cq.quad for cq in quads))
    report_path = out / f"report-{tag}.json"
    report_path.write_text(report.to_json())
    print(f"n={args.n}: instances={report.instance_count} "
          f"solutions={report.solutions_found} inequivalent={report.inequivalent_count}")
    print(f"wrote {rows_path}")
    print(f"wrote {report_path}")
    print(f"wrote {manifest_path}")
    if partial is not None:
        print(f"warning: conflict budget exhausted; results are not exhaustive "
              f"({partial})", file=sys.stderr)
        return 1
    return 0


_CHECKS = (
    ("definition", lambda q: verify_definition(q)),
    ("paf", lambda q: paf_certificate(q)),
    ("product", lambda q: product_rule_holds(q)),
    ("amicable", lambda q: _no_raise(recover_amicable, q)),
    ("hadamard", lambda q: _no_raise(build_skew_hadamard, q)),
)


def _no_raise(fn, quad) -> bool:
    try:
        fn(quad)
        return True
    except GoodmatError:
        return False


def _cmd_verify(args) -> int:
    with open(args.rowfile) as fp:
        quads = read_quads(fp, validate=False)
    if not quads:
        print(f"error: no quads in {args.rowfile}", file=sys.stderr)
        return 2
    failures = 0
    for idx, quad in enumerate(quads):
        results = [(name, check(quad)) for name, check in _CHECKS]
        ok = all(flag for _, flag in results)
        failures += 0 if ok else 1
        detail = " ".join(f"{name}={'OK' if flag else 'FAIL'}" for name, flag in results)
        print(f"quad {idx} (n={quad.n}): {detail}")
    if failures:
        print(f"{failures} of {len(quads)} quads failed verification", file=sys.stderr)
        return 1
    print(f"all {len(quads)} quads verified")
    return 0


def _cmd_hadamard(args) -> int:
    with open(args.rowfile) as fp:
        quads = read_quads(fp, validate=False)
    if not quads:
        print(f"error: no quads in {args.rowfile}", file=sys.stderr)
        return 2
    matrices = []
    for idx, quad in enumerate(quads):
        h = build_skew_hadamard(quad)  # raises ConstructionError on failure
        matrices.append(h)
        print(f"quad {idx}: skew Hadamard matrix of order {h.shape[0]} verified")
    if args.out is not None:
        with open(args.out, "w") as fp:
            for h in matrices:
                for row in h:
                    fp.write(format_row(row) + "\n")
                fp.write("\n")
        print(f"wrote {args.out}")
    return 0


def _cmd_oracle(args) -> int:
    quads = brute_force_oracle(args.n)
    print(f"n={args.n}: {len(quads)} inequivalent good matrices (brute force)")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / f"oracle-n{args.n}.rows"
        with open(path, "w") as fp:
            write_quads(fp, (cq.quad for cq in quads))
        print(f"wrote {path}")
    return 0


def _cmd_report(args) -> int:
    report_paths = sorted(args.dir.glob("report-*.json"))
    if not report_paths:
        print(f"error: no report-*.json files in {args.dir}", file=sys.stderr)
        return 2
    reports = [SearchReport.from_json(p.read_text()) for p in report_paths]
    orders = {r.n for r in reports}
    if len(orders) != 1:
        print(f"error: mixed orders in {args.dir}: {sorted(orders)}", file=sys.stderr)
        return 2
    n = orders.pop()

    merged_quads = []
    for path in sorted(args.dir.glob("solutions-*.rows")):
        if path.name.endswith("-merged.rows"):
            continue
        with open(path) as fp:
            merged_quads.extend(read_quads(fp))
    canonical = dedup(merged_quads, canonical_form)

    shards = [r.shard for r in reports]
    if any(s is None for s in shards):
        covered = True  # an unsharded run covers everything by itself
    else:
        totals = {s[1] for s in shards}
        covered = len(totals) == 1 and {s[0] for s in shards} == set(range(totals.pop()))

    merged = SearchReport(
        n=n,
        wall_time_s=sum(r.wall_time_s for r in reports),
        instance_count=sum(r.instance_count for r in reports),
        solutions_found=sum(r.solutions_found for r in reports),
        inequivalent_count=len(canonical),
        stage_seconds=_sum_stages(reports),
        solver_stats=_sum_stats(reports),
        shard=None,
        exhaustive=covered,
        digest=solution_digest(canonical),
    )
    rows_path = args.dir / f"solutions-n{n}-merged.rows"
    with open(rows_path, "w") as fp:
        write_quads(fp, (cq.quad for cq in canonical))
    report_path = args.dir / f"report-n{n}-merged.json"
    report_path.write_text(merged.to_json())
    coverage = "complete" if covered else "INCOMPLETE (missing shards?)"
    print(f"merged {len(reports)} reports for n={n}: "
          f"inequivalent={merged.inequivalent_count}, coverage {coverage}")
    print(f"wrote {rows_path}")
    print(f"wrote {report_path}")
    return 0


def _sum_stages(reports) -> dict[str, float]:
    out: dict[str, float] = {}
    for r in reports:
        for key, value in r.stage_seconds.items():
            out[key] = out.get(key, 0.0) + value
    return out


def _sum_stats(reports) -> dict[str, int]:
    out: dict[str, int] = {}
    for r in reports:
        for key, value in r.solver_stats.items():
            out[key] = out.get(key, 0) + value
    return out
