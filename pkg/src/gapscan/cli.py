"""Command-line frontend.

Reports go to stdout (or --out); progress and diagnostics go to stderr.
Exit codes: 0 all checks passed (vacuous included), 1 a claim FAILed on
genuine data (a mathematical finding), 2 usage or configuration error,
3 internal error (identity failure, corrupt checkpoint).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from .claims import (
    PAIR_CLAIMS,
    ClaimId,
    ClaimOutcome,
    Status,
    check_cor_bound,
    check_cor_product,
    check_cube_interval,
    check_identities,
    check_lemma_order,
    check_lemma_ratio,
    check_lemma_sqrt,
    check_theorem,
)
from .errors import (
    CheckpointCorruptError,
    CheckpointMismatchError,
    IdentityCheckError,
)
from .midpoint import compute_record, make_pair
from .primes import UNIVERSE_LIMIT, is_prime, next_prime_above
from .scan import ScanConfig, ScanReport, run_scan

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

RECORD_COLUMNS = (
    "p", "q", "g", "m", "b", "m2",
    "x_lo", "x_hi", "c_lo", "c_hi",
    "alpha_mult", "beta_mult", "delta",
)


def _parse_claims(text: str) -> frozenset[ClaimId]:
    if text.strip().lower() == "all":
        return frozenset(PAIR_CLAIMS)
    claims = set()
    for raw in text.split(","):
        name = raw.strip().upper()
        if not name:
            continue
        try:
            claims.add(ClaimId(name))
        except ValueError:
            known = ", ".join(c.value for c in PAIR_CLAIMS)
            raise ValueError(f"unknown claim {raw.strip()!r}; expected one of {known}")
    if not claims:
        raise ValueError("claim list is empty")
    return frozenset(claims)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapscan",
        description=(
            "Scan consecutive-prime pairs for exact midpoint/odd-multiple "
            "quantities, verify gap claims, track maximal-gap records, and "
            "check prime occupancy between consecutive cubes."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="check every pair in a range")
    scan.add_argument("--from", dest="start", type=int, required=True,
                      help="inclusive lower bound (>= 2)")
    scan.add_argument("--to", dest="stop", type=int, required=True,
                      help="exclusive upper bound (<= 2**63)")
    scan.add_argument("--chunk-size", type=int, default=1 << 24)
    scan.add_argument("--jobs", type=int, default=0,
                      help="worker processes (default: all cores)")
    scan.add_argument("--claims", default="all",
                      help="comma-separated claim names, or 'all'")
    scan.add_argument("--format", choices=("json", "csv"), default="json")
    scan.add_argument("--out", default=None, help="write the report here "
                      "instead of stdout")
    scan.add_argument("--checkpoint", default=None,
                      help="checkpoint file for interrupt/resume")
    scan.add_argument("--violation-cap", type=int, default=100)
    scan.set_defaults(func=_cmd_scan)

    pair = sub.add_parser("pair", help="inspect one consecutive pair")
    pair.add_argument("lower_bound", type=int,
                      help="the pair with the smallest p >= this value")
    pair.add_argument("--format", choices=("json", "csv"), default="json")
    pair.set_defaults(func=_cmd_pair)

    cubes = sub.add_parser("cubes", help="primes between consecutive cubes")
    cubes.add_argument("--max-n", type=int, required=True)
    cubes.add_argument("--format", choices=("json", "csv"), default="json")
    cubes.set_defaults(func=_cmd_cubes)

    records = sub.add_parser("records", help="gap records and extremal ratio")
    records.add_argument("--to", dest="stop", type=int, required=True)
    records.add_argument("--format", choices=("json", "csv"), default="json")
    records.set_defaults(func=_cmd_records)

    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _report_csv(report: ScanReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(("claim", "checked", "passed", "vacuous", "failed"))
    for claim in PAIR_CLAIMS:
        counter = report.per_claim.get(claim)
        if counter is None:
            continue
        writer.writerow(
            (claim.value, counter.checked, counter.passed, counter.vacuous,
             counter.failed)
        )
    return buf.getvalue()


def _progress(done: int, total: int, chunk: tuple[int, int]) -> None:
    print(f"[{done}/{total}] chunk [{chunk[0]}, {chunk[1]}) merged",
          file=sys.stderr)


def _cmd_scan(args: argparse.Namespace) -> int:
    config = ScanConfig(
        start=args.start,
        stop=args.stop,
        chunk_size=args.chunk_size,
        workers=args.jobs if args.jobs > 0 else _default_jobs(),
        claims=_parse_claims(args.claims),
        violation_cap=args.violation_cap,
        checkpoint_path=args.checkpoint,
        output_format=args.format,
    )
    config.validate()
    report = run_scan(config, progress=_progress)
    if args.format == "json":
        _emit(json.dumps(report.to_json_dict(), indent=2), args.out)
    else:
        _emit(_report_csv(report), args.out)
    return EXIT_FINDING if report.total_failed() > 0 else EXIT_OK


def _default_jobs() -> int:
    return os.cpu_count() or 1


def _outcome_json(outcome: ClaimOutcome) -> dict:
    return {
        "claim": outcome.claim.value,
        "pair_p": str(outcome.pair_p),
        "status": outcome.status.value,
        "lhs": str(outcome.lhs),
        "rhs": str(outcome.rhs),
    }


def _cmd_pair(args: argparse.Namespace) -> int:
    lower = args.lower_bound
    if lower > UNIVERSE_LIMIT:
        raise ValueError(f"lower bound {lower} exceeds 2**63")
    p = lower if lower >= 2 and is_prime(lower) else next_prime_above(lower)
    q = next_prime_above(p)

    if p == 2:
        # No integral midpoint for (2, 3): only the cubed gap bound applies.
        outcomes = [check_theorem(p, q - p)]
        pair_fields = {"p": str(p), "q": str(q), "g": str(q - p)}
        record_json = None
        record_row = [str(p), str(q), str(q - p)] + [""] * 10
    else:
        pair = make_pair(p, q)
        record = compute_record(pair)
        outcomes = [
            check_identities(record),
            check_lemma_order(record),
            check_cor_bound(record),
            check_cor_product(record),
            check_lemma_ratio(record),
            check_lemma_sqrt(record),
            check_theorem(pair.p, pair.g),
        ]
        pair_fields = {
            "p": str(pair.p), "q": str(pair.q), "g": str(pair.g),
            "m": str(pair.m), "b": str(pair.b),
        }
        record_json = {
            "m2": str(record.m2),
            "x_lo": str(record.x_lo),
            "x_hi": str(record.x_hi),
            "c_lo": str(record.c_lo),
            "c_hi": str(record.c_hi),
            "alpha_mult": str(record.alpha_mult),
            "beta_mult": str(record.beta_mult),
            "delta": str(record.delta),
        }
        record_row = [
            str(pair.p), str(pair.q), str(pair.g), str(pair.m), str(pair.b),
            str(record.m2), str(record.x_lo), str(record.x_hi),
            str(record.c_lo), str(record.c_hi), str(record.alpha_mult),
            str(record.beta_mult), str(record.delta),
        ]

    if args.format == "json":
        document = {
            "pair": pair_fields,
            "record": record_json,
            "claims": [_outcome_json(o) for o in outcomes],
        }
        _emit(json.dumps(document, indent=2), None)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(RECORD_COLUMNS)
        writer.writerow(record_row)
        writer.writerow(())
        writer.writerow(("claim", "pair_p", "status", "lhs", "rhs"))
        for o in outcomes:
            writer.writerow((o.claim.value, o.pair_p, o.status.value, o.lhs, o.rhs))
        _emit(buf.getvalue(), None)

    failed = [o for o in outcomes if o.status is Status.FAIL]
    if any(o.claim is ClaimId.IDENTITIES for o in failed):
        return EXIT_INTERNAL
    return EXIT_FINDING if failed else EXIT_OK


def _cmd_cubes(args: argparse.Namespace) -> int:
    if args.max_n < 1:
        raise ValueError("--max-n must be >= 1")
    results = [check_cube_interval(n) for n in range(1, args.max_n + 1)]
    if args.format == "json":
        document = {
            "max_n": str(args.max_n),
            "results": [
                {
                    "n": str(r.n),
                    "count": str(r.count),
                    "witness": str(r.witness),
                    "status": r.status.value,
                }
                for r in results
            ],
        }
        _emit(json.dumps(document, indent=2), None)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(("n", "count", "witness", "status"))
        for r in results:
            writer.writerow((r.n, r.count, r.witness, r.status.value))
        _emit(buf.getvalue(), None)
    failing = [r for r in results if r.status is Status.FAIL]
    return EXIT_FINDING if failing else EXIT_OK


def _cmd_records(args: argparse.Namespace) -> int:
    config = ScanConfig(
        start=2,
        stop=args.stop,
        claims=frozenset(),
        workers=_default_jobs(),
    )
    config.validate()
    report = run_scan(config, progress=_progress)
    if args.format == "json":
        ratio = None
        if report.max_ratio is not None:
            ratio = {
                "g_cubed": str(report.max_ratio.g_cubed),
                "p_squared": str(report.max_ratio.p_squared),
                "p": str(report.max_ratio.p),
                "g": str(report.max_ratio.g),
            }
        document = {
            "range": [str(report.start), str(report.stop)],
            "gap_records": [
                {"p": str(r.p), "g": str(r.g)} for r in report.gap_records
            ],
            "max_ratio": ratio,
        }
        _emit(json.dumps(document, indent=2), None)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(("record_type", "p", "g", "g_cubed", "p_squared"))
        for r in report.gap_records:
            writer.writerow(("gap", r.p, r.g, "", ""))
        if report.max_ratio is not None:
            m = report.max_ratio
            writer.writerow(("max_ratio", m.p, m.g, m.g_cubed, m.p_squared))
        _emit(buf.getvalue(), None)
    return EXIT_OK


def run(argv: Sequence[str]) -> int:
    """Parse argv, dispatch, and map errors to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code if exc.code is not None else 0
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except IdentityCheckError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except CheckpointCorruptError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (CheckpointMismatchError, OverflowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
