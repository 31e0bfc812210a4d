"""rqlab command line: analyze, scan, verify, unit.

Exit codes: 0 ok, 1 usage or invalid input, 2 D outside the three families,
3 a verification failure or internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .arith import is_squarefree, jacobi, primes_below
from .cache import Cache, make_entry
from .pell import continued_fraction_sqrt, fundamental_unit
from .suites import SUITES, run_suite
from .verdict import InconsistencyError, InvariantRecord, Verdict, classify_case, evaluate

EXIT_OK, EXIT_USAGE, EXIT_SCOPE, EXIT_FAIL = 0, 1, 2, 3
MAX_D = 10**7
CSV_FIELDS = [
    "d", "case", "h2", "h2_narrow", "h2_2d", "norm_eps_d", "norm_eps_2d",
    "fsu_case", "hasse_q", "a1", "sqrt_test", "verdict", "theorem", "confidence",
]
CASE_FILTER = {
    "1": ("Case1-q3mod4", "Case1-q5mod8"),
    "2": ("Case2",),
    "3": ("Case3",),
    "all": ("Case1-q3mod4", "Case1-q5mod8", "Case2", "Case3"),
}
FLUSH_EVERY = 500


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for out-of-scope here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# evaluation with cache


def _compute(D: int):
    """Worker: evaluate one D.  Returns (D, record, verdict) or (D, None, message)."""
    try:
        rec, v = evaluate(D)
    except InconsistencyError as exc:
        return D, None, str(exc)
    return D, rec.to_dict(), v.to_dict()


def _lookup(cache: Cache | None, D: int):
    if cache is None:
        return None
    entry = cache.get(D)
    if entry is None:
        return None
    return entry["record"], entry["verdict"]


def check_d(D: int) -> int:
    if not 2 <= D <= MAX_D:
        raise UsageError(f"D must lie in [2, {MAX_D}], got {D}")
    if not is_squarefree(D):
        raise UsageError(f"D must be squarefree, got {D}")
    return D


def csv_row(record: dict, verdict: dict) -> dict:
    v = Verdict.from_dict(verdict)
    row = {k: record.get(k) for k in CSV_FIELDS[:11]}
    row.update(verdict=v.short(), theorem=v.theorem, confidence=v.confidence)
    return row


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for row in rows:
        w.writerow([_cell(row[k]) for k in CSV_FIELDS])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def _print_record(rec: InvariantRecord, v: Verdict, out):
    print(f"D = {rec.d} = {' * '.join(map(str, rec.primes))}   {rec.case}", file=out)
    print(f"eps_D = {rec.eps_d}   N = {rec.norm_eps_d:+d}", file=out)
    if rec.eps_2d is not None:
        print(f"eps_2D = {rec.eps_2d}   N = {rec.norm_eps_2d:+d}", file=out)
    print(f"Cl_2(K)  = {rec.structure}   narrow {rec.structure_narrow}   r4 = {rec.r4}", file=out)
    if rec.structure_2d is not None:
        print(f"Cl_2(K') = {rec.structure_2d}   narrow {rec.structure_narrow_2d}   r4 = {rec.r4_2d}", file=out)
    for k, s in rec.symbols.items():
        print(f"  {k} = {s:+d}", file=out)
    if rec.fsu_case is not None:
        print(f"units of K1: case {rec.fsu_case}, Q = {rec.hasse_q}, {{{', '.join(rec.fsu_system)}}}", file=out)
        print(f"|A1| = {rec.a1}   sqrt(eps_D eps_2D) in K1: {_cell(rec.sqrt_test)}", file=out)
    if rec.pr1_square is not None:
        print(f"sqrt(p(r+1)) test: {_cell(rec.pr1_square)}", file=out)
    print(v.line(), file=out)
    for n in v.notes:
        print(f"  note: {n}", file=out)


def cmd_analyze(args, out) -> int:
    D = check_d(args.d)
    cache = Cache(args.cache) if args.cache else None
    hit = _lookup(cache, D)
    if hit is None:
        _, record, verdict = _compute(D)
        if record is None:
            print(f"internal inconsistency for D={D}: {verdict}", file=sys.stderr)
            return EXIT_FAIL
        if cache is not None:
            cache.put(make_entry(record, verdict))
    else:
        record, verdict = hit
    rec, v = InvariantRecord.from_dict(record), Verdict.from_dict(verdict)
    if args.json:
        print(json.dumps({"record": record, "verdict": verdict}, indent=2, sort_keys=True), file=out)
    else:
        _print_record(rec, v, out)
    return EXIT_SCOPE if rec.case == "OutOfScope" else EXIT_OK


@dataclass(frozen=True)
class ScanSpec:
    case: str = "all"
    max_d: int = 0
    max_prime: int | None = None
    legendre: int | None = None
    fmt: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        if self.case not in CASE_FILTER:
            raise UsageError(f"unknown case {self.case!r}")
        if self.max_d < 0 or self.max_d > MAX_D:
            raise UsageError(f"--max-d must lie in [0, {MAX_D}]")
        if self.max_prime is not None and self.max_prime < 2:
            raise UsageError("--max-prime must be at least 2")
        if self.legendre not in (None, 1, -1):
            raise UsageError("--legendre must be 1 or -1")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")


def _legendre_of(tag) -> int:
    if tag.case == "Case2":
        a, b = jacobi(tag.p, tag.q1), jacobi(tag.p, tag.q2)
        return a if a == b else 0
    return jacobi(tag.p, tag.q)


def candidates(spec: ScanSpec) -> list[int]:
    """Every D <= max_d in the selected families, ascending."""
    N = spec.max_d
    if N < 15:
        return []
    cap = N if spec.max_prime is None else min(N, spec.max_prime)
    primes = [r for r in primes_below(min(cap, N // 3) + 1) if r > 2]
    fives = [r for r in primes if r % 8 == 5]
    pool = set()
    for p in fives:
        for q in primes_below(min(cap, N // p) + 1):
            if q > 2 and q != p:
                pool.add(p * q)
        threes = [r for r in primes if r % 4 == 3 and p * r * 7 <= N]
        for i, q1 in enumerate(threes):
            for q2 in threes[i + 1 :]:
                if p * q1 * q2 > N:
                    break
                pool.add(p * q1 * q2)
    wanted = CASE_FILTER[spec.case]
    out = []
    for D in sorted(pool):
        tag = classify_case(D)
        if tag.case not in wanted:
            continue
        if spec.max_prime is not None and max(tag.primes) > spec.max_prime:
            continue
        if spec.legendre is not None and _legendre_of(tag) != spec.legendre:
            continue
        out.append(D)
    return out


def run_scan(spec: ScanSpec, cache: Cache | None = None):
    """Evaluate every candidate.  Returns (rows sorted by D, first error or None)."""
    todo = candidates(spec)
    results: dict[int, tuple[dict, dict]] = {}
    missing = []
    for D in todo:
        hit = _lookup(cache, D)
        if hit is None:
            missing.append(D)
        else:
            results[D] = hit
    pending, error = [], None

    def consume(stream):
        nonlocal error
        for D, record, verdict in stream:
            if record is None:
                error = error or (D, verdict)
                continue
            results[D] = (record, verdict)
            if cache is not None:
                pending.append(make_entry(record, verdict))
                if len(pending) >= FLUSH_EVERY:
                    cache.put_many(pending)
                    pending.clear()

    try:
        if spec.jobs == 1 or len(missing) < 2:
            consume(map(_compute, missing))
        else:
            chunk = max(1, len(missing) // (8 * spec.jobs))
            with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
                consume(pool.map(_compute, missing, chunksize=chunk))
    finally:
        if cache is not None and pending:
            cache.put_many(pending)
    rows = [csv_row(*results[D]) for D in sorted(results)]
    return rows, error


def cmd_scan(args, out) -> int:
    spec = ScanSpec(args.case, args.max_d, args.max_prime, args.legendre, args.format, args.jobs)
    cache = Cache(args.cache) if args.cache else None
    rows, error = run_scan(spec, cache)
    text = format_rows(rows, spec.fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"{len(rows)} rows -> {args.out}", file=sys.stderr)
    else:
        out.write(text)
    if error is not None:
        D, msg = error
        print(f"internal inconsistency for D={D}: {msg} (partial report written)", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args, out) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    status = EXIT_OK
    for name in names:
        r = run_suite(name)
        print(r.summary(), file=out)
        if not r.ok:
            print(f"  first counterexample: {r.failures[0]}", file=out)
            status = EXIT_FAIL
    return status


def cmd_unit(args, out) -> int:
    d = args.d
    if d < 2 or math.isqrt(d) ** 2 == d:
        raise UsageError(f"d must be a non-square integer >= 2, got {d}")
    u = fundamental_unit(d)
    a0, period = continued_fraction_sqrt(d)
    print(f"eps_{d} = {u}", file=out)
    print(f"norm = {u.norm:+d}", file=out)
    print(f"sqrt({d}) = [{a0}; {', '.join(map(str, period))}]  (period {len(period)})", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rqlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    default_cache = os.environ.get("RQLAB_CACHE")

    a = sub.add_parser("analyze", help="invariants and verdict for one D")
    a.add_argument("d", type=int)
    a.add_argument("--json", action="store_true", help="print the record as JSON")
    a.add_argument("--cache", default=default_cache, help="JSON-lines cache (default $RQLAB_CACHE)")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("scan", help="evaluate a whole family")
    s.add_argument("--case", choices=list(CASE_FILTER), default="all")
    s.add_argument("--max-d", type=int, required=True)
    s.add_argument("--max-prime", type=int)
    s.add_argument("--legendre", type=int, choices=(1, -1), help="keep D with (p/q) (case 2: both symbols) equal to this")
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--cache", default=default_cache)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", choices=[*SUITES, "all"], required=True)
    v.set_defaults(func=cmd_verify)

    u = sub.add_parser("unit", help="fundamental unit of Q(sqrt d)")
    u.add_argument("d", type=int)
    u.set_defaults(func=cmd_unit)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"rqlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rqlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
