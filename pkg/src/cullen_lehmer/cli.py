"""Batch command-line front end.

Commands stream JSON lines (or CSV with --csv) to stdout: one header line
carrying the timestamp and parameters, then rows in ascending n, then an
optional summary.  Everything after the header is deterministic for a given
command, budget, and cache state, whatever the worker count; wall-clock
never appears in the body, only deterministic work counters do.

Exit codes: 0 success, 2 falsification detected, 3 usage error, 4 I/O or
resource error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

from .cullen import cullen
from .errors import BudgetError, FalsificationError
from .factoring import (
    COMPLETE,
    DEFAULT_BUDGET,
    FactorBudget,
    FactorCache,
    Factorization,
    LehmerSearchResult,
    VERDICT_PRIME,
    WorkCounter,
    general_factor,
    lehmer_constrained_factor,
)
from .predicates import is_carmichael, lehmer_ratio
from .verifier import (
    cascade_as_dict,
    cascade_verify,
    pigeonhole_pair,
    product_as_dict,
    two_three_product_bound,
)

EXIT_OK = 0
EXIT_FALSIFIED = 2
EXIT_USAGE = 3
EXIT_IO = 4

DEFAULT_CACHE = "./cullen-factors.txt"
ENV_PREFIX = "CULLEN_"

SCAN_FIELDS = [
    "kind", "n", "cullen_bits", "status", "verdict", "structured_divisors",
    "witness", "factors", "factor_status", "cofactor", "probable", "ratio",
    "carmichael", "from_cache", "trial_divisions", "rho_iterations",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2
        raise UsageError(message)


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _resolve_int(flag_value: int | None, env_name: str, default: int) -> int:
    if flag_value is not None:
        return flag_value
    env_value = _env(env_name)
    if env_value is not None:
        try:
            return int(env_value)
        except ValueError as exc:
            raise UsageError(f"bad {ENV_PREFIX}{env_name}={env_value!r}") from exc
    return default


def _resolve_cache(flag_value: str | None) -> str:
    return flag_value or _env("CACHE") or DEFAULT_CACHE


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cullen",
        description="Verify that Cullen numbers escape the Lehmer property, "
        "step by step, and scan the related open problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes (default 1, env CULLEN_WORKERS)")
    common.add_argument("--budget", type=int, default=None,
                        help="Pollard-rho iteration budget per value "
                        f"(default {DEFAULT_BUDGET.rho_iterations}, env CULLEN_BUDGET)")
    common.add_argument("--cache", default=None,
                        help=f"factor cache path (default {DEFAULT_CACHE}, env CULLEN_CACHE)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true", help="emit CSV rows")
    fmt.add_argument("--json", action="store_true", help="emit JSON lines (default)")

    p = sub.add_parser("check", parents=[common], help="run the theorem pipeline for one index")
    p.add_argument("n", type=int)

    p = sub.add_parser("scan", parents=[common], help="run the theorem pipeline over a range")
    p.add_argument("n_min", type=int)
    p.add_argument("n_max", type=int)

    p = sub.add_parser("bounds", parents=[common],
                       help="replay the bound cascade and the smooth-prime product")
    p.add_argument("--cap", type=int, default=10_000_000,
                   help="enumeration cap for the product bound (default 1e7)")

    p = sub.add_parser("pigeonhole", parents=[common], help="build the small-combination pair")
    p.add_argument("n", type=int)
    p.add_argument("np", type=int)

    p = sub.add_parser("product-bound", parents=[common],
                       help="certified product over primes 2^a*3^b + 1")
    p.add_argument("--cap", type=int, default=10_000_000)

    p = sub.add_parser("carmichael", parents=[common],
                       help="Korselt scan over a range of indices")
    p.add_argument("n_min", type=int)
    p.add_argument("n_max", type=int)

    p = sub.add_parser("ratio", parents=[common],
                       help="exact phi/gcd ratio scan over a range of indices")
    p.add_argument("n_min", type=int)
    p.add_argument("n_max", type=int)

    p = sub.add_parser("factor", parents=[common], help="factor one Cullen number")
    p.add_argument("n", type=int)

    return parser


# ---------------------------------------------------------------------------
# row computation (top-level so worker processes can receive it)


def _build_row(n: int, budget: FactorBudget, cached: tuple | None) -> dict:
    """Deterministic scan row for one index.

    cached, when given, is the (factors, status, cofactor) triple from the
    cache snapshot; it replaces the general-factoring step but never the
    structured search, which is what produces the verdict.
    """
    counter = WorkCounter()
    result = lehmer_constrained_factor(n)
    c = cullen(n)
    from_cache = False
    if result.verdict == VERDICT_PRIME:
        fact = result.factorization
    elif cached is not None:
        fact = Factorization(c.value, tuple(cached[0]), cached[1], cached[2], cached[3])
        from_cache = True
    else:
        fact = _extend_factorization(result, budget, counter)

    ratio = None
    carmichael = None
    if fact.is_complete:
        ratio = str(lehmer_ratio(n, fact).ratio)
        carmichael = is_carmichael(c.value, fact)
    return {
        "kind": "row",
        "n": n,
        "cullen_bits": c.value.bit_length(),
        "status": "prime" if result.verdict == VERDICT_PRIME else "composite",
        "verdict": result.verdict,
        "structured_divisors": [sp.value for sp in result.structured_divisors],
        "witness": result.witness.detail,
        "factors": fact.summary(),
        "factor_status": fact.status,
        "cofactor": fact.cofactor,
        "probable": list(fact.probable),
        "ratio": ratio,
        "carmichael": carmichael,
        "from_cache": from_cache,
        "trial_divisions": counter.trial_divisions,
        "rho_iterations": counter.rho_iterations,
    }


def _extend_factorization(
    result: LehmerSearchResult, budget: FactorBudget, counter: WorkCounter
) -> Factorization:
    """Push the structured search state toward completeness with the
    general engine, within budget."""
    fact = result.factorization
    if fact.is_complete:
        return fact
    sub = general_factor(fact.cofactor, budget, counter)
    merged: dict[int, int] = dict(fact.factors)
    for p, k in sub.factors:
        merged[p] = merged.get(p, 0) + k
    return Factorization(
        value=fact.value,
        factors=tuple(sorted(merged.items())),
        status=sub.status,
        cofactor=sub.cofactor,
        probable=sub.probable,
    )


def _scan_task(payload: tuple) -> tuple[int, dict]:
    n, budget_tuple, cached = payload
    budget = FactorBudget(*budget_tuple)
    return n, _build_row(n, budget, cached)


def _compute_rows(ns, budget: FactorBudget, cache: FactorCache, workers: int):
    """Yield (n, row) in ascending n; independent indices may be computed
    by a process pool, with a reordering buffer restoring emission order."""
    payloads = []
    for n in ns:
        entry = cache.get(n)
        cached = (
            (entry.factors, entry.status, entry.cofactor, entry.probable)
            if entry
            else None
        )
        payloads.append((n, (budget.trial_bound, budget.rho_iterations), cached))
    if workers <= 1 or len(payloads) <= 1:
        for payload in payloads:
            yield _scan_task(payload)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_scan_task, payload) for payload in payloads]
        for future in futures:  # submission order is ascending n
            yield future.result()


# ---------------------------------------------------------------------------
# emission


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class Emitter:
    """Writes the header (timestamped) and the deterministic body."""

    def __init__(self, out, as_csv: bool, fields: list[str] | None = None):
        self.out = out
        self.as_csv = as_csv
        self.fields = fields
        self._csv_writer = None

    def header(self, command: str, params: dict) -> None:
        meta = {"kind": "header", "command": command, "generated_at": _now(),
                "params": params}
        if self.as_csv:
            self.out.write("# " + json.dumps(meta, separators=(",", ":")) + "\n")
            self._csv_writer = csv.writer(self.out, lineterminator="\n")
            self._csv_writer.writerow(self.fields)
        else:
            self.out.write(json.dumps(meta, separators=(",", ":")) + "\n")

    def row(self, row: dict) -> None:
        if self.as_csv:
            self._csv_writer.writerow([_csv_cell(row.get(f)) for f in self.fields])
        else:
            self.out.write(json.dumps(row, separators=(",", ":")) + "\n")

    def report(self, payload: dict) -> None:
        self.out.write(json.dumps(payload, separators=(",", ":"), default=str) + "\n")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


# ---------------------------------------------------------------------------
# commands


def _cmd_scan(args, out) -> int:
    n_min = getattr(args, "n_min", None)
    if n_min is None:
        n_min = n_max = args.n
    else:
        n_max = args.n_max
    if n_min < 1 or n_max < n_min:
        raise UsageError("need 1 <= n_min <= n_max")
    workers = _resolve_int(args.workers, "WORKERS", 1)
    budget = FactorBudget(rho_iterations=_resolve_int(args.budget, "BUDGET",
                                                      DEFAULT_BUDGET.rho_iterations))
    cache = FactorCache(_resolve_cache(args.cache))
    emitter = Emitter(out, args.csv, SCAN_FIELDS)
    emitter.header(args.command, {"n_min": n_min, "n_max": n_max,
                                  "budget": budget.rho_iterations, "workers": workers,
                                  "cache": str(cache.path)})
    for n, row in _compute_rows(range(n_min, n_max + 1), budget, cache, workers):
        emitter.row(row)
        if row["factor_status"] == COMPLETE and not row["from_cache"] and cache.get(n) is None:
            fact = _row_factorization(n, row)
            cache.put(n, fact)
    return EXIT_OK


def _row_factorization(n: int, row: dict) -> Factorization:
    factors = []
    for tok in row["factors"].split():
        base, _, exp = tok.partition("^")
        factors.append((int(base), int(exp) if exp else 1))
    return Factorization(cullen(n).value, tuple(factors), row["factor_status"],
                         row["cofactor"], tuple(row["probable"]))


RESEARCH_FIELDS = [
    "kind", "n", "factored", "status", "factors", "cofactor", "phi", "gcd",
    "ratio", "carmichael", "from_cache", "trial_divisions", "rho_iterations",
]


def _cmd_research(args, out, command: str) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= n_min <= n_max")
    workers = _resolve_int(args.workers, "WORKERS", 1)
    budget = FactorBudget(rho_iterations=_resolve_int(args.budget, "BUDGET",
                                                      DEFAULT_BUDGET.rho_iterations))
    cache = FactorCache(_resolve_cache(args.cache))
    emitter = Emitter(out, args.csv, RESEARCH_FIELDS)
    emitter.header(command, {"n_min": args.n_min, "n_max": args.n_max,
                             "budget": budget.rho_iterations, "workers": workers,
                             "cache": str(cache.path)})
    ratios: list[Fraction] = []
    unfactored = 0
    carmichael_hits = 0
    total = 0
    for n, row in _compute_rows(range(args.n_min, args.n_max + 1), budget, cache, workers):
        total += 1
        factored = row["factor_status"] == COMPLETE
        phi = g = None
        if factored:
            report = lehmer_ratio(n, _row_factorization(n, row))
            phi, g = str(report.phi), str(report.gcd_value)
        slim = {
            "kind": "row",
            "n": n,
            "factored": factored,
            "status": row["status"],
            "factors": row["factors"],
            "cofactor": row["cofactor"],
            "phi": phi,
            "gcd": g,
            "ratio": row["ratio"] if factored else "unknown",
            "carmichael": row["carmichael"] if factored else "unknown",
            "from_cache": row["from_cache"],
            "trial_divisions": row["trial_divisions"],
            "rho_iterations": row["rho_iterations"],
        }
        emitter.row(slim)
        if factored:
            ratios.append(Fraction(row["ratio"]))
            carmichael_hits += bool(row["carmichael"])
            if not row["from_cache"] and cache.get(n) is None:
                cache.put(n, _row_factorization(n, row))
        else:
            unfactored += 1
    summary = {
        "kind": "summary",
        "rows": total,
        "factored": total - unfactored,
        "unfactored": unfactored,
        "carmichael_count": carmichael_hits,
        "ratio_min": str(min(ratios)) if ratios else None,
        "ratio_mean": str(sum(ratios, Fraction(0)) / len(ratios)) if ratios else None,
        "ratio_max": str(max(ratios)) if ratios else None,
    }
    if args.csv:
        out.write("# " + json.dumps(summary, separators=(",", ":")) + "\n")
    else:
        out.write(json.dumps(summary, separators=(",", ":")) + "\n")
    return EXIT_OK


def _cmd_bounds(args, out) -> int:
    if args.cap < 1000:
        raise UsageError("bounds needs --cap >= 1000 for the product stage")
    emitter = Emitter(out, False)
    emitter.header("bounds", {"cap": args.cap})
    cascade = cascade_verify(args.cap)
    payload = cascade_as_dict(cascade)
    payload["product"] = product_as_dict(cascade.product)
    emitter.report(payload)
    return EXIT_OK if cascade.passed else EXIT_FALSIFIED


def _cmd_pigeonhole(args, out) -> int:
    if args.n < 2 or not 1 <= args.np <= args.n:
        raise UsageError("need n >= 2 and 1 <= np <= n")
    emitter = Emitter(out, False)
    emitter.header("pigeonhole", {"n": args.n, "np": args.np})
    pair = pigeonhole_pair(args.n, args.np)
    emitter.report({"kind": "pair", "n": pair.n, "np": pair.np,
                    "u": pair.u, "v": pair.v, "combo": pair.combo})
    return EXIT_OK


def _cmd_product_bound(args, out) -> int:
    if args.cap < 2:
        raise UsageError("need --cap >= 2")
    emitter = Emitter(out, False)
    emitter.header("product-bound", {"cap": args.cap})
    emitter.report(product_as_dict(two_three_product_bound(args.cap)))
    return EXIT_OK


FACTOR_FIELDS = ["kind", "n", "cullen_bits", "factors", "factor_status",
                 "cofactor", "probable", "from_cache", "trial_divisions",
                 "rho_iterations"]


def _cmd_factor(args, out) -> int:
    if args.n < 1:
        raise UsageError("need n >= 1")
    budget = FactorBudget(rho_iterations=_resolve_int(args.budget, "BUDGET",
                                                      DEFAULT_BUDGET.rho_iterations))
    cache = FactorCache(_resolve_cache(args.cache))
    emitter = Emitter(out, args.csv, FACTOR_FIELDS)
    emitter.header("factor", {"n": args.n, "budget": budget.rho_iterations,
                              "cache": str(cache.path)})
    c = cullen(args.n)
    counter = WorkCounter()
    entry = cache.get(args.n)
    if entry is not None:
        fact, from_cache = entry, True
    else:
        fact, from_cache = general_factor(c.value, budget, counter), False
        if fact.is_complete:
            cache.put(args.n, fact)
    emitter.row({
        "kind": "row",
        "n": args.n,
        "cullen_bits": c.value.bit_length(),
        "factors": fact.summary(),
        "factor_status": fact.status,
        "cofactor": fact.cofactor,
        "probable": list(fact.probable),
        "from_cache": from_cache,
        "trial_divisions": counter.trial_divisions,
        "rho_iterations": counter.rho_iterations,
    })
    return EXIT_OK


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check":
            return _cmd_scan(args, out)
        if args.command == "scan":
            return _cmd_scan(args, out)
        if args.command == "bounds":
            return _cmd_bounds(args, out)
        if args.command == "pigeonhole":
            return _cmd_pigeonhole(args, out)
        if args.command == "product-bound":
            return _cmd_product_bound(args, out)
        if args.command == "carmichael":
            return _cmd_research(args, out, "carmichael")
        if args.command == "ratio":
            return _cmd_research(args, out, "ratio")
        if args.command == "factor":
            return _cmd_factor(args, out)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FalsificationError as exc:
        print(f"FALSIFICATION: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())
