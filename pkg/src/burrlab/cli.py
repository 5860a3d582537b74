"""Command-line front end.

Exit codes: 0 success / agreement / SAT, 1 mathematical negative
(mismatch / UNSAT), 2 usage or hypothesis error, 3 resource limit.

Every deterministic result is appended to a JSON-lines cache (path from
$BURRLAB_CACHE, default ./.burrlab-cache.jsonl) and reused when the same
command is run again with the same inputs.  ``--no-cache`` disables both.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from datetime import datetime, timezone
from typing import Optional

from . import __version__
from .closed_forms import e_closed, table
from .construction import build_A, verify_construction
from .oracle import (DEFAULT_CEILING, DEFAULT_MAX_NODES, LIMIT, SAT, UNSAT, PrefixSpec,
                     check_nonexistence, critical_sweep, nonexistence_case, search_exact)
from .params import Params
from .sumset import psa_bits

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
CACHE_ENV = "BURRLAB_CACHE"
DEFAULT_CACHE = ".burrlab-cache.jsonl"


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, compact separators, integers only."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class RunCache:
    """Append-only JSON-lines log of RunRecords."""

    def __init__(self, path: Optional[str]):
        self.path = path

    def lookup(self, command: str, params: dict) -> Optional[dict]:
        if not self.path or not os.path.exists(self.path):
            return None
        key = dumps(params)
        found = None
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if rec.get("command") == command and dumps(rec.get("params")) == key:
                    found = rec
        return found

    def append(self, command: str, params: dict, payload: dict, **extra) -> dict:
        rec = {
            "command": command,
            "params": params,
            "payload": payload,
            "timestamp": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
            "version": __version__,
            **extra,
        }
        if self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(dumps(rec) + "\n")
        return rec


def _cached_run(cache: RunCache, command: str, params: dict, compute):
    """Return (payload, extra) from the cache or by calling ``compute``."""
    rec = cache.lookup(command, params)
    if rec is not None:
        return rec["payload"], {k: rec[k] for k in ("millis",) if k in rec}
    payload, extra = compute()
    cache.append(command, params, payload, **extra)
    return payload, extra


def parse_int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"malformed integer list: {text!r}")
    if not values:
        raise UsageError("empty integer list")
    return values


def _params(args) -> Params:
    return Params(args.u, args.v)


def _emit(args, payload: dict, text_lines: list[str], csv_text: Optional[str] = None):
    if args.emit == "json":
        print(dumps(payload))
    elif args.emit == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        print("\n".join(text_lines))


# -- construct ---------------------------------------------------------------

def cmd_construct(args, cache: RunCache) -> int:
    p = _params(args)
    if args.k < 0:
        raise UsageError("--k must be >= 0")

    def compute():
        plan = build_A(p, args.k)
        report = verify_construction(plan)
        return {"plan": plan.to_json(), "report": report.to_json()}, {}

    payload, _ = _cached_run(cache, "construct", {"u": p.u, "v": p.v, "k": args.k}, compute)
    rep = payload["report"]
    lines = [
        f"u={p.u} v={p.v} k={args.k}",
        f"A = {payload['plan']['A']}",
        f"window = {rep['window']}",
        f"complement = {rep['computed']}",
        f"predicted  = {rep['predicted']}",
        f"match = {str(rep['match']).lower()}",
    ] + [f"note: {n}" for n in rep["notes"]]
    csv_text = "i,computed,predicted\n" + "".join(
        f"{i},{c},{d}\n" for i, (c, d) in enumerate(zip(rep["computed"], rep["predicted"]), 1))
    _emit(args, payload, lines, csv_text)
    return EXIT_OK if rep["match"] else EXIT_NEGATIVE


# -- critical ----------------------------------------------------------------

def _oracle_column(p: Params, max_k: int, cap: int, side: bool, threads: int, max_nodes: int) -> dict:
    col = {1: {"value": p.u, "status": "given"}, 2: {"value": p.v, "status": "given"}}
    for k, res in critical_sweep(p, max_k, cap, side, threads, max_nodes):
        if res.limited:
            col[k] = {"value": None, "status": "limit"}
        elif res.value is None:
            col[k] = {"value": None, "status": "none<=cap"}
        else:
            col[k] = {"value": res.value, "status": "found", "witness": list(res.witness.a_seq)}
        col[k]["nodes"] = res.nodes
    return col


def cmd_critical(args, cache: RunCache) -> int:
    p = _params(args)
    if args.max_k < 2:
        raise UsageError("--max-k must be >= 2")
    cap = args.cap if args.cap is not None else e_closed(p, args.max_k) + p.period
    params = {"u": p.u, "v": p.v, "max_k": args.max_k, "oracle": args.oracle, "free": args.free,
              "cap": cap if args.oracle else None, "max_nodes": args.max_nodes}

    def compute():
        tab = table(p, args.max_k)
        rows = tab.to_rows()
        if args.oracle:
            side = _oracle_column(p, args.max_k, cap, True, args.threads, args.max_nodes)
            free = _oracle_column(p, args.max_k, cap, False, args.threads, args.max_nodes) if args.free else None
            for row in rows:
                k = row["k"]
                row["oracle"] = side[k]["value"]
                row["oracle_status"] = side[k]["status"]
                row["agree"] = side[k]["value"] == row["e_k"]
                if "witness" in side[k]:
                    row["witness"] = side[k]["witness"]
                if free is not None:
                    row["oracle_free"] = free[k]["value"]
                    row["oracle_free_status"] = free[k]["status"]
        return {"u": p.u, "v": p.v, "cap": params["cap"], "rows": rows}, {}

    payload, _ = _cached_run(cache, "critical", params, compute)
    rows = payload["rows"]
    cols = ["k", "e_k", "provenance"]
    if args.oracle:
        cols += ["oracle", "oracle_status", "agree"]
        if args.free:
            cols += ["oracle_free", "oracle_free_status"]

    def cell(v):
        return "" if v is None else str(v).lower() if isinstance(v, bool) else str(v)

    csv_text = ",".join(cols) + "\n" + "".join(",".join(cell(r.get(c)) for c in cols) + "\n" for r in rows)
    lines = [" ".join(f"{c}={cell(r.get(c))}" for c in cols) for r in rows]
    _emit(args, payload, lines, csv_text)
    if not args.oracle:
        return EXIT_OK
    if any(r["oracle_status"] == "limit" for r in rows):
        return EXIT_LIMIT
    return EXIT_OK if all(r["agree"] for r in rows) else EXIT_NEGATIVE


# -- search ------------------------------------------------------------------

_STATUS_EXIT = {SAT: EXIT_OK, UNSAT: EXIT_NEGATIVE, LIMIT: EXIT_LIMIT}


def cmd_search(args, cache: RunCache) -> int:
    excluded = parse_int_list(args.excluded)
    window = args.window if args.window is not None else max(excluded)
    try:
        spec = PrefixSpec(tuple(excluded), window, args.side_u)
    except ValueError as exc:
        raise UsageError(str(exc))
    params = {"excluded": excluded, "window": window, "side_u": args.side_u, "max_nodes": args.max_nodes}

    def compute():
        out = search_exact(spec, max_nodes=args.max_nodes)
        return out.to_json(timing=False), {"millis": int(out.wall_time * 1000)}

    payload, extra = _cached_run(cache, "search", params, compute)
    shown = dict(payload, millis=extra.get("millis", 0))
    lines = [f"{payload['status']} excluded={payload['excluded']} window={payload['window']}"
             f" nodes={payload['nodes']}"]
    if "witness" in payload:
        lines.append(f"witness = {payload['witness']}")
    _emit(args, shown, lines)
    return _STATUS_EXIT[payload["status"]]


# -- nonexist ----------------------------------------------------------------

def _nonexist_cases(args) -> list[tuple[int, ...]]:
    if args.all:
        cases = [(b,) for b in (3, 5, 6, 9, 10)] + [(1, 9), (2, 15)]
        return cases + [(b, 3 * b + 4) for b in (4, 7, 8, 11)]
    if args.b1 is None:
        raise UsageError("give --b1 [--b2] or --all")
    try:
        return [nonexistence_case(args.b1, args.b2)]
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_nonexist(args, cache: RunCache) -> int:
    cases = _nonexist_cases(args)
    params = {"cases": [list(c) for c in cases], "ceiling": args.ceiling, "max_nodes": args.max_nodes}

    def compute():
        results = []
        for case in cases:
            final, attempts = check_nonexistence(case, args.ceiling, args.max_nodes)
            results.append({
                "case": list(case),
                "status": final.status,
                "window": final.spec.window,
                "attempts": [{"window": a.spec.window, "status": a.status, "nodes": a.nodes_explored}
                             for a in attempts],
            })
        return {"results": results}, {}

    payload, _ = _cached_run(cache, "nonexist", params, compute)
    lines = [f"{r['case']}: {r['status']} at window {r['window']}" for r in payload["results"]]
    _emit(args, payload, lines)
    statuses = {r["status"] for r in payload["results"]}
    if LIMIT in statuses:
        return EXIT_LIMIT
    return EXIT_OK if statuses == {UNSAT} else EXIT_NEGATIVE


# -- bench -------------------------------------------------------------------

def cmd_bench(args, cache: RunCache) -> int:
    if args.elements < 0 or args.window < 0 or args.max_element < 1:
        raise UsageError("bench sizes must be nonnegative (max element positive)")
    rng = random.Random(args.seed)
    pool = range(1, args.max_element + 1)
    seq = sorted(rng.sample(pool, min(args.elements, len(pool))))
    t0 = time.perf_counter_ns()
    bits = psa_bits(seq, args.window)
    psa_ns = time.perf_counter_ns() - t0

    spec = PrefixSpec((4, 17, 22, 35, 40), 40, 4)
    t0 = time.perf_counter_ns()
    out = search_exact(spec)
    search_ns = time.perf_counter_ns() - t0

    payload = {
        "elements": len(seq),
        "window": args.window,
        "psa_micros": psa_ns // 1000,
        "elements_per_sec": len(seq) * 10**9 // max(psa_ns, 1),
        "mask_popcount": bits.bit_count(),
        "oracle_nodes": out.nodes_explored,
        "oracle_micros": search_ns // 1000,
        "oracle_nodes_per_sec": out.nodes_explored * 10**9 // max(search_ns, 1),
        "total_micros": (psa_ns + search_ns) // 1000,
    }
    lines = [f"{k} = {v}" for k, v in payload.items()]
    _emit(args, payload, lines)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=["json", "csv", "text"], default="text")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the run cache")

    parser = argparse.ArgumentParser(prog="burrlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build and verify the explicit sequence")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--k", type=int, default=0, help="number of tail elements (v+1)n")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("critical", parents=[common], help="table of critical values e_k")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--oracle", action="store_true", help="rediscover e_3.. by exhaustive search")
    p.add_argument("--free", action="store_true", help="also run the oracle without the side condition")
    p.add_argument("--cap", type=int, default=None, help="largest candidate value for the oracle")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("search", parents=[common], help="decide one excluded prefix in a window")
    p.add_argument("--excluded", required=True, help="comma separated, increasing")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--side-u", type=int, default=None)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("nonexist", parents=[common], help="confirm a nonexistence case by exhaustion")
    p.add_argument("--b1", type=int)
    p.add_argument("--b2", type=int)
    p.add_argument("--all", action="store_true", help="run every built-in case")
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.set_defaults(func=cmd_nonexist)

    p = sub.add_parser("bench", parents=[common], help="time the subset-sum kernel and the oracle")
    p.add_argument("--elements", type=int, default=1000)
    p.add_argument("--max-element", type=int, default=10_000)
    p.add_argument("--window", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cache = RunCache(None if args.no_cache else os.environ.get(CACHE_ENV, DEFAULT_CACHE))
    try:
        return args.func(args, cache)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
