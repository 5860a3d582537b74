"""Exhaustive search for finite sequences with a prescribed complement.

Given excluded values B and a window W, decide whether some finite set
A of positive integers <= W has P(A) n [0, W] = [0, W] minus B.  Elements
above W cannot change the window, so a SAT answer extends to sequences
with a free tail, and UNSAT rules out every sequence whatsoever whose
complement starts with B below W.

The search picks elements in increasing order.  Three pruning rules keep
it small, each of which can be switched off to certify that it never
loses a solution:

  P1  drop a state whose mask already contains an excluded value;
  P2  the next element may not exceed the smallest required value g that
      is still missing, because every later element is larger still and
      could not produce g;
  P3  skip an element whose addition would cover an excluded value.

With the side condition on (parameter u), every chosen a > u+1 must be at
most the sum of the smaller chosen elements plus one.  Appending huge
elements is then no longer free: a finite A extends to an infinite one
without touching the window only if sum(A) >= W, since the next element
is capped at sum(A) + 1.  Witnesses are required to meet that bound, which
the search reaches by adding further elements when needed.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .closed_forms import e_closed
from .construction import side_condition_violations
from .params import Params
from .sumset import complement_in_window, psa, psa_bits

SAT = "SAT"
UNSAT = "UNSAT"
LIMIT = "LIMIT"

DEFAULT_MAX_NODES = 20_000_000
DEFAULT_MAX_WINDOW = 4096
DEFAULT_CEILING = 512


@dataclass(frozen=True)
class Pruning:
    p1: bool = True
    p2: bool = True
    p3: bool = True

    def to_json(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "p3": self.p3}


ALL_PRUNING = Pruning()
NO_PRUNING = Pruning(False, False, False)


@dataclass(frozen=True)
class PrefixSpec:
    excluded: tuple[int, ...]
    window: int
    side_condition_u: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "excluded", tuple(int(x) for x in self.excluded))
        ex = self.excluded
        if not ex:
            raise ValueError("excluded list must be nonempty")
        if ex[0] < 1 or any(b <= a for a, b in zip(ex, ex[1:])):
            raise ValueError(f"excluded values must be positive and strictly increasing: {list(ex)}")
        if self.window < ex[-1]:
            raise ValueError(f"window {self.window} is below max excluded {ex[-1]}")
        if self.side_condition_u is not None and self.side_condition_u < 1:
            raise ValueError("side condition u must be positive")

    def to_json(self) -> dict:
        return {"excluded": list(self.excluded), "window": self.window, "side_u": self.side_condition_u}


@dataclass(frozen=True)
class SearchWitness:
    a_seq: tuple[int, ...]
    complement: tuple[int, ...]


@dataclass
class SearchOutcome:
    status: str
    spec: PrefixSpec
    witness: Optional[SearchWitness] = None
    nodes_explored: int = 0
    wall_time: float = 0.0
    pruning: Pruning = ALL_PRUNING
    reason: str = ""

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "status": self.status,
            "excluded": list(self.spec.excluded),
            "window": self.spec.window,
            "side_u": self.spec.side_condition_u,
            "nodes": self.nodes_explored,
        }
        if self.witness is not None:
            out["witness"] = list(self.witness.a_seq)
        if self.status == UNSAT:
            out["pruning"] = self.pruning.to_json()
        if self.status == LIMIT:
            out["reason"] = self.reason
        if timing:
            out["millis"] = int(self.wall_time * 1000)
        return out


class _Limit(Exception):
    pass


def _dfs(spec: PrefixSpec, pruning: Pruning, max_nodes: int):
    """Return (witness tuple or None, nodes)."""
    W = spec.window
    full = (1 << (W + 1)) - 1
    excl = 0
    for b in spec.excluded:
        excl |= 1 << b
    target = full & ~excl
    side_u = spec.side_condition_u
    p1, p2, p3 = pruning.p1, pruning.p2, pruning.p3

    def upper(mask: int, last: int, total: int) -> int:
        hi = W
        missing = target & ~mask
        if not missing:
            # window complete; only an unextendable side-condition state may grow
            if side_u is None or total >= W:
                return last
        elif p2:
            hi = (missing & -missing).bit_length() - 1
        if side_u is not None:
            hi = min(hi, max(side_u + 1, total + 1))
        return hi

    if target == 1 and (side_u is None or W == 0):
        return (), 0
    nodes = 0
    path: list[int] = []
    # frame: [mask, total, next candidate, highest candidate]
    stack = [[1, 0, 1, upper(1, 0, 0)]]
    while stack:
        frame = stack[-1]
        mask, total, a, hi = frame
        if a > hi:
            stack.pop()
            if path:
                path.pop()
            continue
        frame[2] = a + 1
        new = mask | ((mask << a) & full)
        if p3 and new & excl:
            continue
        nodes += 1
        if nodes > max_nodes:
            raise _Limit(nodes)
        if new == target and (side_u is None or total + a >= W):
            path.append(a)
            return tuple(path), nodes
        if p1 and new & excl:
            continue
        path.append(a)
        stack.append([new, total + a, a + 1, upper(new, a, total + a)])
    return None, nodes


def search_exact(spec: PrefixSpec, pruning: Pruning = ALL_PRUNING,
                 max_nodes: int = DEFAULT_MAX_NODES,
                 max_window: int = DEFAULT_MAX_WINDOW) -> SearchOutcome:
    """Decide whether the excluded prefix is realisable inside the window."""
    start = time.perf_counter()
    if spec.window > max_window:
        return SearchOutcome(LIMIT, spec, pruning=pruning,
                             reason=f"window {spec.window} exceeds limit {max_window}")
    try:
        found, nodes = _dfs(spec, pruning, max_nodes)
    except _Limit as exc:
        return SearchOutcome(LIMIT, spec, nodes_explored=exc.args[0], pruning=pruning,
                             wall_time=time.perf_counter() - start,
                             reason=f"node limit {max_nodes} exceeded")
    elapsed = time.perf_counter() - start
    if found is None:
        return SearchOutcome(UNSAT, spec, nodes_explored=nodes, wall_time=elapsed, pruning=pruning)
    comp = tuple(complement_in_window(psa(found, spec.window)))
    # the witness is re-checked independently of the search state
    if comp != spec.excluded:
        raise AssertionError(f"witness {found} has complement {comp}, expected {spec.excluded}")
    if spec.side_condition_u is not None and (side_condition_violations(found, spec.side_condition_u)
                                              or sum(found) < spec.window):
        raise AssertionError(f"witness {found} violates the side condition or cannot be extended")
    return SearchOutcome(SAT, spec, SearchWitness(found, comp), nodes, elapsed, pruning)


@dataclass
class MinNextResult:
    value: Optional[int]
    witness: Optional[SearchWitness]
    outcomes: list[SearchOutcome] = field(default_factory=list)

    @property
    def limited(self) -> bool:
        return any(o.status == LIMIT for o in self.outcomes)

    @property
    def nodes(self) -> int:
        return sum(o.nodes_explored for o in self.outcomes)


def _candidate(args):
    fixed, t, side_u, max_nodes = args
    return search_exact(PrefixSpec(tuple(fixed) + (t,), t, side_u), max_nodes=max_nodes)


def min_next_excluded(p: Params, fixed: Sequence[int], cap: int, side_condition: bool = True,
                      threads: int = 1, max_nodes: int = DEFAULT_MAX_NODES) -> MinNextResult:
    """Least t > max(fixed), t <= cap, such that fixed + [t] is realisable in [0, t].

    Every candidate below the answer is searched to exhaustion and its
    UNSAT outcome is kept in ``outcomes``.  A LIMIT on a smaller candidate
    stops the sweep with value None, since minimality can then no longer be
    certified.
    """
    fixed = tuple(fixed)
    if len(fixed) < 2 or fixed[:2] != (p.u, p.v):
        raise ValueError(f"fixed prefix must start with u, v = {p.u}, {p.v}")
    if any(b <= a for a, b in zip(fixed, fixed[1:])):
        raise ValueError("fixed prefix must be strictly increasing")
    if cap <= fixed[-1]:
        raise ValueError(f"cap {cap} must exceed {fixed[-1]}")
    side_u = p.u if side_condition else None
    candidates = range(fixed[-1] + 1, cap + 1)
    jobs = [(fixed, t, side_u, max_nodes) for t in candidates]
    result = MinNextResult(None, None)

    if threads <= 1:
        outcomes = map(_candidate, jobs)
        for out in outcomes:
            result.outcomes.append(out)
            if out.status != UNSAT:
                break
    else:
        # batches of `threads` candidates; the minimum is taken in candidate order
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for i in range(0, len(jobs), threads):
                batch = list(pool.map(_candidate, jobs[i:i + threads]))
                stop = next((j for j, o in enumerate(batch) if o.status != UNSAT), None)
                result.outcomes.extend(batch if stop is None else batch[:stop + 1])
                if stop is not None:
                    break

    last = result.outcomes[-1] if result.outcomes else None
    if last is not None and last.status == SAT:
        result.value = last.spec.excluded[-1]
        result.witness = last.witness
    return result


NONEXISTENCE_CASES = {
    "b1=3": (3,),
    "b1=5": (5,),
    "b1=6": (6,),
    "b1=9": (9,),
    "b1=10": (10,),
    "b1=1,b2=9": (1, 9),
    "b1=2,b2=15": (2, 15),
}


def nonexistence_case(b1: int, b2: Optional[int] = None) -> tuple[int, ...]:
    """Excluded prefix for one of the cases where no sequence A exists."""
    if b2 is None:
        if b1 not in (3, 5, 6, 9, 10):
            raise ValueError(f"b1={b1} alone is not a nonexistence case")
        return (b1,)
    if (b1, b2) in ((1, 9), (2, 15)) or b2 == 3 * b1 + 4:
        return (b1, b2)
    raise ValueError(f"(b1, b2) = ({b1}, {b2}) is not a nonexistence case")


def check_nonexistence(excluded: Sequence[int], ceiling: int = DEFAULT_CEILING,
                       max_nodes: int = DEFAULT_MAX_NODES) -> tuple[SearchOutcome, list[SearchOutcome]]:
    """Search with window max(excluded), doubling up to ``ceiling`` while SAT.

    Returns the final outcome and all attempts.  UNSAT at some window proves
    no A has this complement prefix; SAT at the ceiling is a defect signal.
    """
    excluded = tuple(excluded)
    window = excluded[-1]
    attempts = []
    while True:
        out = search_exact(PrefixSpec(excluded, window), max_nodes=max_nodes)
        attempts.append(out)
        if out.status != SAT or window >= ceiling:
            return out, attempts
        window = min(2 * window, ceiling)


@dataclass
class StructureReport:
    prefix: tuple[int, ...]
    divisible_checked: tuple[int, ...]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "divisible_checked": list(self.divisible_checked),
                "violations": list(self.violations), "ok": self.ok}


def analyze_witness(w: SearchWitness, p: Params) -> StructureReport:
    """Check a SAT witness against the structure every such sequence must have.

    (i) a prefix A1 with subset sums [0, u+v] minus {u, v}, followed by an
        element larger than u+1 (or by nothing);
    (ii) the elements after A1 are multiples of v+1, up to the first index m
         with sum(a_1..a_m) + v >= largest excluded value;
    (iii) the elements below u form a chain: each is at most one more than the
          sum of those before it, and together they sum to u-1.
    """
    u, v = p.u, p.v
    seq = tuple(w.a_seq)
    excluded = tuple(w.complement)
    violations = []

    prefix = None
    target = ((1 << (u + v + 1)) - 1) & ~(1 << u) & ~(1 << v)
    for i in range(len(seq) + 1):
        if psa_bits(seq[:i], u + v) == target and (i == len(seq) or seq[i] > u + 1):
            prefix = seq[:i]
            break
    if prefix is None:
        violations.append("(i) no prefix with subset sums [0,u+v] minus {u,v}")
        prefix = ()

    rest = seq[len(prefix):]
    checked = []
    if len(excluded) >= 3 and prefix:
        d_k = excluded[-1]
        running = 0
        for a in rest:
            checked.append(a)
            if a % p.period:
                violations.append(f"(ii) {a} is not divisible by v+1={p.period}")
            running += a
            if running + v >= d_k:
                break

    total = 0
    for a in (x for x in seq if x < u):
        if a > total + 1:
            violations.append(f"(iii) {a} exceeds running sum {total} + 1")
        total += a
    if total != u - 1:
        violations.append(f"(iii) elements below u sum to {total}, not u-1={u - 1}")

    return StructureReport(prefix, tuple(checked), violations)


def critical_sweep(p: Params, max_k: int, cap: int, side_condition: bool = True,
                   threads: int = 1, max_nodes: int = DEFAULT_MAX_NODES):
    """Rediscover e_3..e_max_k one at a time, feeding back the closed-form prefix.

    Yields (k, MinNextResult).  The fixed prefix is always the closed-form
    e_1..e_{k-1}, so one disagreement does not cascade.
    """
    for k in range(3, max_k + 1):
        fixed = [e_closed(p, i) for i in range(1, k)]
        if cap <= fixed[-1]:
            yield k, MinNextResult(None, None)
            continue
        yield k, min_next_excluded(p, fixed, cap, side_condition, threads, max_nodes)
