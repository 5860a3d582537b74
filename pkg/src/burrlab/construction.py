"""Explicit sequences A realising the critical complement u < v < e_3 < ...

The sequence is built in three layers:

* an interval base A1 with P(A1) = [0, u-1];
* generators a_1 = u+1 < a_2 < ... < a_s, chosen so that
  P(A1 u {a_1..a_s}) = [0, u+v] minus {u, v};
* the tail (v+1), 2(v+1), ..., k(v+1).

With k tail elements the complement of P(A) in [0, k(k+1)/2 (v+1) + u + v]
is exactly the first k(k+1) + 2 critical values.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .closed_forms import d_value
from .params import Params
from .sumset import complement_in_window, psa

# P(A1) = [0, u-1] for the small admissible u where the generic rule below
# does not apply.
_SMALL_BASES = {
    1: (),
    2: (1,),
    4: (1, 2),
    7: (1, 2, 3),
    8: (1, 2, 4),
    11: (1, 2, 3, 4),
    12: (1, 2, 3, 5),
}


def interval_base(u: int) -> tuple[int, ...]:
    """Distinct positive integers whose subset sums are exactly [0, u-1].

    Starts from 1, 2, ..., j (the longest run with sum <= u-1) and spreads
    the leftover over the top elements.  The result is checked with the
    engine; u in {3, 5, 6, 9, 10} has no such set and raises ValueError.
    """
    if u < 1:
        raise ValueError(f"u must be positive, got {u}")
    if u in _SMALL_BASES:
        base = _SMALL_BASES[u]
    else:
        target = u - 1
        j = 1
        while (j + 1) * (j + 2) // 2 <= target:
            j += 1
        base = list(range(1, j + 1))
        extra = target - j * (j + 1) // 2
        # bump the top elements by one each, never touching 1 and 2
        bumps = min(extra, j - 2)
        for i in range(j - bumps, j):
            base[i] += 1
        base[-1] += extra - bumps
        base = tuple(base)
    if sum(base) != u - 1 or not psa(base, max(u - 1, 0)).is_interval():
        raise ValueError(f"no interval base with subset sums [0, {u - 1}] for u={u}")
    return base


@dataclass(frozen=True)
class Decomposition:
    """v + 1 = (u+1) + ... + (u+s) + r and r = r_2 + ... + r_s + eps."""

    s: int
    r: int
    eps: int
    r_list: tuple[int, ...]  # r_2 .. r_s

    def r_at(self, t: int) -> int:
        return self.r_list[t - 2]


def decompose(p: Params) -> Decomposition:
    u = p.u
    s, acc = 0, 0
    while acc + (u + s + 1) <= p.v + 1:
        s += 1
        acc += u + s
    r = p.v + 1 - acc
    eps = 1 if r else 0
    assert s >= 3 and 0 <= r <= u + s
    rest = r - eps
    assert rest <= (s - 1) * (u - 1), "r too large to split"

    # fill from r_s downwards
    desc = []
    for _ in range(s - 1):
        take = min(u - 1, rest)
        desc.append(take)
        rest -= take
    r_list = desc[::-1]

    # a jump of u-1 can only be 0 -> u-1, and only once in a sorted list
    jumps = [i for i in range(1, len(r_list)) if r_list[i] - r_list[i - 1] == u - 1]
    assert len(jumps) <= 1
    for i in jumps:
        assert r_list[i - 1] == 0 and r_list[i] == u - 1
        r_list[i] -= 1
        r_list[i - 1] += 1

    dec = Decomposition(s, r, eps, tuple(r_list))
    _check_decomposition(p, dec)
    return dec


def _check_decomposition(p: Params, d: Decomposition):
    u = p.u
    assert sum(u + t for t in range(1, d.s + 1)) + d.r == p.v + 1
    assert 0 <= d.r <= u + d.s
    assert d.eps == (1 if d.r else 0)
    assert sum(d.r_list) + d.eps == d.r
    assert len(d.r_list) == d.s - 1
    assert all(0 <= x <= u - 1 for x in d.r_list)
    assert all(a <= b for a, b in zip(d.r_list, d.r_list[1:]))
    assert all(b - a <= u - 2 for a, b in zip(d.r_list, d.r_list[1:]))


def generators(p: Params, d: Decomposition) -> tuple[int, ...]:
    u, s = p.u, d.s
    gens = [u + 1]
    gens += [u + t + d.r_at(t) for t in range(2, s)]
    gens.append(u + s + d.r_at(s) + d.eps)
    for prev, cur in zip(gens, gens[1:]):
        if not prev < cur <= prev + u:
            raise AssertionError(f"generator step {prev} -> {cur} out of range for u={u}")
    if sum(gens[1:]) + u != p.v:
        raise AssertionError(f"generators {gens} do not sum to v - u")
    return tuple(gens)


def side_condition_violations(seq, u: int) -> list[int]:
    """Elements a > u+1 with a > (sum of the smaller elements) + 1."""
    bad, total = [], 0
    for a in sorted(seq):
        if a > u + 1 and a > total + 1:
            bad.append(a)
        total += a
    return bad


@dataclass(frozen=True)
class GeneratorPlan:
    params: Params
    dec: Decomposition
    base: tuple[int, ...]
    gens: tuple[int, ...]
    tail_count: int

    @property
    def tail(self) -> tuple[int, ...]:
        return tuple(self.params.period * n for n in range(1, self.tail_count + 1))

    @property
    def sequence(self) -> tuple[int, ...]:
        return self.base + self.gens + self.tail

    def to_json(self) -> dict:
        return {
            "u": self.params.u,
            "v": self.params.v,
            "k": self.tail_count,
            "s": self.dec.s,
            "r": self.dec.r,
            "eps": self.dec.eps,
            "r_list": list(self.dec.r_list),
            "base": list(self.base),
            "generators": list(self.gens),
            "tail": list(self.tail),
            "A": list(self.sequence),
        }


def build_A(p: Params, k: int) -> GeneratorPlan:
    if k < 0:
        raise ValueError(f"tail count must be >= 0, got {k}")
    dec = decompose(p)
    plan = GeneratorPlan(p, dec, interval_base(p.u), generators(p, dec), k)
    seq = plan.sequence
    assert all(a < b for a, b in zip(seq, seq[1:]))
    assert not side_condition_violations(seq, p.u)
    return plan


@dataclass(frozen=True)
class VerificationReport:
    window: int
    computed: tuple[int, ...]
    predicted: tuple[int, ...]
    match: bool
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "computed": list(self.computed),
            "predicted": list(self.predicted),
            "match": self.match,
            "notes": list(self.notes),
        }


def predicted_complement(p: Params, k: int) -> tuple[int, ...]:
    m = k * (k + 1) // 2 + 1
    return tuple(d_value(p, i) for i in range(1, 2 * m + 1))


def verify_construction(plan: GeneratorPlan) -> VerificationReport:
    """Compare the engine's complement with the predicted critical prefix.

    A mismatch is reported in the result, never raised.
    """
    p, k = plan.params, plan.tail_count
    window = sum(plan.tail) + p.u + p.v
    mask = psa(plan.sequence, window)
    computed = tuple(complement_in_window(mask))
    predicted = predicted_complement(p, k)
    notes = []
    base_mask = psa(plan.base, max(p.u - 1, 0))
    if not base_mask.is_interval():
        notes.append("base does not generate [0, u-1]")
    bad = side_condition_violations(plan.sequence, p.u)
    if bad:
        notes.append(f"side condition fails at {bad}")
    if p.u + 1 not in mask:
        notes.append("u+1 is not a subset sum")
    return VerificationReport(window, computed, predicted, computed == predicted and not notes, tuple(notes))
