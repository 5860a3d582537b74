"""Windowed subset-sum sets.

P(A) is the set of all sums of distinct terms of A, the empty sum 0
included.  We only ever look at P(A) intersected with a window [0, N],
which depends on the elements of A that are <= N and nothing else.

The mask is a Python int used as a packed bitset: bit x is set iff x is
a subset sum.  Adding an element a is one shift-or truncated to the
window, which CPython executes digit-parallel over the whole mask.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

NAIVE_MAX_SIZE = 24


@dataclass(frozen=True)
class SumsetMask:
    """P(A) restricted to [0, bound], one bit per integer."""

    bound: int
    bits: int

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError(f"window bound must be >= 0, got {self.bound}")
        if not self.bits & 1:
            raise ValueError("bit 0 (the empty sum) must be set")
        if self.bits >> (self.bound + 1):
            raise ValueError("mask has bits above its bound")

    def __contains__(self, x: int) -> bool:
        return 0 <= x <= self.bound and bool(self.bits >> x & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def members(self) -> list[int]:
        return bit_positions(self.bits)

    @property
    def full(self) -> int:
        return (1 << (self.bound + 1)) - 1

    def is_interval(self) -> bool:
        return self.bits == self.full

    def to_hex(self) -> str:
        return format(self.bits, "x")

    @classmethod
    def from_hex(cls, text: str, bound: int) -> "SumsetMask":
        return cls(bound, int(text, 16))

    def to_json(self) -> dict:
        return {"bound": self.bound, "bits": self.to_hex()}


def check_intseq(seq: Iterable[int]) -> tuple[int, ...]:
    """Validate a strictly increasing sequence of positive integers."""
    out = tuple(int(a) for a in seq)
    for prev, cur in zip(out, out[1:]):
        if cur <= prev:
            raise ValueError(f"sequence must be strictly increasing: {prev} then {cur}")
    if out and out[0] < 1:
        raise ValueError(f"elements must be positive, got {out[0]}")
    return out


def empty_mask(bound: int) -> SumsetMask:
    return SumsetMask(bound, 1)


def add_element(mask: SumsetMask, a: int) -> SumsetMask:
    """Return the mask of P(A u {a}) given the mask of P(A)."""
    if a < 1:
        raise ValueError(f"elements must be positive, got {a}")
    if a > mask.bound:
        return mask
    return SumsetMask(mask.bound, mask.bits | ((mask.bits << a) & mask.full))


def shift_or(bits: int, a: int, full: int) -> int:
    """Raw kernel: bits | (bits << a), truncated by ``full``."""
    return bits | ((bits << a) & full)


def psa_bits(seq: Iterable[int], bound: int) -> int:
    full = (1 << (bound + 1)) - 1
    bits = 1
    for a in seq:
        if a <= bound:
            bits |= (bits << a) & full
    return bits


def psa(seq: Sequence[int], bound: int) -> SumsetMask:
    """Subset sums of ``seq`` that are <= ``bound``.

    Elements larger than the window are skipped; they cannot contribute a
    sum inside it.
    """
    seq = check_intseq(seq)
    if bound < 0:
        raise ValueError(f"window bound must be >= 0, got {bound}")
    return SumsetMask(bound, psa_bits(seq, bound))


def naive_psa(seq: Sequence[int]) -> set[int]:
    """Exact, unbounded P(A) by enumerating every subset.  Test oracle."""
    seq = check_intseq(seq)
    if len(seq) > NAIVE_MAX_SIZE:
        raise ValueError(f"naive_psa limited to {NAIVE_MAX_SIZE} elements, got {len(seq)}")
    sums = set()
    for size in range(len(seq) + 1):
        for subset in combinations(seq, size):
            sums.add(sum(subset))
    return sums


def complement_in_window(mask: SumsetMask) -> list[int]:
    """Integers in [0, bound] that are not subset sums, ascending."""
    return bit_positions(mask.full & ~mask.bits)


def bit_positions(bits: int) -> list[int]:
    digits = bin(bits)[:1:-1]
    return [i for i, c in enumerate(digits) if c == "1"]
