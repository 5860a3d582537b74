"""Critical values e_k in closed form and by the three-term recurrence.

Indices are 1-based everywhere: e_1 = u, e_2 = v, e_3 = u + v + 1, ...
Odd indices 2j+1 give (v+1)j + u, even indices 2j+2 give (v+1)j + v.
The same numbers serve as the d-sequence of the explicit construction.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterator

from .params import Params

PROVENANCE = ("closed", "recurrence", "oracle")


def e_closed(p: Params, k: int) -> int:
    if k < 1:
        raise ValueError(f"index must be >= 1, got {k}")
    j, odd = divmod(k - 1, 2)
    return p.period * j + (p.v if odd else p.u)


d_value = e_closed


def iter_recurrence(p: Params) -> Iterator[int]:
    """Yield e_1, e_2, ... from e_k = e_{k-1} + e_{k-2} - e_{k-3}, e_0 = -1."""
    a, b, c = -1, p.u, p.v
    yield b
    yield c
    while True:
        a, b, c = b, c, c + b - a
        yield c


def e_recurrence(p: Params, k: int) -> int:
    if k < 1:
        raise ValueError(f"index must be >= 1, got {k}")
    for i, value in enumerate(iter_recurrence(p), start=1):
        if i == k:
            return value
    raise AssertionError("unreachable")


def closed_prefix(p: Params, K: int) -> list[int]:
    """e_1..e_K from the closed form, odd and even indices filled by slicing."""
    out = [0] * K
    out[0::2] = range(p.u, p.u + p.period * len(out[0::2]), p.period)
    out[1::2] = range(p.v, p.v + p.period * len(out[1::2]), p.period)
    return out


def recurrence_prefix(p: Params, K: int) -> list[int]:
    a, b, c = -1, p.u, p.v
    out = [b, c]
    append = out.append
    for _ in range(K - 2):
        a, b, c = b, c, c + b - a
        append(c)
    return out[:K]


@dataclass
class CriticalTable:
    params: Params
    entries: list[tuple[int, int, str]] = field(default_factory=list)

    def values(self) -> list[int]:
        return [e for _, e, _ in self.entries]

    def check(self):
        vals = self.values()
        if vals[:2] != [self.params.u, self.params.v][: len(vals)]:
            raise AssertionError("table must start with u, v")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise AssertionError("table values must increase")

    def to_rows(self) -> list[dict]:
        return [{"k": k, "e_k": e, "provenance": prov} for k, e, prov in self.entries]

    def to_json(self) -> dict:
        return {"u": self.params.u, "v": self.params.v, "entries": self.to_rows()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["k", "e_k", "provenance"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.to_rows())
        return buf.getvalue()

    @classmethod
    def from_json(cls, data: dict | str) -> "CriticalTable":
        if isinstance(data, str):
            data = json.loads(data)
        params = Params(data["u"], data["v"])
        return cls(params, [(r["k"], r["e_k"], r["provenance"]) for r in data["entries"]])


def table(p: Params, K: int) -> CriticalTable:
    if K < 2:
        raise ValueError(f"table needs K >= 2, got {K}")
    t = CriticalTable(p, [(k, e_closed(p, k), "closed") for k in range(1, K + 1)])
    t.check()
    return t
