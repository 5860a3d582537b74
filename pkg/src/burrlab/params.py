from __future__ import annotations

from dataclasses import dataclass

# First excluded values for which no A exists at all.
FORBIDDEN_U = frozenset({3, 5, 6, 9, 10})


class HypothesisError(ValueError):
    """(u, v) lies outside the domain where the critical values are known."""


@dataclass(frozen=True)
class Params:
    """The first two excluded values: u = e_1 = b_1 and v = e_2 = b_2."""

    u: int
    v: int

    def __post_init__(self):
        for name in ("u", "v"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 1:
                raise HypothesisError(f"{name} must be a positive integer")
        if self.u in FORBIDDEN_U:
            raise HypothesisError(f"u in {{3,5,6,9,10}} excluded (got u={self.u}): no sequence A exists")
        if self.u in (1, 2):
            raise HypothesisError(f"u must lie in {{4,7,8}} or be >= 11 (got u={self.u})")
        if self.v < 3 * self.u + 5:
            raise HypothesisError(f"v < 3u+5 (got u={self.u}, v={self.v}, need v >= {3 * self.u + 5})")

    @property
    def period(self) -> int:
        return self.v + 1
