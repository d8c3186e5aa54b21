"""Chern data and Riemann-Roch on a ruled surface."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistency, NegativeLength, UnsupportedRank
from .lattice import DivisorClass, SurfaceParams, intersect


@dataclass(frozen=True)
class ChernData:
    rank: int
    c1: DivisorClass
    c2: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")

    def to_list(self) -> list[int]:
        return [self.rank, self.c1.a, self.c1.b, self.c2]

    @classmethod
    def from_list(cls, v) -> ChernData:
        r, a, b, c2 = v
        return cls(int(r), DivisorClass(int(a), int(b)), int(c2))


def line_bundle(D: DivisorClass) -> ChernData:
    return ChernData(1, D, 0)


def ideal_sheaf(D: DivisorClass, n: int) -> ChernData:
    if n < 0:
        raise NegativeLength(f"length of a 0-dimensional scheme must be >= 0, got {n}")
    return ChernData(1, D, n)


def twist(S: SurfaceParams, C: ChernData, D: DivisorClass) -> ChernData:
    r = C.rank
    c1 = C.c1 + r * D
    c2 = C.c2 + (r - 1) * intersect(S, C.c1, D) + (r * (r - 1) // 2) * intersect(S, D, D)
    return ChernData(r, c1, c2)


def dual(C: ChernData) -> ChernData:
    # c2 of the dual agrees with c2 in every rank, but only rank <= 2 is used.
    if C.rank > 2:
        raise UnsupportedRank(f"dual is only provided for rank <= 2, got rank {C.rank}")
    return ChernData(C.rank, -C.c1, C.c2)


def extension_sum(S: SurfaceParams, sub: ChernData, quot: ChernData) -> ChernData:
    """Chern data of the middle term of 0 -> sub -> E -> quot -> 0."""
    return ChernData(
        sub.rank + quot.rank,
        sub.c1 + quot.c1,
        sub.c2 + quot.c2 + intersect(S, sub.c1, quot.c1),
    )


def euler_char(S: SurfaceParams, C: ChernData) -> int:
    """chi = r(1-g) - c1.K/2 + c1^2/2 - c2."""
    c1K = intersect(S, C.c1, S.K)
    c1sq = intersect(S, C.c1, C.c1)
    twice = c1sq - c1K
    if twice % 2:
        raise InternalInconsistency(
            f"c1^2 - c1.K = {twice} is odd for c1={C.c1} on (g={S.g}, e={S.e})"
        )
    return C.rank * (1 - S.g) + twice // 2 - C.c2
