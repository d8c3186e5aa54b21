"""Numerical divisor lattice of a ruled surface.

Classes live in Num(X) = Z C0 + Z f with C0^2 = -e, C0.f = 1, f^2 = 0.
Everything here is exact integer arithmetic on immutable values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvalidSurface


@dataclass(frozen=True, order=True)
class DivisorClass:
    """The class a*C0 + b*f."""

    a: int
    b: int

    def __add__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(self.a - other.a, self.b - other.b)

    def __neg__(self) -> DivisorClass:
        return DivisorClass(-self.a, -self.b)

    def __mul__(self, k: int) -> DivisorClass:
        return DivisorClass(k * self.a, k * self.b)

    __rmul__ = __mul__

    def to_list(self) -> list[int]:
        return [self.a, self.b]

    @classmethod
    def from_list(cls, pair) -> DivisorClass:
        a, b = pair
        return cls(int(a), int(b))

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


ZERO = DivisorClass(0, 0)
C0 = DivisorClass(1, 0)
F = DivisorClass(0, 1)


def fiber(b: int) -> DivisorClass:
    """The pullback of a degree-b divisor on the base curve."""
    return DivisorClass(0, b)


@dataclass(frozen=True)
class SurfaceParams:
    g: int
    e: int

    @property
    def ebar(self) -> int:
        return self.e - 2 * self.g + 2

    @property
    def K(self) -> DivisorClass:
        return DivisorClass(-2, -self.ebar)


def make_surface(g: int, e: int) -> SurfaceParams:
    if g < 0 or e < 0:
        raise InvalidSurface(f"need g >= 0 and e >= 0, got g={g}, e={e}")
    return SurfaceParams(int(g), int(e))


def intersect(S: SurfaceParams, D1: DivisorClass, D2: DivisorClass) -> int:
    return D1.a * D2.b + D2.a * D1.b - D1.a * D2.a * S.e


class Effectivity(str, enum.Enum):
    NON_EFFECTIVE = "NonEffective"
    EFFECTIVE = "Effective"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class EffectivityVerdict:
    verdict: Effectivity
    reason: str


def effectivity(S: SurfaceParams, D: DivisorClass) -> EffectivityVerdict:
    """Decide effectivity from the numerical class alone.

    NonEffective is the contrapositive of "effective implies a, b >= 0".
    Effective needs b > 2g - 2, where h0(O_C(b)) = b + 1 - g > 0 and
    O_X(bf) injects into O_X(aC0 + bf) for a >= 0.  The band
    0 <= b <= 2g - 2 depends on the actual divisor on C.
    """
    if D.a < 0:
        return EffectivityVerdict(Effectivity.NON_EFFECTIVE, "a<0")
    if D.b < 0:
        return EffectivityVerdict(Effectivity.NON_EFFECTIVE, "b<0")
    if D.b > 2 * S.g - 2:
        return EffectivityVerdict(Effectivity.EFFECTIVE, "b>2g-2")
    return EffectivityVerdict(Effectivity.UNKNOWN, "0<=b<=2g-2")


def h0_upper(S: SurfaceParams, D: DivisorClass) -> int:
    """Upper bound for h0(O_X(D)) from the symmetric-power filtration.

    Sum over j = 0..a of max(0, b - j*e + 1).
    """
    if D.a < 0 or D.b < 0:
        return 0
    return sum(max(0, D.b - j * S.e + 1) for j in range(D.a + 1))


def curve_h0_interval(g: int, deg: int) -> tuple[int, int]:
    """Range of h0 for a degree-`deg` line bundle on a genus-g curve.

    Outside the special range this is exact Riemann-Roch; inside it the
    upper end is the Clifford bound floor(deg/2) + 1.
    """
    if deg < 0:
        return (0, 0)
    if deg > 2 * g - 2:
        return (deg + 1 - g, deg + 1 - g)
    return (max(0, deg + 1 - g), deg // 2 + 1)
