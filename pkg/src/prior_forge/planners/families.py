"""Rank-two building blocks and their certified properties.

Each builder returns the rank-two extension together with the checklist
items that establish it is a nontrivial, locally free, simple and prioritary
extension (whenever the construction needs that).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import (
    Extension,
    LineBundle,
    SheafExpr,
    cayley_bacharach,
    ext1_certificate,
    h0_verdict,
    h2_verdict,
    ideal,
)
from ..lattice import C0, F, ZERO, DivisorClass, SurfaceParams, fiber
from .common import ChecklistItem, all_certified, ineq, nonzero, zero


@dataclass(frozen=True)
class RankTwo:
    expr: SheafExpr
    sub: DivisorClass
    quot: DivisorClass
    length: int
    items: tuple
    simple: bool
    prioritary: bool


def _cb(S: SurfaceParams, name: str, sub: DivisorClass, quot: DivisorClass, n: int) -> ChecklistItem:
    ok, cert = cayley_bacharach(S, quot - sub + S.K, n)
    return zero(name, cert)


def fiber_section_family(S: SurfaceParams, b: int, m: int, n: int, tag: str = "E2") -> RankTwo:
    """0 -> O(bf) -> E2 -> I_Z(C0 + (m-b)f) -> 0 with m in {0,1}, b >= 1."""
    sub = fiber(b)
    quot = C0 + fiber(m - b)
    Q = ideal(quot, n, label="Z")
    expr = Extension(LineBundle(sub), Q)
    K = S.K
    items: list[ChecklistItem] = [
        ineq(f"{tag}: b >= 1", b, ">=", 1),
        ineq(f"{tag}: |Z| >= 1", n, ">=", 1),
        nonzero(f"{tag}: extension space nonzero", ext1_certificate(S, Q, LineBundle(sub))),
        _cb(S, f"{tag}: Cayley-Bacharach", sub, quot, n),
        zero(f"{tag}: Hom(O(bf), E2) is scalars", h0_verdict(S, Q, -sub)[1]),
        zero(f"{tag}: Hom(I_Z(Q), O(bf)) = 0", h2_verdict(S, Q, K - sub)[1]),
        zero(f"{tag}: Ext2(O(bf), E2(-f)) = 0", h2_verdict(S, expr, -sub - F)[1]),
        zero(f"{tag}: Ext2(I_Z(Q), O((b-1)f)) = 0", h0_verdict(S, Q, K - sub + F)[1]),
    ]
    ok = all_certified(items)
    return RankTwo(expr, sub, quot, n, tuple(items), ok, ok)


def twisted_section_family(
    S: SurfaceParams, b: int, m: int, d: int, n: int, tag: str = "E2"
) -> RankTwo:
    """0 -> O(-C0 + (b+1)f) -> E2 -> I_Z((m+1)C0 + (d-2b-1)f) -> 0.

    The items give simplicity of E2 and the four vanishings used when E2 is
    extended further.
    """
    sub = DivisorClass(-1, b + 1)
    quot = DivisorClass(m + 1, d - 2 * b - 1)
    Q = ideal(quot, n, label="Z")
    expr = Extension(LineBundle(sub), Q)
    K = S.K
    bf = fiber(b)
    items: list[ChecklistItem] = [
        ineq(f"{tag}: 3b > d - 1", 3 * b, ">", d - 1),
        ineq(f"{tag}: 3b > d + 2(g-1) - e", 3 * b, ">", d + 2 * (S.g - 1) - S.e),
        nonzero(f"{tag}: extension space nonzero", ext1_certificate(S, Q, LineBundle(sub))),
        _cb(S, f"{tag}: Cayley-Bacharach", sub, quot, n),
        zero(f"{tag}: Hom(O(sub), E2) is scalars", h0_verdict(S, Q, -sub)[1]),
        zero(f"{tag}: Hom(I_Z(Q), O(sub)) = 0", h2_verdict(S, Q, K - sub)[1]),
        zero(f"{tag}: h2 E2(K - bf) = 0", h2_verdict(S, expr, K - bf)[1]),
        zero(f"{tag}: h0 E2(K - (b-1)f) = 0", h0_verdict(S, expr, K - bf + F)[1]),
        zero(f"{tag}: h0 E2(K + C0 - bf) = 0", h0_verdict(S, expr, K + C0 - bf)[1]),
        zero(f"{tag}: h0 E2(-bf) = 0", h0_verdict(S, expr, -bf)[1]),
    ]
    ok = all_certified(items)
    return RankTwo(expr, sub, quot, n, tuple(items), ok, ok)


def fiber_quotient_family(S: SurfaceParams, n: int, tag: str = "E2") -> RankTwo:
    """0 -> O_X -> E2 -> I_Z(f) -> 0 with Z generic.

    Simplicity of E2 is not claimed; the rank-four construction built on it
    only needs the vanishings checked later.
    """
    Q = ideal(F, n, label="Z")
    expr = Extension(LineBundle(ZERO), Q)
    items = [
        ineq(f"{tag}: |Z| >= 1", n, ">=", 1),
        nonzero(f"{tag}: extension space nonzero", ext1_certificate(S, Q, LineBundle(ZERO))),
        _cb(S, f"{tag}: Cayley-Bacharach", ZERO, F, n),
    ]
    ok = all_certified(items)
    return RankTwo(expr, ZERO, F, n, tuple(items), False, False)
