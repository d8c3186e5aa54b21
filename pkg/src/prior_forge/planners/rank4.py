"""Rank-four theorems: c1 = f (two constructions by the sign of ebar) and c1 = C0 + mf."""

from __future__ import annotations

from ..engine import Extension, LineBundle, extension_step, h0_verdict, h1_positive, h2_verdict
from ..errors import InputOutOfRange, NonIntegralParameter
from ..lattice import F, ZERO, DivisorClass, SurfaceParams, fiber, h0_upper
from .base import Case, CaseResult, Threshold, chi_at, length_for_negative_chi
from .common import all_certified, h0_chain_bound, ineq, nonzero, step_items, zero
from .families import RankTwo, fiber_quotient_family, fiber_section_family
from .needs import v3_need


def _ladder_items(S: SurfaceParams, E2: RankTwo, D: DivisorClass):
    """Vanishings at D for E2 and the hypotheses that carry them up the ladder."""
    K = S.K
    e2 = E2.expr
    items = [
        zero("E2: h0 E2(D) = 0", h0_verdict(S, e2, D)[1]),
        zero("E2: h0 E2(K+f+D) = 0", h0_verdict(S, e2, K + F + D)[1]),
        zero("E2: h2 E2(K+D) = 0", h2_verdict(S, e2, K + D)[1]),
        zero("E2: h2 E2(-f+D) = 0", h2_verdict(S, e2, -F + D)[1]),
    ]
    one = LineBundle(ZERO)
    for sign, label in ((1, "D"), (-1, "-D")):
        items.append(zero(f"{label} non-effective", h0_verdict(S, one, sign * D)[1]))
        items.append(zero(f"K+f+2({label}) non-effective", h0_verdict(S, one, K + F + 2 * sign * D)[1]))
    return items


def _finish(S, E2, D, E3_items, E3_simple, E3_prioritary):
    E3 = Extension(E2.expr, LineBundle(D))
    res4 = extension_step(S, E3, E3_simple, E3_prioritary, -D)
    chain = Extension(E3, LineBundle(-D))
    items = list(E2.items) + _ladder_items(S, E2, D) + list(E3_items) + step_items("E4", res4)
    chi = {"E2(-D)": chi_at(S, E2.expr, -D), "E3(D)": chi_at(S, E3, D)}
    return chain, items, chi


class Rank4Fiber(Case):
    """c1 = f: O_X -> E2 -> I_Z(f), then extend by O(D) and O(-D)."""

    def __init__(self, nonnegative: bool):
        self.nonnegative = nonnegative
        self.tag = "rank4-s0-ebar-nonneg" if nonnegative else "rank4-s0-ebar-neg"

    def applies(self, S, r, s, t):
        return r == 4 and s == 0 and t == 1 and (S.ebar >= 0) == self.nonnegative

    def check_inputs(self, S, r, s, t):
        if r != 4:
            raise InputOutOfRange(f"{self.tag} needs rank 4, got {r}")
        if s != 0 or t != 1:
            raise InputOutOfRange(f"{self.tag} needs c1 = f, got ({s},{t})")
        if (S.ebar >= 0) != self.nonnegative:
            want = ">= 0" if self.nonnegative else "< 0"
            raise InputOutOfRange(f"{self.tag} needs ebar {want}, got ebar={S.ebar}")

    def _D(self, S):
        return DivisorClass(1, -1) if self.nonnegative else DivisorClass(1, S.ebar - 1)

    def _offset(self, S):
        """c2 = |Z| + offset."""
        return 2 + S.e if self.nonnegative else 4 * S.g - 2 - S.e

    def threshold(self, S, r, s, t):
        D = self._D(S)
        K = S.K
        E2 = fiber_quotient_family(S, 0)
        E3 = Extension(E2.expr, LineBundle(D))
        need = max(
            1,
            v3_need(S, F + D),
            v3_need(S, F + K + F + D),
            h0_upper(S, -D + F) + 1,
            length_for_negative_chi(chi_at(S, E2.expr, -D)),
            length_for_negative_chi(chi_at(S, E3, D)),
        )
        return Threshold(need + self._offset(S), strict=False)

    def build(self, S, r, s, t, c2):
        n = c2 - self._offset(S)
        D = self._D(S)
        E2 = fiber_quotient_family(S, n)
        one = LineBundle(ZERO)
        E3_items = [
            zero("E3: -D non-effective", h0_verdict(S, one, -D)[1]),
            ineq("E3: |Z| > h0_upper(-D+f)", n, ">", h0_upper(S, -D + F)),
            zero("E3: D non-effective", h0_verdict(S, one, D)[1]),
            nonzero("E3: extension space nonzero", h1_positive(S, E2.expr, -D)[1]),
        ]
        ok = all_certified(E3_items) and all_certified(E2.items)
        chain, items, chi = _finish(S, E2, D, E3_items, ok, ok)
        return CaseResult(
            parameters={"Z": n, "D": D.to_list()},
            chain=chain,
            checklist=items,
            chi=chi,
            h0_lower=1,
            theorem_h0_bound=1,
        )


class Rank4Section(Case):
    """c1 = C0 + mf with m in {0,1}, built on the fiber-section rank-two family."""

    tag = "rank4-s1"

    def applies(self, S, r, s, t):
        return r == 4 and s == 1 and t in (0, 1)

    def check_inputs(self, S, r, s, t):
        if r != 4:
            raise InputOutOfRange(f"{self.tag} needs rank 4, got {r}")
        if s != 1 or t not in (0, 1):
            raise InputOutOfRange(f"{self.tag} needs c1 = C0 + mf with m in {{0,1}}, got ({s},{t})")

    @staticmethod
    def split(S, c2):
        total = c2 - 2 - S.e
        l = total % 3 + 3
        if (total - l) % 3:
            raise NonIntegralParameter(f"rank4-s1: b = ({total} - {l})/3 is not integral")
        return l, (total - l) // 3

    def _pieces(self, S, m, b, l):
        D = DivisorClass(1, -b - 1)
        E2 = fiber_section_family(S, b, m, l)
        return D, E2

    def _b_ok(self, S, m, b):
        """Checks whose outcome moves with b, for every residue l."""
        for l in (3, 4, 5):
            res = self.build(S, 4, 1, m, 3 * b + l + 2 + S.e)
            for it in res.checklist:
                if it.name != "E3: extension space nonzero" and it.status.value == "Failed":
                    return False
        return True

    def b_min(self, S, m, search: int = 64):
        start = max(1, 2 * S.g - 1)
        for b in range(start, start + search):
            if self._b_ok(S, m, b):
                return b
        return start

    def threshold(self, S, r, s, t):
        return Threshold(3 * self.b_min(S, t) + 3 + 2 + S.e, strict=False)

    def build(self, S, r, s, t, c2):
        m = t
        l, b = self.split(S, c2)
        D, E2 = self._pieces(S, m, b, l)
        res3 = extension_step(S, E2.expr, E2.simple, E2.prioritary, D)
        E3_items = [ineq("b > max{0, 2(g-1)}", b, ">", max(0, 2 * (S.g - 1)))]
        E3_items += step_items("E3", res3)
        chain, items, chi = _finish(S, E2, D, E3_items, res3.simple, res3.prioritary)
        return CaseResult(
            parameters={"b": b, "l": l, "Z": l, "m": m, "D": D.to_list()},
            chain=chain,
            checklist=items,
            chi=chi,
            h0_lower=h0_chain_bound(b, S.g),
            theorem_h0_bound=h0_chain_bound(b, S.g),
        )


CASES = [Rank4Fiber(True), Rank4Fiber(False), Rank4Section()]
