"""Rank-three theorems, one per normalized c1 = s*C0 + t*f with s in {0,1,2}."""

from __future__ import annotations

from ..engine import (
    Extension,
    LineBundle,
    extension_step,
    h0_verdict,
    h1_positive,
    h2_verdict,
    ideal,
)
from ..errors import InputOutOfRange, NonIntegralParameter
from ..lattice import C0, F, ZERO, DivisorClass, SurfaceParams, fiber
from .base import Case, CaseResult, Threshold, chi_at, length_for_negative_chi
from .common import asserted, ceil_div, h0_chain_bound, ineq, nonzero, step_items, zero
from .families import fiber_section_family, twisted_section_family
from .needs import v3_need


class Rank3TwoSections(Case):
    """c1 = 2C0 + tf: a fiber-section rank-two bundle extended by O(C0 + tf)."""

    tag = "rank3-s2"

    def applies(self, S, r, s, t):
        return r == 3 and s == 2

    def check_inputs(self, S, r, s, t):
        if r != 3 or s != 2:
            raise InputOutOfRange(f"{self.tag} needs rank 3 and s = 2, got rank {r}, s={s}")
        bound = min(-2, 1 - 2 * S.g)
        if t > bound:
            raise InputOutOfRange(f"{self.tag} needs t <= min(-2, 1-2g) = {bound}, got t={t}")

    @staticmethod
    def _pieces(S, t, n):
        b = -t - 1
        D = DivisorClass(1, t)
        E2 = fiber_section_family(S, b, 0, n)
        return b, D, E2

    def threshold(self, S, r, s, t):
        b, D, E2 = self._pieces(S, t, 0)
        need = max(
            1,
            v3_need(S, E2.quot - D),
            length_for_negative_chi(chi_at(S, E2.expr, -D)),
        )
        return Threshold(need - S.e - 1, strict=False)

    def build(self, S, r, s, t, c2):
        n = c2 + S.e + 1
        b, D, E2 = self._pieces(S, t, n)
        res = extension_step(S, E2.expr, E2.simple, E2.prioritary, D)
        chain = Extension(E2.expr, LineBundle(D))
        items = list(E2.items)
        items.append(ineq("b >= max{0, 2g-2}", b, ">=", max(0, 2 * S.g - 2)))
        items += step_items("E3", res)
        return CaseResult(
            parameters={"b": b, "Z": n, "D": D.to_list()},
            chain=chain,
            checklist=items,
            chi={"E2(-D)": chi_at(S, E2.expr, -D)},
            h0_lower=h0_chain_bound(b, S.g),
            theorem_h0_bound=-t - S.g,
        )


class Rank3ThroughTwistedPair(Case):
    """c1 = C0 + df (s=1) or df (s=0): O(bf) extended by a twisted rank-two bundle."""

    def __init__(self, s: int):
        self.s = s
        self.m = s
        self.tag = f"rank3-s{s}"
        # c2 = modulus*b + l + offset - d with l in the residue window
        self.modulus = 5 if s == 1 else 3

    def applies(self, S, r, s, t):
        return r == 3 and s == self.s

    def check_inputs(self, S, r, s, t):
        if r != 3 or s != self.s:
            raise InputOutOfRange(f"{self.tag} needs rank 3 and s = {self.s}, got rank {r}, s={s}")
        if t < 0:
            raise InputOutOfRange(f"{self.tag} needs d = t >= 0, got t={t}")

    def _offset(self, S):
        return 2 * S.e + 3 if self.s == 1 else S.e + 2

    def _window(self):
        return (0, 4) if self.s == 1 else (1, 3)

    @staticmethod
    def b_min(S: SurfaceParams, d: int) -> int:
        """Least b with b > max{0, 2(g-1), (d-1)/3, (d+2(g-1)-e)/3}."""
        return max(1, 2 * S.g - 1, ceil_div(d, 3), ceil_div(d + 2 * S.g - 1 - S.e, 3))

    def split(self, S, d, c2):
        total = c2 + d - self._offset(S)
        lo, _ = self._window()
        l = (total - lo) % self.modulus + lo
        if (total - l) % self.modulus:
            raise NonIntegralParameter(f"{self.tag}: b = ({total} - {l})/{self.modulus} is not integral")
        return l, (total - l) // self.modulus

    def threshold(self, S, r, s, t):
        lo, _ = self._window()
        value = self.modulus * self.b_min(S, t) + lo + self._offset(S) - t
        return Threshold(value, strict=False)

    def build(self, S, r, s, t, c2):
        d = t
        l, b = self.split(S, d, c2)
        bf = fiber(b)
        K = S.K
        E2 = twisted_section_family(S, b, self.m, d, l)
        chain = Extension(LineBundle(bf), E2.expr)
        items = list(E2.items)
        items.append(ineq("b > max{0, 2(g-1)}", b, ">", max(0, 2 * (S.g - 1))))
        v_nt, c_nt = h1_positive(S, E2.expr, K - bf)
        items.append(nonzero("E3: extension space nonzero", c_nt))
        flags = []
        chi_dual = chi_at(S, E2.expr, K - bf)
        params = {"b": b, "l": l, "Z": l, "d": d}
        if self.s == 1:
            stated = l + 2 * S.e - d + 3 * b + 3
            params["stated_chi_dual_twist"] = stated
            items.append(
                asserted(
                    "E3: extension space nonzero as stated",
                    f"stated chi(E2*(bf)) = {stated} would give a non-positive bound; "
                    f"recomputed chi = {chi_dual}",
                )
            )
            flags.append("s-positivity-sign")
        Qm = ideal(E2.quot - F, l, label="Z")
        items += [
            zero("E3: h0 O(K+f) = 0", h0_verdict(S, LineBundle(ZERO), K + F)[1]),
            zero("E3: h0 O(K+C0) = 0", h0_verdict(S, LineBundle(ZERO), K + C0)[1]),
            zero("E3: Ext2(O(bf), I_Z(Q-f)) = 0", h2_verdict(S, Qm, -bf)[1]),
            zero("E3: h0 E3(K-(b-1)f) = 0", h0_verdict(S, chain, K - bf + F)[1]),
            zero("E3: h0 E3(K+C0-bf) = 0", h0_verdict(S, chain, K + C0 - bf)[1]),
        ]
        chi = {"E2(K-bf)": chi_dual}
        if self.s == 1:
            chi["O(-3C0-(d-3b-2)f)"] = chi_at(S, LineBundle(DivisorClass(-3, 3 * b + 2 - d)), ZERO)
        chain_bound = h0_chain_bound(b, S.g)
        if self.s == 1:
            theorem_bound = chain_bound
        else:
            theorem_bound = (c2 + d + 1 - 3 * S.g - S.e - l) // 3 + 1 - S.g
            if theorem_bound != chain_bound:
                flags.append("h0-bound-gap")
                items.append(
                    asserted(
                        "theorem h0 bound",
                        f"stated bound {theorem_bound} differs from the certified chain "
                        f"bound {chain_bound} by {theorem_bound - chain_bound}",
                    )
                )
        return CaseResult(
            parameters=params,
            chain=chain,
            checklist=items,
            chi=chi,
            h0_lower=chain_bound,
            theorem_h0_bound=theorem_bound,
            flags=flags,
        )


CASES = [Rank3TwoSections(), Rank3ThroughTwistedPair(1), Rank3ThroughTwistedPair(0)]
