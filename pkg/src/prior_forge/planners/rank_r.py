"""Rank r >= 4: one extension of a direct sum of twisted ideal sheaves by O(bf).

    0 -> O(bf) -> E -> I_{Z_1}(D_1) + ... + I_{Z_{r-1}}(D_{r-1}) -> 0

The four cases differ in b, the divisor family D_i and the lengths |Z_i|;
the checklist (six non-effectivity and vanishing conditions, extension positivity and
Cayley-Bacharach for every summand) is shared.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import (
    Extension,
    LineBundle,
    cayley_bacharach,
    direct_sum,
    ext1_certificate,
    h0_verdict,
    ideal,
)
from ..errors import InputOutOfRange
from ..lattice import F, ZERO, DivisorClass, SurfaceParams, fiber, intersect
from .base import Case, CaseResult, Threshold, chi_at
from .common import h0_chain_bound, ineq, nonzero, zero
from .needs import cb_need, v3_need


def chi_line(S: SurfaceParams, D: DivisorClass) -> int:
    return chi_at(S, LineBundle(D), ZERO)


def pairwise(S: SurfaceParams, divisors) -> int:
    total = 0
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            total += intersect(S, divisors[i], divisors[j])
    return total


@dataclass(frozen=True)
class Layout:
    """Everything about a rank-r instance that does not depend on c2."""

    b: int
    divisors: tuple
    fixed_lengths: tuple  # |Z_1| .. |Z_{r-2}|
    stated_f: int
    base: int  # c2 = base + |Z_{r-1}|
    extra: dict


def last_length_need(S: SurfaceParams, b: int, D_last: DivisorClass) -> int:
    """Least |Z_{r-1}| for which every check on the last summand passes."""
    bf = fiber(b)
    K = S.K
    return max(
        max(0, chi_line(S, bf - D_last)) + 1,
        v3_need(S, D_last - bf),
        v3_need(S, K + F + D_last - bf),
        cb_need(S, D_last - bf + K),
    )


class RankR(Case):
    """Shared planning for the four signs of ebar."""

    ebar_label = ""
    b_shift = 0  # b = r - b_shift + t for the ebar >= -1 cases

    def __init__(self):
        self.tag = f"rankr-ebar-{self.ebar_label}"

    def matches_ebar(self, ebar: int) -> bool:
        raise NotImplementedError

    def applies(self, S, r, s, t):
        return r >= 4 and 0 <= s <= r - 1 and self.matches_ebar(S.ebar)

    def t_min(self, S: SurfaceParams, r: int) -> int:
        """Least t with b >= max{0, 2g-2}."""
        return max(0, 2 * S.g - 2) - (r - self.b_shift)

    def check_inputs(self, S, r, s, t):
        if r < 4:
            raise InputOutOfRange(f"{self.tag} needs rank >= 4, got {r}")
        if not 0 <= s <= r - 1:
            raise InputOutOfRange(f"{self.tag} needs 0 <= s <= r-1, got s={s}")
        if not self.matches_ebar(S.ebar):
            raise InputOutOfRange(f"{self.tag} does not cover ebar={S.ebar}")
        lo = self.t_min(S, r)
        if t < lo:
            raise InputOutOfRange(f"{self.tag} needs t >= {lo}, got t={t}")

    def layout(self, S: SurfaceParams, r: int, s: int, t: int) -> Layout:
        raise NotImplementedError

    def threshold(self, S, r, s, t):
        lay = self.layout(S, r, s, t)
        consistent = lay.base + last_length_need(S, lay.b, lay.divisors[-1]) - 1
        value = max(lay.stated_f, consistent)
        flags = ("f-bound-raised",) if value > lay.stated_f else ()
        return Threshold(value, strict=True, flags=flags)

    def theorem_h0_bound(self, S, r, s, t, b):
        return h0_chain_bound(b, S.g)

    def build(self, S, r, s, t, c2):
        lay = self.layout(S, r, s, t)
        b, Ds = lay.b, lay.divisors
        lengths = list(lay.fixed_lengths) + [c2 - lay.base]
        bf = fiber(b)
        K = S.K
        quots = [ideal(D, n, label=f"Z{i + 1}") for i, (D, n) in enumerate(zip(Ds, lengths))]
        chain = Extension(LineBundle(bf), direct_sum(*quots))
        total = bf
        for D in Ds:
            total = total + D
        items = [
            ineq("c1 reconstruction, C0 coefficient", total.a, "==", s),
            ineq("c1 reconstruction, f coefficient", total.b, "==", t),
            ineq("b >= max{0, 2g-2}", b, ">=", max(0, 2 * S.g - 2)),
        ]
        for i, n in enumerate(lengths):
            items.append(ineq(f"|Z{i + 1}| >= 1", n, ">=", 1))
        idx = range(len(Ds))
        for i in idx:
            for j in idx:
                if i != j:
                    items.append(zero(f"D{i + 1}-D{j + 1} non-effective",
                                      h0_verdict(S, LineBundle(Ds[i]), -Ds[j])[1]))
        for i in idx:
            items.append(zero(f"bf-D{i + 1} non-effective",
                              h0_verdict(S, LineBundle(bf), -Ds[i])[1]))
        for i in idx:
            for j in idx:
                if i != j:
                    items.append(zero(f"D{i + 1}-D{j + 1}+K+f non-effective",
                                      h0_verdict(S, LineBundle(Ds[i]), K + F - Ds[j])[1]))
        for i in idx:
            items.append(zero(f"bf-D{i + 1}+K+f non-effective",
                              h0_verdict(S, LineBundle(bf), K + F - Ds[i])[1]))
        for i in idx:
            items.append(zero(f"h0 I_Z{i + 1}(D{i + 1}-bf) = 0",
                              h0_verdict(S, quots[i], -bf)[1]))
        for i in idx:
            items.append(zero(f"h0 I_Z{i + 1}(K+f+D{i + 1}-bf) = 0",
                              h0_verdict(S, quots[i], K + F - bf)[1]))
        for i in idx:
            items.append(nonzero(f"ext1(I_Z{i + 1}(D{i + 1}), O(bf)) > 0",
                                 ext1_certificate(S, quots[i], LineBundle(bf))))
        for i in idx:
            ok, cert = cayley_bacharach(S, Ds[i] - bf + K, lengths[i])
            items.append(zero(f"Cayley-Bacharach for Z{i + 1}", cert))
        chi_last = chi_line(S, bf - Ds[-1])
        items.append(ineq(f"|Z{len(Ds)}| > max{{0, chi O(bf-D{len(Ds)})}}",
                          lengths[-1], ">", max(0, chi_last)))
        params = {
            "b": b,
            "D": [D.to_list() for D in Ds],
            "Z": lengths,
            "pairwise": pairwise(S, Ds),
            "bf_dot_sum": intersect(S, bf, total - bf),
            "f_b": lay.stated_f,
        }
        params.update(lay.extra)
        flags = []
        if "stated_D_last" in lay.extra and lay.extra["stated_D_last"] != Ds[-1].to_list():
            flags.append("divisor-sum-mismatch")
        chi = {f"O(bf-D{i + 1})": chi_line(S, bf - D) for i, D in enumerate(Ds)}
        return CaseResult(
            parameters=params,
            chain=chain,
            checklist=items,
            chi=chi,
            h0_lower=h0_chain_bound(b, S.g),
            theorem_h0_bound=self.theorem_h0_bound(S, r, s, t, b),
            flags=flags,
        )


def _sum_two_to(r: int) -> int:
    return sum(range(2, r))


class _Telescoping(RankR):
    """ebar in {>0, 0, -1}: D_1 absorbs the C0 part, D_{r-1} closes the sum."""

    def family(self, S, r, s, t, b):
        raise NotImplementedError

    def middle_length(self, S, r, b, i, bf, D):
        raise NotImplementedError

    def stated_middle(self, S, r, b, i, bf, D):
        raise NotImplementedError

    def layout(self, S, r, s, t):
        b = r - self.b_shift + t
        bf = fiber(b)
        Ds, extra = self.family(S, r, s, t, b)
        middle = [self.middle_length(S, r, b, i, bf, Ds[i - 1]) for i in range(2, r - 1)]
        fixed = [1] + middle
        pw = pairwise(S, Ds)
        bsum = sum(intersect(S, bf, D) for D in Ds)
        chi_last = chi_line(S, bf - Ds[-1])
        stated = (
            r - 2
            + sum(self.stated_middle(S, r, b, i, bf, Ds[i - 1]) for i in range(2, r - 1))
            + pw + bsum + max(0, chi_last)
        )
        base = sum(fixed) + pw + bsum
        return Layout(b, tuple(Ds), tuple(fixed), stated, base, extra)


class RankRPositive(_Telescoping):
    ebar_label = "pos"
    b_shift = 2

    def matches_ebar(self, ebar):
        return ebar > 0

    def family(self, S, r, s, t, b):
        S2 = _sum_two_to(r)
        Ds = [DivisorClass(-S2, r - 1 + t)]
        Ds += [DivisorClass(i, r - i) for i in range(2, r - 1)]
        Ds.append(DivisorClass(r - 1 + s, -(b + S2)))
        return Ds, {}

    def _bound(self, S, r, b, i, bf, D):
        return max(0, chi_line(S, bf - D), (i + 1) * (r - i - b + 1))

    def middle_length(self, S, r, b, i, bf, D):
        return self._bound(S, r, b, i, bf, D) + 1

    stated_middle = _bound

    def theorem_h0_bound(self, S, r, s, t, b):
        return r - 1 + t - S.g


class RankRZero(RankRPositive):
    ebar_label = "zero"
    b_shift = 3

    def matches_ebar(self, ebar):
        return ebar == 0

    def middle_length(self, S, r, b, i, bf, D):
        return max(0, (i + 1) * (r - i - b + 1), (i - 1) * (r - i - b + 2)) + 1

    def stated_middle(self, S, r, b, i, bf, D):
        return max(chi_line(S, bf - D), (i + 1) * (r - i - b + 1), (i - 1) * (r - i - b + 2))

    def theorem_h0_bound(self, S, r, s, t, b):
        return h0_chain_bound(b, S.g)


class RankRMinusOne(_Telescoping):
    ebar_label = "minus-one"
    b_shift = 6

    def matches_ebar(self, ebar):
        return ebar == -1

    def family(self, S, r, s, t, b):
        S2 = _sum_two_to(r)
        Ds = [DivisorClass(-S2, r - 3 + t)]
        Ds += [DivisorClass(i, r - 3 * i) for i in range(2, r - 1)]
        stated_last = DivisorClass(r - 1 + s, -(b + sum(r - 3 * j for j in range(2, r))))
        total = fiber(b)
        for D in Ds:
            total = total + D
        Ds.append(DivisorClass(s, t) - total)
        return Ds, {"stated_D_last": stated_last.to_list()}

    def middle_length(self, S, r, b, i, bf, D):
        return max(
            0, chi_line(S, bf - D), (i + 1) * (r - 3 * i - b + 1), (i - 1) * (r - 3 * i - b + 3)
        ) + 1

    def stated_middle(self, S, r, b, i, bf, D):
        return max(0, chi_line(S, bf - D), (i + 1) * (r - 3 * i - b + 1))


class RankRNegative(RankR):
    ebar_label = "lt-minus-one"

    def matches_ebar(self, ebar):
        return ebar < -1

    @staticmethod
    def weight(r: int) -> int:
        return ((r - 1) * (r - 2) + 2) // 2

    def t_min(self, S, r):
        return max(0, 2 * S.g - 2) + self.weight(r) * S.ebar + 1

    def layout(self, S, r, s, t):
        N = self.weight(r)
        b = t - 1 - N * S.ebar
        bf = fiber(b)
        Ds = [DivisorClass(i, i * S.ebar) for i in range(1, r - 1)]
        total = bf
        for D in Ds:
            total = total + D
        Ds.append(DivisorClass(s, t) - total)
        pw = pairwise(S, Ds)
        bsum = sum(intersect(S, bf, D) for D in Ds)
        chi_last = chi_line(S, bf - Ds[-1])
        stated = r - 2 + pw + bsum + max(0, chi_last)
        base = (r - 2) + pw + bsum
        return Layout(b, tuple(Ds), tuple([1] * (r - 2)), stated, base, {"N": N})

    def theorem_h0_bound(self, S, r, s, t, b):
        return t - S.g - self.weight(r) * S.ebar


CASES = [RankRPositive(), RankRZero(), RankRMinusOne(), RankRNegative()]
