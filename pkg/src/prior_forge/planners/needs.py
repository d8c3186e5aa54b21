"""Minimal lengths of generic Z that make a rule fire."""

from __future__ import annotations

from ..lattice import DivisorClass, Effectivity, SurfaceParams, effectivity, h0_upper


def v3_need(S: SurfaceParams, M: DivisorClass) -> int:
    """Least |Z| with h0(I_Z(M)) certified zero (0 when O(M) is non-effective)."""
    if effectivity(S, M).verdict is Effectivity.NON_EFFECTIVE:
        return 0
    return h0_upper(S, M)


def cb_need(S: SurfaceParams, M: DivisorClass) -> int:
    """Least |Z| for which the Cayley-Bacharach test on |M| succeeds."""
    if effectivity(S, M).verdict is Effectivity.NON_EFFECTIVE:
        return 0
    return h0_upper(S, M) + 1
