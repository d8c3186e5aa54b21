"""Pick the theorem case for a request, normalize c1, and assemble the plan."""

from __future__ import annotations

from ..chern import ChernData, euler_char, twist
from ..engine import chern_of
from ..errors import ChecklistFailed, C2BelowThreshold, DivisorSumMismatch, InputOutOfRange
from ..lattice import C0, DivisorClass, SurfaceParams, make_surface
from . import rank3, rank4, rank_r
from .base import Case, Threshold
from .common import ConstructionPlan, PlanRequest

CASES: list[Case] = rank3.CASES + rank4.CASES + rank_r.CASES
BY_TAG = {c.tag: c for c in CASES}
TAGS = tuple(BY_TAG)


def normalize(S: SurfaceParams, req: PlanRequest) -> tuple[int, int, int]:
    """(k, s', c2') with E = E'(k C0) and 0 <= s' < rank."""
    r = req.rank
    k = req.s // r
    C = twist(S, ChernData(r, req.c1, req.c2), -k * C0)
    return k, C.c1.a, C.c2


def select_case(S: SurfaceParams, r: int, s: int, t: int, tag: str | None) -> Case:
    if tag is not None:
        if tag not in BY_TAG:
            raise InputOutOfRange(f"unknown theorem tag {tag!r}; known: {', '.join(TAGS)}")
        return BY_TAG[tag]
    if r == 3:
        return BY_TAG[f"rank3-s{s}"]
    # The rank-4 constructions give stronger section bounds than rank r.
    for case in rank4.CASES:
        if case.applies(S, r, s, t):
            return case
    for case in rank_r.CASES:
        if case.matches_ebar(S.ebar):
            return case
    raise InputOutOfRange(f"no construction covers rank {r}, c1=({s},{t})")


def _threshold(S: SurfaceParams, req: PlanRequest):
    if req.rank < 3:
        raise InputOutOfRange(f"rank must be >= 3, got {req.rank}")
    k, s, c2n = normalize(S, req)
    case = select_case(S, req.rank, s, req.t, req.theorem)
    case.check_inputs(S, req.rank, s, req.t)
    th = case.threshold(S, req.rank, s, req.t)
    shift = c2n - req.c2
    return k, s, c2n, case, Threshold(th.value - shift, th.strict, th.flags, th.note), th


def c2_threshold(req: PlanRequest) -> Threshold:
    """The explicit replacement for "c2 >> 0", in the request's own c2 units."""
    S = make_surface(req.g, req.e)
    return _threshold(S, req)[4]


def build_plan(req: PlanRequest, enforce_threshold: bool = True) -> ConstructionPlan:
    """Plan without rejecting on failed checklist items (input errors still raise).

    With enforce_threshold=False the chain is built even below the c2
    threshold, which is useful for inspecting derived parameters.
    """
    S = make_surface(req.g, req.e)
    k, s, c2n, case, th, th_norm = _threshold(S, req)
    if enforce_threshold and not th.admits(req.c2):
        raise C2BelowThreshold(req.c2, th.value, th.strict, case.tag)
    res = case.build(S, req.rank, s, req.t, c2n)
    C = twist(S, chern_of(S, res.chain), k * C0)
    flags = list(th.flags) + list(res.flags)
    h0_lower = res.h0_lower
    if k < 0:
        h0_lower = 0
        flags.append("h0-bound-not-transported")
    computed = {
        "rank": C.rank,
        "c1": C.c1.to_list(),
        "c2": C.c2,
        "chi": euler_char(S, C),
        "chi_parts": dict(sorted(res.chi.items())),
    }
    return ConstructionPlan(
        theorem=case.tag,
        request=req,
        normalizing_twist=k,
        parameters=res.parameters,
        chain=res.chain,
        checklist=tuple(res.checklist),
        computed=computed,
        h0_lower=h0_lower,
        theorem_h0_bound=res.theorem_h0_bound,
        c2_threshold=th.value,
        threshold_strict=th.strict,
        flags=tuple(sorted(set(flags))),
    )


def plan(req: PlanRequest) -> ConstructionPlan:
    """Plan a request; raises a PlanError subclass when it cannot be certified."""
    p = build_plan(req)
    want = [req.rank, [req.s, req.t], req.c2]
    got = [p.computed["rank"], p.computed["c1"], p.computed["c2"]]
    if got != want:
        raise DivisorSumMismatch(f"chain has Chern data {got}, request asks for {want}")
    failed = p.failed
    if failed:
        raise ChecklistFailed(failed, plan=p)
    return p
