"""Independent re-check of a plan: Chern data, certificates, threshold, regeneration."""

from __future__ import annotations

from dataclasses import dataclass

from ..chern import twist
from ..engine import chern_of, replay
from ..errors import PlanError
from ..lattice import C0, make_surface
from .common import ConstructionPlan, Status
from .dispatch import build_plan, c2_threshold


@dataclass(frozen=True)
class Finding:
    kind: str
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


def verify_plan(plan: ConstructionPlan) -> list[Finding]:
    """Every mismatch found; an empty list means the plan checks out."""
    req = plan.request
    S = make_surface(req.g, req.e)
    out: list[Finding] = []

    C = twist(S, chern_of(S, plan.chain), plan.normalizing_twist * C0)
    chain_data = [C.rank, C.c1.to_list(), C.c2]
    for label, want in (
        ("request", [req.rank, [req.s, req.t], req.c2]),
        ("computed", [plan.computed.get("rank"), plan.computed.get("c1"), plan.computed.get("c2")]),
    ):
        if chain_data != want:
            out.append(Finding("DivisorSumMismatch", f"chain gives {chain_data}, {label} says {want}"))

    for item in plan.checklist:
        if item.certificate is not None:
            for problem in replay(S, item.certificate):
                out.append(Finding("ReplayFailure", f"{item.name}: {problem}"))
        if item.inequality is not None:
            holds = item.inequality.holds()
            if holds != (item.status is Status.CERTIFIED):
                out.append(Finding("StatusMismatch", f"{item.name}: {item.inequality} vs {item.status.value}"))
        if item.status is Status.CERTIFIED and item.certificate is None and item.inequality is None:
            out.append(Finding("MissingEvidence", item.name))

    try:
        th = c2_threshold(req)
        if (th.value, th.strict) != (plan.c2_threshold, plan.threshold_strict):
            out.append(Finding("ThresholdMismatch",
                               f"recomputed {th.value} (strict={th.strict}), plan has "
                               f"{plan.c2_threshold} (strict={plan.threshold_strict})"))
        fresh = build_plan(req)
        if fresh != plan:
            out.append(Finding("RegenerationMismatch", "replanning the request gives a different plan"))
    except PlanError as exc:
        out.append(Finding("RequestRejected", str(exc)))
    return out
