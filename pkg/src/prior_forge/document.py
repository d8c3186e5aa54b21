"""PlanDocument: the JSON form of a construction plan.

Documents embed the full chain and every certificate trace, so a document
can be checked without the context that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .engine import cert_from_dict, cert_to_dict, expr_from_dict, expr_to_dict
from .planners.common import ChecklistItem, ConstructionPlan, Inequality, PlanRequest, Status

SCHEMA_VERSION = "1"


class DocumentError(ValueError):
    """A document that cannot be parsed into a plan."""


def item_to_dict(it: ChecklistItem) -> dict:
    return {
        "name": it.name,
        "status": it.status.value,
        "certificate": None if it.certificate is None else cert_to_dict(it.certificate),
        "inequality": None
        if it.inequality is None
        else {"lhs": it.inequality.lhs, "op": it.inequality.op, "rhs": it.inequality.rhs},
        "note": it.note,
    }


def item_from_dict(d: dict) -> ChecklistItem:
    iq = d.get("inequality")
    cert = d.get("certificate")
    return ChecklistItem(
        name=d["name"],
        status=Status(d["status"]),
        certificate=None if cert is None else cert_from_dict(cert),
        inequality=None if iq is None else Inequality(int(iq["lhs"]), iq["op"], int(iq["rhs"])),
        note=d.get("note", ""),
    )


def plan_to_dict(p: ConstructionPlan) -> dict:
    return {
        "theorem": p.theorem,
        "normalizing_twist": p.normalizing_twist,
        "parameters": p.parameters,
        "chain": expr_to_dict(p.chain),
        "checklist": [item_to_dict(it) for it in p.checklist],
        "computed": p.computed,
        "h0_lower": p.h0_lower,
        "theorem_h0_bound": p.theorem_h0_bound,
        "c2_threshold": p.c2_threshold,
        "threshold_strict": p.threshold_strict,
        "flags": list(p.flags),
    }


def plan_from_dict(request: PlanRequest, d: dict) -> ConstructionPlan:
    return ConstructionPlan(
        theorem=d["theorem"],
        request=request,
        normalizing_twist=int(d["normalizing_twist"]),
        parameters=d["parameters"],
        chain=expr_from_dict(d["chain"]),
        checklist=tuple(item_from_dict(x) for x in d["checklist"]),
        computed=d["computed"],
        h0_lower=int(d["h0_lower"]),
        theorem_h0_bound=int(d["theorem_h0_bound"]),
        c2_threshold=int(d["c2_threshold"]),
        threshold_strict=bool(d["threshold_strict"]),
        flags=tuple(d["flags"]),
    )


def warnings_of(p: ConstructionPlan) -> list[str]:
    out = [f"PaperAsserted: {it.name}: {it.note}" for it in p.checklist if it.status is Status.PAPER_ASSERTED]
    out += [f"flag: {f}" for f in p.flags]
    return out


@dataclass(frozen=True)
class PlanDocument:
    plan: ConstructionPlan
    accepted: bool = True
    schema_version: str = SCHEMA_VERSION

    @property
    def request(self) -> PlanRequest:
        return self.plan.request

    @property
    def warnings(self) -> list[str]:
        return warnings_of(self.plan)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "accepted": self.accepted,
            "request": self.plan.request.to_dict(),
            "plan": plan_to_dict(self.plan),
            "warnings": self.warnings,
            "failed": self.plan.failed,
        }

    def to_json(self) -> str:
        # compact separators keep the C encoder; plans embed every trace and get large
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> PlanDocument:
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise DocumentError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}")
        try:
            req = PlanRequest.from_dict(d["request"])
            return cls(plan_from_dict(req, d["plan"]), bool(d.get("accepted", True)), version)
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed plan document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> PlanDocument:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise DocumentError("plan document must be a JSON object")
        return cls.from_dict(data)

    def to_text(self) -> str:
        p = self.plan
        req = p.request
        lines = [
            f"theorem      {p.theorem}",
            f"request      g={req.g} e={req.e} rank={req.rank} c1=({req.s},{req.t}) c2={req.c2}",
            f"status       {'accepted' if self.accepted else 'rejected'}",
            f"threshold    c2 {'>' if p.threshold_strict else '>='} {p.c2_threshold}",
            f"twist        E = E'({p.normalizing_twist} C0)",
            f"h0_lower     {p.h0_lower} (theorem states {p.theorem_h0_bound})",
            "parameters",
        ]
        lines += [f"  {k} = {json.dumps(v, sort_keys=True)}" for k, v in sorted(p.parameters.items())]
        lines.append("computed")
        lines += [f"  {k} = {json.dumps(v, sort_keys=True)}" for k, v in sorted(p.computed.items())]
        lines.append("checklist")
        for it in p.checklist:
            evidence = f"  [{it.inequality}]" if it.inequality is not None else ""
            lines.append(f"  {it.status.value:<13} {it.name}{evidence}")
        if self.warnings:
            lines.append("warnings")
            lines += [f"  {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"
