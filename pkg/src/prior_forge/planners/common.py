"""Plan data types and checklist helpers shared by every planner."""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass, field

from ..engine import Certificate, SheafExpr, Verdict, StepResult
from ..lattice import DivisorClass, SurfaceParams, make_surface


@dataclass(frozen=True)
class PlanRequest:
    g: int
    e: int
    rank: int
    s: int
    t: int
    c2: int
    theorem: str | None = None

    @property
    def surface(self) -> SurfaceParams:
        return make_surface(self.g, self.e)

    @property
    def c1(self) -> DivisorClass:
        return DivisorClass(self.s, self.t)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "e": self.e,
            "rank": self.rank,
            "s": self.s,
            "t": self.t,
            "c2": self.c2,
            "theorem": self.theorem,
        }

    @classmethod
    def from_dict(cls, d: dict) -> PlanRequest:
        return cls(
            int(d["g"]), int(d["e"]), int(d["rank"]), int(d["s"]), int(d["t"]), int(d["c2"]),
            d.get("theorem"),
        )


class Status(str, enum.Enum):
    CERTIFIED = "Certified"
    PAPER_ASSERTED = "PaperAsserted"
    FAILED = "Failed"


_OPS = {
    ">": operator.gt,
    ">=": operator.ge,
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
}


@dataclass(frozen=True)
class Inequality:
    lhs: int
    op: str
    rhs: int

    def holds(self) -> bool:
        return _OPS[self.op](self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass(frozen=True)
class ChecklistItem:
    name: str
    status: Status
    certificate: Certificate | None = None
    inequality: Inequality | None = None
    note: str = ""


@dataclass(frozen=True)
class ConstructionPlan:
    theorem: str
    request: PlanRequest
    normalizing_twist: int
    parameters: dict
    chain: SheafExpr
    checklist: tuple
    computed: dict
    h0_lower: int
    theorem_h0_bound: int
    c2_threshold: int
    threshold_strict: bool
    flags: tuple = field(default=())

    @property
    def failed(self) -> list[str]:
        return [it.name for it in self.checklist if it.status is Status.FAILED]

    @property
    def asserted(self) -> list[str]:
        return [it.name for it in self.checklist if it.status is Status.PAPER_ASSERTED]


# -- checklist builders ------------------------------------------------------------


def expect(name: str, cert: Certificate, want: Verdict) -> ChecklistItem:
    status = Status.CERTIFIED if cert.verdict is want else Status.FAILED
    return ChecklistItem(name, status, certificate=cert)


def zero(name: str, cert: Certificate) -> ChecklistItem:
    return expect(name, cert, Verdict.ZERO)


def nonzero(name: str, cert: Certificate) -> ChecklistItem:
    return expect(name, cert, Verdict.NONZERO)


def ineq(name: str, lhs: int, op: str, rhs: int, note: str = "") -> ChecklistItem:
    iq = Inequality(int(lhs), op, int(rhs))
    status = Status.CERTIFIED if iq.holds() else Status.FAILED
    return ChecklistItem(name, status, inequality=iq, note=note)


def asserted(name: str, note: str) -> ChecklistItem:
    return ChecklistItem(name, Status.PAPER_ASSERTED, note=note)


def step_items(prefix: str, res: StepResult) -> list[ChecklistItem]:
    c = res.certificates
    return [
        nonzero(f"{prefix}: extension space nonzero", c["nontrivial"]),
        zero(f"{prefix}: simple, h0 vanishing", c["simple_h0"]),
        zero(f"{prefix}: simple, h2 vanishing", c["simple_h2"]),
        zero(f"{prefix}: prioritary, h0 vanishing", c["prioritary_h0"]),
        zero(f"{prefix}: prioritary, h2 vanishing", c["prioritary_h2"]),
    ]


def all_certified(items) -> bool:
    return all(it.status is not Status.FAILED for it in items)


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def h0_chain_bound(b: int, g: int) -> int:
    """h0(O_X(bf)) = h0(O_C(b)) >= b + 1 - g."""
    return b + 1 - g
