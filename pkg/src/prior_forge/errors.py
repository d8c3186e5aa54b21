"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PriorForgeError(Exception):
    """Base class for all errors raised by the package."""


class InvalidSurface(PriorForgeError):
    pass


class NegativeLength(PriorForgeError):
    pass


class UnsupportedRank(PriorForgeError):
    pass


class InternalInconsistency(PriorForgeError):
    """An identity that must hold for lattice reasons failed; signals a bug."""


class PlanError(PriorForgeError):
    """Base class for planner rejections."""


class InputOutOfRange(PlanError):
    pass


class NonIntegralParameter(PlanError):
    pass


class C2BelowThreshold(PlanError):
    def __init__(self, c2: int, threshold: int, strict: bool, theorem: str):
        self.c2 = c2
        self.threshold = threshold
        self.strict = strict
        self.theorem = theorem
        op = ">" if strict else ">="
        super().__init__(
            f"c2={c2} is below the threshold for {theorem}: need c2 {op} {threshold}"
        )


class DivisorSumMismatch(PlanError):
    pass


class ChecklistFailed(PlanError):
    """Raised with the fully built (but rejected) plan attached."""

    def __init__(self, items: list[str], plan=None):
        self.items = items
        self.plan = plan
        super().__init__("checklist failed: " + "; ".join(items))
