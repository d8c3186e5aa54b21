"""Theorem-instantiating planners."""

from .common import ChecklistItem, ConstructionPlan, Inequality, PlanRequest, Status
from .dispatch import TAGS, build_plan, c2_threshold, plan
from .verify import Finding, verify_plan

__all__ = [
    "ChecklistItem",
    "ConstructionPlan",
    "Finding",
    "Inequality",
    "PlanRequest",
    "Status",
    "TAGS",
    "build_plan",
    "c2_threshold",
    "plan",
    "verify_plan",
]
