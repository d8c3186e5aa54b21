"""Contract every theorem case implements."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..chern import euler_char, twist
from ..engine import SheafExpr, chern_of
from ..lattice import DivisorClass, SurfaceParams


@dataclass(frozen=True)
class Threshold:
    value: int
    strict: bool
    flags: tuple = ()
    note: str = ""

    def admits(self, c2: int) -> bool:
        return c2 > self.value if self.strict else c2 >= self.value


@dataclass
class CaseResult:
    parameters: dict
    chain: SheafExpr
    checklist: list
    chi: dict
    h0_lower: int
    theorem_h0_bound: int
    flags: list = field(default_factory=list)


class Case:
    """One existence theorem, instantiated on a normalized request."""

    tag: str = ""
    ranks: tuple = ()

    def applies(self, S: SurfaceParams, r: int, s: int, t: int) -> bool:
        raise NotImplementedError

    def check_inputs(self, S: SurfaceParams, r: int, s: int, t: int) -> None:
        raise NotImplementedError

    def threshold(self, S: SurfaceParams, r: int, s: int, t: int) -> Threshold:
        raise NotImplementedError

    def build(self, S: SurfaceParams, r: int, s: int, t: int, c2: int) -> CaseResult:
        raise NotImplementedError


def chi_at(S: SurfaceParams, expr: SheafExpr, D: DivisorClass) -> int:
    return euler_char(S, twist(S, chern_of(S, expr), D))


def length_for_negative_chi(chi_without_points: int) -> int:
    """Smallest |Z| with chi_without_points - |Z| < 0."""
    return max(0, chi_without_points + 1)
