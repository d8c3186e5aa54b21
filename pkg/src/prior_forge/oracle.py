"""Brute-force recomputation, independent of the recursive Chern calculus.

Euler characteristics here come from the Leray spectral sequence of the
ruling plus Serre duality and additivity over the leaves of a chain, never
from the surface Riemann-Roch formula, so agreement between the two is a
real cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import engine
from .chern import ChernData, dual, euler_char, twist
from .engine import Extension, IdealSheaf, LineBundle, SheafExpr
from .lattice import DivisorClass, SurfaceParams, make_surface


@dataclass(frozen=True)
class ChainConstituents:
    pieces: tuple  # ((DivisorClass, length), ...) in leaf order

    @property
    def rank(self) -> int:
        return len(self.pieces)


def flatten(expr: SheafExpr) -> ChainConstituents:
    out = []
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Extension):
            stack.append(node.quot)
            stack.append(node.sub)
        elif isinstance(node, IdealSheaf):
            out.append((node.D, node.length))
        else:
            out.append((node.D, 0))
    return ChainConstituents(tuple(out))


def _dot(e: int, x: DivisorClass, y: DivisorClass) -> int:
    # (a1 C0 + b1 f)(a2 C0 + b2 f) with C0^2 = -e, C0 f = 1, f^2 = 0
    return -e * x.a * y.a + x.a * y.b + x.b * y.a


def whitney_c2(S: SurfaceParams, pieces: ChainConstituents) -> int:
    """sum |Z_i| + sum_{i<j} D_i . D_j over all rank-one leaves."""
    lengths = sum(n for _, n in pieces.pieces)
    cross = sum(_dot(S.e, x, y) for (x, _), (y, _) in itertools.combinations(pieces.pieces, 2))
    return lengths + cross


def chi_line_leray(S: SurfaceParams, a: int, beta: int) -> int:
    """chi(O_X(a C0 + beta f)) without Riemann-Roch on X.

    For a >= 0 the pushforward is a sum of line bundles of degrees
    beta, beta - e, ..., beta - a e on C; a = -1 has no cohomology; a <= -2
    reduces to a >= 0 through Serre duality.
    """
    if a >= 0:
        return sum(beta - i * S.e + 1 - S.g for i in range(a + 1))
    if a == -1:
        return 0
    return chi_line_leray(S, -2 - a, -S.ebar - beta)


def chi_chain(S: SurfaceParams, expr: SheafExpr, D: DivisorClass) -> int:
    """chi of expr(D) by additivity over leaves, with chi(I_Z(M)) = chi(O(M)) - |Z|."""
    return sum(chi_line_leray(S, (M + D).a, (M + D).b) - n for M, n in flatten(expr).pieces)


# -- closed forms -------------------------------------------------------------------


@dataclass
class IdentityResult:
    name: str
    points: int = 0
    mismatches: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "points": self.points, "mismatches": self.mismatches[:20],
                "mismatch_count": len(self.mismatches)}


@dataclass
class SuiteReport:
    identities: list

    @property
    def mismatch_count(self) -> int:
        return sum(len(r.mismatches) for r in self.identities)

    @property
    def points(self) -> int:
        return sum(r.points for r in self.identities)

    def to_dict(self) -> dict:
        return {
            "identities": [r.to_dict() for r in self.identities],
            "mismatch_count": self.mismatch_count,
            "points": self.points,
        }


DEFAULT_GRID = {
    "g": range(0, 4),
    "e": range(0, 4),
    "m": range(0, 2),
    "b": range(-3, 7),
    "d": range(-3, 7),
    "t": range(-6, -1),
    "l": range(0, 6),
    "Z": range(0, 8),
}


def _run(name, variables, grid, lhs, rhs):
    res = IdentityResult(name)
    for values in itertools.product(*(grid[v] for v in variables)):
        p = dict(zip(variables, values))
        S = make_surface(p["g"], p["e"])
        try:
            left, right = lhs(S, p), rhs(S, p)
        except engine.NegativeLength:
            continue
        res.points += 1
        if left != right:
            res.mismatches.append({"point": p, "lhs": left, "rhs": right})
    return res


def _rank3_s2_e2(S, p):
    b = -p["t"] - 1
    return engine.Extension(LineBundle(DivisorClass(0, b)), engine.ideal(DivisorClass(1, -b), p["Z"]))


def _rank3_s1_e2(S, p):
    b, d, m = p["b"], p["d"], 1
    return engine.Extension(
        LineBundle(DivisorClass(-1, b + 1)), engine.ideal(DivisorClass(m + 1, d - 2 * b - 1), p["l"])
    )


def _rr_line(S, a, b):
    return euler_char(S, ChernData(1, DivisorClass(a, b), 0))


def closed_form_suite(grid: dict | None = None) -> SuiteReport:
    """Evaluate both sides of every closed-form identity over a finite grid."""
    G = dict(DEFAULT_GRID)
    if grid:
        G.update(grid)
    ids = [
        _run("chi O(-C0-(m-2b)f) = 0", ["g", "e", "m", "b"], G,
             lambda S, p: _rr_line(S, -1, -(p["m"] - 2 * p["b"])), lambda S, p: 0),
        _run("chi O(-3C0-(d-3b-2)f) = -6+2g-3e+2d-6b", ["g", "e", "d", "b"], G,
             lambda S, p: _rr_line(S, -3, -(p["d"] - 3 * p["b"] - 2)),
             lambda S, p: -6 + 2 * p["g"] - 3 * p["e"] + 2 * p["d"] - 6 * p["b"]),
        _run("Riemann-Roch agrees with Leray on line bundles", ["g", "e", "b", "d"], G,
             lambda S, p: _rr_line(S, p["d"], p["b"]),
             lambda S, p: chi_line_leray(S, p["d"], p["b"])),
        _run("chi E2(-D) = 2-g-|Z| (c1 = 2C0+tf)", ["g", "e", "t", "Z"], G,
             lambda S, p: chi_chain(S, _rank3_s2_e2(S, p), DivisorClass(-1, -p["t"])),
             lambda S, p: 2 - p["g"] - p["Z"]),
        _run("c2(E3) = |Z|-1-e (c1 = 2C0+tf)", ["g", "e", "t", "Z"], G,
             lambda S, p: whitney_c2(S, flatten(Extension(_rank3_s2_e2(S, p),
                                                          LineBundle(DivisorClass(1, p["t"]))))),
             lambda S, p: p["Z"] - 1 - p["e"]),
        _run("c2(E2) = |Z|+2e+4b+3-d (c1 = C0+df)", ["g", "e", "b", "d", "l"], G,
             lambda S, p: whitney_c2(S, flatten(_rank3_s1_e2(S, p))),
             lambda S, p: p["l"] + 2 * p["e"] + 4 * p["b"] + 3 - p["d"]),
        _run("ext1 lower bound = l+6-2g+3e-2d+6b (c1 = C0+df)", ["g", "e", "b", "d", "l"], G,
             lambda S, p: p["l"] - chi_line_leray(S, -3, -(p["d"] - 3 * p["b"] - 2)),
             lambda S, p: p["l"] + 6 - 2 * p["g"] + 3 * p["e"] - 2 * p["d"] + 6 * p["b"]),
        _run("engine ext1 bound matches the oracle (c1 = C0+df)", ["g", "e", "b", "d", "l"], G,
             lambda S, p: engine.ext1_lower(S, _rank3_s1_e2(S, p).quot, _rank3_s1_e2(S, p).sub),
             lambda S, p: max(0, p["l"] - chi_line_leray(S, -3, -(p["d"] - 3 * p["b"] - 2)))),
        _run("c2(E2*(bf)) = 2e-d+3b+3+l (c1 = C0+df)", ["g", "e", "b", "d", "l"], G,
             lambda S, p: twist(S, dual(engine.chern_of(S, _rank3_s1_e2(S, p))),
                                DivisorClass(0, p["b"])).c2,
             lambda S, p: 2 * p["e"] - p["d"] + 3 * p["b"] + 3 + p["l"]),
        _run("c2(E4) = |Z|+e+2 (c1 = f, D = C0-f)", ["g", "e", "Z"], G,
             lambda S, p: whitney_c2(S, ChainConstituents(
                 ((DivisorClass(0, 0), 0), (DivisorClass(0, 1), p["Z"]),
                  (DivisorClass(1, -1), 0), (DivisorClass(-1, 1), 0)))),
             lambda S, p: p["Z"] + p["e"] + 2),
    ]
    return SuiteReport(ids)


# -- plan cross-check -------------------------------------------------------------


def _expected_parameters(req, S: SurfaceParams, tag: str, k: int) -> dict:
    """Re-derive the c2-dependent parameters from the request alone."""
    r = req.rank
    t = req.t
    c2 = twist(S, ChernData(r, DivisorClass(req.s, t), req.c2), DivisorClass(-k, 0)).c2
    if tag == "rank3-s2":
        return {"b": -t - 1, "Z": c2 + S.e + 1, "D": [1, t]}
    if tag in ("rank3-s1", "rank3-s0"):
        mod, off, window = (5, 2 * S.e + 3, range(0, 5)) if tag == "rank3-s1" else (3, S.e + 2, range(1, 4))
        l = next(x for x in window if (c2 + t - off - x) % mod == 0)
        return {"b": (c2 + t - off - l) // mod, "l": l, "Z": l, "d": t}
    if tag == "rank4-s0-ebar-nonneg":
        return {"Z": c2 - 2 - S.e, "D": [1, -1]}
    if tag == "rank4-s0-ebar-neg":
        return {"Z": c2 + S.e - 4 * S.g + 2, "D": [1, S.ebar - 1]}
    if tag == "rank4-s1":
        l = next(x for x in (3, 4, 5) if (c2 - 2 - S.e - x) % 3 == 0)
        b = (c2 - 2 - S.e - l) // 3
        return {"b": b, "l": l, "Z": l, "m": t, "D": [1, -b - 1]}
    shifts = {"rankr-ebar-pos": 2, "rankr-ebar-zero": 3, "rankr-ebar-minus-one": 6}
    if tag in shifts:
        return {"b": r - shifts[tag] + t}
    if tag == "rankr-ebar-lt-minus-one":
        N = ((r - 1) * (r - 2) + 2) // 2
        return {"b": t - 1 - N * S.ebar}
    return {}


def cross_check_plan(S: SurfaceParams, plan) -> list[dict]:
    """Compare a plan against whitney_c2 and an independent parameter derivation."""
    req = plan.request
    k = plan.normalizing_twist
    out = []
    pieces = flatten(plan.chain)
    c2_norm = whitney_c2(S, pieces)
    c1 = DivisorClass(0, 0)
    for D, _ in pieces.pieces:
        c1 = c1 + D
    back = twist(S, ChernData(pieces.rank, c1, c2_norm), DivisorClass(k, 0))
    if [back.rank, back.c1.to_list(), back.c2] != [req.rank, [req.s, req.t], req.c2]:
        out.append({"kind": "whitney", "detail": f"leaves give {back.to_list()}, request {req}"})
    if plan.computed.get("c2") != back.c2:
        out.append({"kind": "computed-c2", "detail": f"plan says {plan.computed.get('c2')}, oracle {back.c2}"})
    chi_oracle = chi_chain(S, plan.chain, DivisorClass(0, 0))
    chi_rr = euler_char(S, engine.chern_of(S, plan.chain))
    if chi_oracle != chi_rr:
        out.append({"kind": "chi", "detail": f"Leray {chi_oracle} vs Riemann-Roch {chi_rr}"})
    expected = _expected_parameters(req, S, plan.theorem, k)
    for key, want in expected.items():
        if plan.parameters.get(key) != want:
            out.append({"kind": "parameter", "detail": f"{key}: plan {plan.parameters.get(key)}, oracle {want}"})
    if plan.theorem.startswith("rankr"):
        lengths = [n for _, n in pieces.pieces[1:]]
        if plan.parameters.get("Z") != lengths:
            out.append({"kind": "parameter", "detail": f"Z: plan {plan.parameters.get('Z')}, chain {lengths}"})
        divisors = [D.to_list() for D, _ in pieces.pieces[1:]]
        if plan.parameters.get("D") != divisors:
            out.append({"kind": "parameter", "detail": f"D: plan {plan.parameters.get('D')}, chain {divisors}"})
    return out
