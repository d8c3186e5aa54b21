"""Three-valued cohomology-vanishing engine with replayable certificates.

Rules (every trace step is tagged with one of them):

    V1  effectivity of a line bundle class: a<0 or b<0 gives h0 = 0, and a
        certified effective class gives h0 > 0 (line bundles only)
    V2  Serre duality on rank one: h2(O(M)) = h2(I_Z(M)) = h0(O(K - M))
    V3  generic Z with |Z| >= h0_upper(M) gives h0(I_Z(M)) = 0
        (strict |Z| > h0_upper for Cayley-Bacharach)
    V4  long exact sequence of 0 -> A -> E -> B -> 0
    V5  0 -> A -> E -> O(L) -> 0 nontrivial and h0(A(-L)) = 0 give h0(E(-L)) = 0
    V6  h1 >= -chi, and ext1 lower bounds obtained from it

Traces are in post-order: each step consumes the results of the steps that
justify it.  `replay` re-checks a certificate with a small stack machine that
shares no code path with the evaluator beyond the lattice primitives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from .chern import ChernData, extension_sum, ideal_sheaf, line_bundle, twist, euler_char
from .errors import NegativeLength, UnsupportedRank
from .lattice import (
    Effectivity,
    DivisorClass,
    SurfaceParams,
    F,
    effectivity,
    h0_upper,
)


class Verdict(str, enum.Enum):
    ZERO = "Zero"
    NONZERO = "NonZero"
    UNKNOWN = "Unknown"


# -- sheaf expressions -------------------------------------------------------


@dataclass(frozen=True)
class LineBundle:
    D: DivisorClass


@dataclass(frozen=True)
class IdealSheaf:
    D: DivisorClass
    length: int
    generic: bool = True
    label: str = ""

    def __post_init__(self):
        if self.length < 0:
            raise NegativeLength(f"length must be >= 0, got {self.length}")


@dataclass(frozen=True)
class Extension:
    """0 -> sub -> E -> quot -> 0; nontrivial=False is the direct sum."""

    sub: "SheafExpr"
    quot: "SheafExpr"
    nontrivial: bool = True


SheafExpr = Union[LineBundle, IdealSheaf, Extension]


def ideal(D: DivisorClass, length: int, generic: bool = True, label: str = "") -> SheafExpr:
    """I_Z(D), normalized to O(D) when Z is empty."""
    if length == 0:
        return LineBundle(D)
    return IdealSheaf(D, length, generic, label)


def direct_sum(*parts: SheafExpr) -> SheafExpr:
    if not parts:
        raise ValueError("direct_sum needs at least one summand")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Extension(p, out, nontrivial=False)
    return out


def chern_of(S: SurfaceParams, expr: SheafExpr) -> ChernData:
    if isinstance(expr, LineBundle):
        return line_bundle(expr.D)
    if isinstance(expr, IdealSheaf):
        return ideal_sheaf(expr.D, expr.length)
    return extension_sum(S, chern_of(S, expr.sub), chern_of(S, expr.quot))


def rank_of(expr: SheafExpr) -> int:
    if isinstance(expr, Extension):
        return rank_of(expr.sub) + rank_of(expr.quot)
    return 1


# -- certificates --------------------------------------------------------------


def _freeze(v):
    if isinstance(v, DivisorClass):
        return (v.a, v.b)
    if isinstance(v, (list, tuple)):
        return tuple(_freeze(x) for x in v)
    if isinstance(v, enum.Enum):
        return v.value
    return v


@dataclass(frozen=True)
class Step:
    rule: str
    args: tuple
    result: Verdict

    @classmethod
    def make(cls, rule: str, result: Verdict, **args) -> Step:
        return cls(rule, tuple(sorted((k, _freeze(v)) for k, v in args.items())), result)

    def arg(self, key):
        for k, v in self.args:
            if k == key:
                return v
        raise KeyError(key)

    def divisor(self, key: str = "divisor") -> DivisorClass:
        return DivisorClass(*self.arg(key))


@dataclass(frozen=True)
class Certificate:
    """kind is one of h0, h1, h2, ext1, cb.

    exprs holds the queried sheaf for h-queries, (quot, sub) for ext1 and is
    empty for cb, where the divisor is `twist`.
    """

    kind: str
    exprs: tuple
    twist: DivisorClass
    verdict: Verdict
    trace: tuple
    value: int | None = None
    extra: tuple = field(default=())


# -- evaluators ----------------------------------------------------------------


def _v1(S: SurfaceParams, M: DivisorClass, sheaf: str) -> tuple[Verdict, Step]:
    eff = effectivity(S, M)
    if eff.verdict is Effectivity.NON_EFFECTIVE:
        v = Verdict.ZERO
    elif eff.verdict is Effectivity.EFFECTIVE and sheaf == "O":
        v = Verdict.NONZERO
    else:
        v = Verdict.UNKNOWN
    return v, Step.make("V1", v, sheaf=sheaf, divisor=M, effectivity=eff.verdict, reason=eff.reason)


def _h0(S: SurfaceParams, expr: SheafExpr, D: DivisorClass) -> tuple[Verdict, list]:
    if isinstance(expr, LineBundle):
        v, st = _v1(S, expr.D + D, "O")
        return v, [st]
    if isinstance(expr, IdealSheaf):
        M = expr.D + D
        v, st = _v1(S, M, "I")
        if v is Verdict.ZERO:
            return v, [st]
        bound = h0_upper(S, M)
        ok = expr.generic and expr.length >= bound
        v = Verdict.ZERO if ok else Verdict.UNKNOWN
        return v, [Step.make("V3", v, divisor=M, length=expr.length, generic=expr.generic,
                             h0_upper=bound, strict=False)]
    va, ta = _h0(S, expr.sub, D)
    vb, tb = _h0(S, expr.quot, D)
    if va is Verdict.ZERO and vb is Verdict.ZERO:
        return Verdict.ZERO, ta + tb + [Step.make("V4", Verdict.ZERO, degree=0)]
    if (
        va is Verdict.ZERO
        and expr.nontrivial
        and isinstance(expr.quot, LineBundle)
        and D == -expr.quot.D
    ):
        return Verdict.ZERO, ta + [
            Step.make("V5", Verdict.ZERO, L=expr.quot.D, twist=D, nontrivial=True)
        ]
    v = Verdict.NONZERO if va is Verdict.NONZERO else Verdict.UNKNOWN
    return v, ta + tb + [Step.make("V4", v, degree=0)]


def _h2(S: SurfaceParams, expr: SheafExpr, D: DivisorClass) -> tuple[Verdict, list]:
    if isinstance(expr, (LineBundle, IdealSheaf)):
        M = expr.D + D
        dual_div = S.K - M
        v, st = _v1(S, dual_div, "O")
        sheaf = "O" if isinstance(expr, LineBundle) else "I"
        return v, [st, Step.make("V2", v, sheaf=sheaf, divisor=M, dual=dual_div)]
    va, ta = _h2(S, expr.sub, D)
    vb, tb = _h2(S, expr.quot, D)
    if va is Verdict.ZERO and vb is Verdict.ZERO:
        v = Verdict.ZERO
    elif vb is Verdict.NONZERO:
        v = Verdict.NONZERO
    else:
        v = Verdict.UNKNOWN
    return v, ta + tb + [Step.make("V4", v, degree=2)]


def h0_verdict(S: SurfaceParams, expr: SheafExpr, D: DivisorClass) -> tuple[Verdict, Certificate]:
    v, trace = _h0(S, expr, D)
    return v, Certificate("h0", (expr,), D, v, tuple(trace))


def h2_verdict(S: SurfaceParams, expr: SheafExpr, D: DivisorClass) -> tuple[Verdict, Certificate]:
    v, trace = _h2(S, expr, D)
    return v, Certificate("h2", (expr,), D, v, tuple(trace))


def h1_positive(S: SurfaceParams, expr: SheafExpr, D: DivisorClass) -> tuple[Verdict, Certificate]:
    C = twist(S, chern_of(S, expr), D)
    chi = euler_char(S, C)
    v = Verdict.NONZERO if chi < 0 else Verdict.UNKNOWN
    st = Step.make("V6", v, chern=C.to_list(), chi=chi)
    return v, Certificate("h1", (expr,), D, v, (st,), value=chi)


def _rank_one_parts(expr: SheafExpr) -> tuple[DivisorClass, int]:
    if isinstance(expr, LineBundle):
        return expr.D, 0
    if isinstance(expr, IdealSheaf):
        return expr.D, expr.length
    raise UnsupportedRank(f"ext1_lower needs a rank-1 quotient, got rank {rank_of(expr)}")


def ext1_certificate(S: SurfaceParams, quot: SheafExpr, sub: SheafExpr) -> Certificate:
    """Lower bound for ext1(quot, sub) with quot = I_Z(D) of rank one.

    chi(I_Z(D), A) = chi(A(-D)) - rank(A)|Z|, and ext1 >= -chi.
    """
    Dq, n = _rank_one_parts(quot)
    C = twist(S, chern_of(S, sub), -Dq)
    chi = euler_char(S, C)
    correction = C.rank * n
    bound = max(0, correction - chi)
    v = Verdict.NONZERO if bound > 0 else Verdict.UNKNOWN
    st = Step.make("V6", v, chern=C.to_list(), chi=chi, correction=correction, bound=bound)
    return Certificate("ext1", (quot, sub), -Dq, v, (st,), value=bound)


def ext1_lower(S: SurfaceParams, quot: SheafExpr, sub: SheafExpr) -> int:
    return ext1_certificate(S, quot, sub).value


def cayley_bacharach(
    S: SurfaceParams, Dprime: DivisorClass, length: int, generic: bool = True
) -> tuple[bool, Certificate]:
    """Sufficient test for the Cayley-Bacharach property of (|Dprime|, Z).

    Holds when no section of O(Dprime) survives on Z minus a point, which
    follows from non-effectivity or from generic Z with |Z| > h0_upper.
    """
    if length < 0:
        raise NegativeLength(f"length must be >= 0, got {length}")
    v, st = _v1(S, Dprime, "I")
    if v is not Verdict.ZERO:
        bound = h0_upper(S, Dprime)
        ok = generic and length > bound
        v = Verdict.ZERO if ok else Verdict.UNKNOWN
        st = Step.make("V3", v, divisor=Dprime, length=length, generic=generic,
                       h0_upper=bound, strict=True)
    cert = Certificate("cb", (), Dprime, v, (st,), extra=(("generic", generic), ("length", length)))
    return v is Verdict.ZERO, cert


# -- extension step --------------------------------------------------------------


@dataclass(frozen=True)
class StepResult:
    nontrivial_ok: bool
    simple: bool
    prioritary: bool
    certificates: dict


def extension_step(
    S: SurfaceParams, base: SheafExpr, simple: bool, prioritary: bool, L: DivisorClass
) -> StepResult:
    """Checks for E in 0 -> base -> E -> O(L) -> 0 to be simple and prioritary."""
    K = S.K
    v_nt, c_nt = h1_positive(S, base, -L)
    v_a, c_a = h0_verdict(S, base, -L)
    v_b, c_b = h2_verdict(S, base, K - L)
    v_c, c_c = h0_verdict(S, base, K - L + F)
    v_d, c_d = h2_verdict(S, base, -F - L)
    z = Verdict.ZERO
    return StepResult(
        nontrivial_ok=v_nt is Verdict.NONZERO,
        simple=simple and v_a is z and v_b is z,
        prioritary=prioritary and v_c is z and v_d is z,
        certificates={
            "nontrivial": c_nt,
            "simple_h0": c_a,
            "simple_h2": c_b,
            "prioritary_h0": c_c,
            "prioritary_h2": c_d,
        },
    )


# -- replay --------------------------------------------------------------------


def rederive(S: SurfaceParams, cert: Certificate) -> Certificate:
    if cert.kind == "h0":
        return h0_verdict(S, cert.exprs[0], cert.twist)[1]
    if cert.kind == "h2":
        return h2_verdict(S, cert.exprs[0], cert.twist)[1]
    if cert.kind == "h1":
        return h1_positive(S, cert.exprs[0], cert.twist)[1]
    if cert.kind == "ext1":
        return ext1_certificate(S, cert.exprs[0], cert.exprs[1])
    if cert.kind == "cb":
        extra = dict(cert.extra)
        return cayley_bacharach(S, cert.twist, extra["length"], extra["generic"])[1]
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


def check_steps(S: SurfaceParams, trace) -> tuple[list[str], Verdict | None]:
    """Stack-machine check of a post-order trace; returns (problems, result)."""
    problems: list[str] = []
    stack: list[Step] = []
    for i, st in enumerate(trace):
        where = f"step {i} ({st.rule})"
        try:
            expected = _expected_result(S, st, stack)
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            problems.append(f"{where}: malformed ({exc})")
            return problems, None
        if expected is not st.result:
            problems.append(f"{where}: recorded {st.result.value}, replay gives {expected.value}")
        stack.append(st)
    if len(stack) != 1:
        problems.append(f"trace leaves {len(stack)} results on the stack")
        return problems, None
    return problems, stack[0].result


def _expected_result(S: SurfaceParams, st: Step, stack: list) -> Verdict:
    rule = st.rule
    if rule == "V1":
        M = st.divisor()
        eff = effectivity(S, M).verdict
        if eff.value != st.arg("effectivity"):
            return Verdict.UNKNOWN if st.result is not Verdict.UNKNOWN else Verdict.ZERO
        if eff is Effectivity.NON_EFFECTIVE:
            return Verdict.ZERO
        if eff is Effectivity.EFFECTIVE and st.arg("sheaf") == "O":
            return Verdict.NONZERO
        return Verdict.UNKNOWN
    if rule == "V3":
        M = st.divisor()
        bound = h0_upper(S, M)
        length = st.arg("length")
        if bound != st.arg("h0_upper"):
            return Verdict.UNKNOWN if st.result is not Verdict.UNKNOWN else Verdict.ZERO
        ok = length > bound if st.arg("strict") else length >= bound
        return Verdict.ZERO if ok and st.arg("generic") else Verdict.UNKNOWN
    if rule == "V2":
        child = stack.pop()
        M, dual_div = st.divisor(), st.divisor("dual")
        if (
            child.rule != "V1"
            or child.arg("sheaf") != "O"
            or child.divisor() != dual_div
            or dual_div != S.K - M
        ):
            return Verdict.UNKNOWN if st.result is not Verdict.UNKNOWN else Verdict.ZERO
        return child.result
    if rule == "V4":
        quot = stack.pop().result
        sub = stack.pop().result
        if sub is Verdict.ZERO and quot is Verdict.ZERO:
            return Verdict.ZERO
        if st.arg("degree") == 0 and sub is Verdict.NONZERO:
            return Verdict.NONZERO
        if st.arg("degree") == 2 and quot is Verdict.NONZERO:
            return Verdict.NONZERO
        return Verdict.UNKNOWN
    if rule == "V5":
        sub = stack.pop().result
        L, tw = st.divisor("L"), st.divisor("twist")
        if sub is Verdict.ZERO and st.arg("nontrivial") and tw == -L:
            return Verdict.ZERO
        return Verdict.UNKNOWN
    if rule == "V6":
        C = ChernData.from_list(st.arg("chern"))
        chi = euler_char(S, C)
        if chi != st.arg("chi"):
            return Verdict.UNKNOWN if st.result is not Verdict.UNKNOWN else Verdict.NONZERO
        args = dict(st.args)
        if "bound" in args:
            bound = max(0, args["correction"] - chi)
            if bound != args["bound"]:
                return Verdict.UNKNOWN if st.result is not Verdict.UNKNOWN else Verdict.NONZERO
            return Verdict.NONZERO if bound > 0 else Verdict.UNKNOWN
        return Verdict.NONZERO if chi < 0 else Verdict.UNKNOWN
    raise ValueError(f"unknown rule {rule!r}")


def replay(S: SurfaceParams, cert: Certificate) -> list[str]:
    """Problems found when re-checking `cert`; an empty list means it stands."""
    if not cert.trace and cert.verdict is not Verdict.UNKNOWN:
        return ["empty trace with a definite verdict"]
    problems, result = check_steps(S, cert.trace)
    if result is not None and result is not cert.verdict:
        problems.append(f"trace concludes {result.value}, certificate says {cert.verdict.value}")
    fresh = rederive(S, cert)
    if fresh != cert:
        problems.append("certificate does not match a fresh derivation of its query")
    return problems


# -- serialization ---------------------------------------------------------------


def expr_to_dict(expr: SheafExpr) -> dict:
    if isinstance(expr, LineBundle):
        return {"type": "line", "divisor": expr.D.to_list()}
    if isinstance(expr, IdealSheaf):
        return {
            "type": "ideal",
            "divisor": expr.D.to_list(),
            "length": expr.length,
            "generic": expr.generic,
            "label": expr.label,
        }
    return {
        "type": "extension",
        "sub": expr_to_dict(expr.sub),
        "quot": expr_to_dict(expr.quot),
        "nontrivial": expr.nontrivial,
    }


def expr_from_dict(d: dict) -> SheafExpr:
    t = d["type"]
    if t == "line":
        return LineBundle(DivisorClass.from_list(d["divisor"]))
    if t == "ideal":
        return IdealSheaf(
            DivisorClass.from_list(d["divisor"]), int(d["length"]), bool(d["generic"]), d["label"]
        )
    if t == "extension":
        return Extension(expr_from_dict(d["sub"]), expr_from_dict(d["quot"]), bool(d["nontrivial"]))
    raise ValueError(f"unknown sheaf expression type {t!r}")


def _thaw(v):
    if isinstance(v, tuple):
        return [_thaw(x) for x in v]
    return v


def step_to_dict(st: Step) -> dict:
    return {"rule": st.rule, "args": {k: _thaw(v) for k, v in st.args}, "result": st.result.value}


def step_from_dict(d: dict) -> Step:
    args = tuple(sorted((k, _freeze(v)) for k, v in d["args"].items()))
    return Step(d["rule"], args, Verdict(d["result"]))


def cert_to_dict(c: Certificate) -> dict:
    return {
        "kind": c.kind,
        "exprs": [expr_to_dict(e) for e in c.exprs],
        "twist": c.twist.to_list(),
        "verdict": c.verdict.value,
        "trace": [step_to_dict(s) for s in c.trace],
        "value": c.value,
        "extra": {k: v for k, v in c.extra},
    }


def cert_from_dict(d: dict) -> Certificate:
    return Certificate(
        kind=d["kind"],
        exprs=tuple(expr_from_dict(e) for e in d["exprs"]),
        twist=DivisorClass.from_list(d["twist"]),
        verdict=Verdict(d["verdict"]),
        trace=tuple(step_from_dict(s) for s in d["trace"]),
        value=d["value"],
        extra=tuple(sorted(d["extra"].items())),
    )
