"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import json
import random

from conftest import ACCEPTANCE_LINES

from prior_forge import cli, oracle
from prior_forge.chern import ChernData, euler_char
from prior_forge.engine import (
    Extension,
    IdealSheaf,
    LineBundle,
    Verdict,
    chern_of,
    h0_verdict,
    h1_positive,
    h2_verdict,
    replay,
)
from prior_forge.errors import ChecklistFailed, PlanError
from prior_forge.lattice import C0, F, DivisorClass, intersect, make_surface
from prior_forge.planners import PlanRequest, build_plan, c2_threshold, plan


def report(n: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


# -- grids shared with criterion 11 ---------------------------------------------------


def grid_rank3_s2():
    for g in range(3):
        for e in range(3):
            for t in range(-5, min(-2, -2 * g + 1) + 1):
                for c2 in range(50, 61):
                    yield PlanRequest(g, e, 3, 2, t, c2)


def grid_rank3_s1():
    for g in range(3):
        for e in range(3):
            for d in range(0, 5):
                for c2 in range(50, 61):
                    yield PlanRequest(g, e, 3, 1, d, c2)


def grid_rank4_s0():
    for g in range(3):
        for e in range(3):
            if e - 2 * g + 2 >= 0:
                for c2 in range(50, 61):
                    yield PlanRequest(g, e, 4, 0, 1, c2)


def grid_rank_r_pos(g: int = 0, e: int = 1):
    for r in range(4, 13):
        for s in range(r):
            for t in range(max(-r + 2, 2 * g - r), 6):
                yield PlanRequest(g, e, r, s, t, 0, "rankr-ebar-pos")


# -- criteria --------------------------------------------------------------------------


def test_criterion_1_lattice_constants():
    bad = 0
    for e in range(6):
        S = make_surface(0, e)
        bad += intersect(S, C0, C0) != -e
        bad += intersect(S, C0, F) != 1
        bad += intersect(S, F, F) != 0
    for g in range(6):
        for e in range(6):
            bad += make_surface(g, e).K != DivisorClass(-2, -(e - 2 * g + 2))
    report(1, bad == 0, f"lattice constants, {bad} mismatches over e in [0,5] and g,e in [0,5] (exact)")


def test_criterion_2_riemann_roch_closed_forms():
    bad = points = 0
    for g in range(4):
        for e in range(4):
            S = make_surface(g, e)
            for b in range(-3, 7):
                for m in (0, 1):
                    points += 1
                    bad += euler_char(S, ChernData(1, DivisorClass(-1, -(m - 2 * b)), 0)) != 0
                for d in range(-3, 7):
                    points += 1
                    lhs = euler_char(S, ChernData(1, DivisorClass(-3, -(d - 3 * b - 2)), 0))
                    bad += lhs != -6 + 2 * g - 3 * e + 2 * d - 6 * b
    report(2, bad == 0, f"Riemann-Roch closed forms, {bad} mismatches in {points} points (exact)")


def test_criterion_3_two_section_chain():
    bad = n = 0
    for req in grid_rank3_s2():
        p = plan(req)
        S = req.surface
        Z = p.parameters["Z"]
        n += 1
        bad += p.parameters["b"] != -req.t - 1
        bad += Z != req.c2 + req.e + 1
        bad += p.computed["chi_parts"]["E2(-D)"] != 2 - req.g - Z
        bad += chern_of(S, p.chain).c2 != Z - 1 - req.e or Z - 1 - req.e != req.c2
        bad += p.h0_lower != -req.t - req.g
    report(3, bad == 0 and n > 0, f"c1 = 2C0+tf chain, {n} plans, {bad} mismatches (exact)")


def test_criterion_4_twisted_pair_chain():
    bad = n = 0
    for req in grid_rank3_s1():
        p = plan(req)
        S = req.surface
        b, l, d, g, e = p.parameters["b"], p.parameters["l"], req.t, req.g, req.e
        ext = next(it for it in p.checklist if it.name == "E2: extension space nonzero")
        n += 1
        bad += ext.certificate.value != l + 6 - 2 * g + 3 * e - 2 * d + 6 * b
        bad += chern_of(S, p.chain.quot).c2 != l + 2 * e + 4 * b + 3 - d
        bad += chern_of(S, p.chain).c2 != req.c2
    p = plan(PlanRequest(0, 0, 3, 1, 0, 103))
    S = make_surface(0, 0)
    worked = (chern_of(S, p.chain.quot).c2, p.parameters["b"], chern_of(S, p.chain).c2) == (83, 20, 103)
    report(4, bad == 0 and worked and n > 0,
           f"c1 = C0+df chain, {n} plans, {bad} mismatches; worked instance 83+20=103 {worked} (exact)")


def test_criterion_5_rank_four_chains():
    bad = n = 0
    for req in grid_rank4_s0():
        p = plan(req)
        n += 1
        Z = p.parameters["Z"]
        bad += chern_of(req.surface, p.chain).c2 != Z + req.e + 2 or Z + req.e + 2 != req.c2
    S = make_surface(0, 0)
    p = plan(PlanRequest(0, 0, 4, 1, 0, 20))
    E3 = p.chain.sub
    got = (chern_of(S, E3.sub).c2, chern_of(S, E3).c2, chern_of(S, p.chain).c2, p.h0_lower)
    report(5, bad == 0 and got == (8, 2, 20, 6) and n > 0,
           f"rank-4 chains, {n} plans with c1 = f, {bad} mismatches; c1 = C0 instance (E2,E3,E4,h0) = {got} (exact)")


def test_criterion_6_positive_ebar_telescoping():
    bad = n = 0
    for req in grid_rank_r_pos():
        th = c2_threshold(req)
        req = PlanRequest(req.g, req.e, req.rank, req.s, req.t, th.value + 1, req.theorem)
        p = build_plan(req)
        b, Ds = p.parameters["b"], [DivisorClass.from_list(x) for x in p.parameters["D"]]
        total = DivisorClass(0, b)
        for D in Ds:
            total = total + D
        n += 1
        bad += total != DivisorClass(req.s, req.t)
    worked = []
    for c2 in (57, 80, 100, 1000):
        p = plan(PlanRequest(0, 1, 4, 0, 0, c2))
        worked.append(
            (p.parameters["f_b"], p.parameters["Z"][1], p.parameters["pairwise"], p.parameters["Z"][2])
            == (56, 4, 51, c2 - 56)
        )
    ok = bad == 0 and all(worked) and n > 0
    report(6, ok, f"divisor telescoping, {n} layouts, {bad} mismatches; f(b)=56, |Z2|=4, sum DiDj=51, "
                  f"|Z3|=c2-56 at 4 values {all(worked)} (exact)")


def test_criterion_7_negative_ebar_instance():
    req = PlanRequest(2, 0, 4, 1, 0, 40, "rankr-ebar-lt-minus-one")
    p = build_plan(req, enforce_threshold=False)
    S = req.surface
    worked = (p.parameters["b"], p.parameters["Z"][-1], p.h0_lower) == (7, req.c2 - 10, 6)
    worked = worked and p.theorem_h0_bound == req.t - req.g - 4 * S.ebar == 6
    bad = n = 0
    for g in range(2, 5):
        for e in range(0, 2 * g - 3):
            S = make_surface(g, e)
            for r in range(4, 7):
                N = ((r - 1) * (r - 2) + 2) // 2
                for s in range(r):
                    for t in range(max(0, 2 * g - 2) + N * S.ebar + 1, 8):
                        req = PlanRequest(g, e, r, s, t, 0, "rankr-ebar-lt-minus-one")
                        c2 = c2_threshold(req).value + 1
                        q = build_plan(PlanRequest(g, e, r, s, t, c2, req.theorem))
                        n += 1
                        bad += q.h0_lower != q.theorem_h0_bound
                        bad += q.h0_lower != t - g - N * S.ebar
    report(7, worked and bad == 0 and n > 0,
           f"ebar < -1 instance b=7, |Z3|=c2-10, h0=6 {worked}; h0 expressions agree on {n} points, "
           f"{bad} mismatches (exact)")


def _random_tree(rng: random.Random, leaves: int):
    nodes = []
    for _ in range(leaves):
        D = DivisorClass(rng.randint(-8, 8), rng.randint(-15, 15))
        nodes.append(IdealSheaf(D, rng.randint(1, 20), rng.random() < 0.8) if rng.random() < 0.5 else LineBundle(D))
    while len(nodes) > 1:
        i = rng.randrange(len(nodes) - 1)
        nodes[i : i + 2] = [Extension(nodes[i], nodes[i + 1], rng.random() < 0.7)]
    return nodes[0]


def test_criterion_8_oracle_equivalence():
    rng = random.Random(20240)
    bad = 0
    for _ in range(1000):
        S = make_surface(rng.randint(0, 5), rng.randint(0, 5))
        T = _random_tree(rng, rng.randint(1, 10))
        bad += oracle.whitney_c2(S, oracle.flatten(T)) != chern_of(S, T).c2
    report(8, bad == 0, f"whitney_c2 vs chern_of on 1000 random trees up to rank 10, {bad} mismatches (exact)")


def test_criterion_9_engine_soundness():
    rng = random.Random(9090)
    replay_bad = unsound = sandwich_bad = certs = 0
    for _ in range(400):
        S = make_surface(rng.randint(0, 4), rng.randint(0, 4))
        T = _random_tree(rng, rng.randint(1, 8))
        D = DivisorClass(rng.randint(-5, 5), rng.randint(-10, 10))
        for query in (h0_verdict, h2_verdict, h1_positive):
            v, cert = query(S, T, D)
            certs += 1
            replay_bad += bool(replay(S, cert))
            for st in cert.trace:
                if st.rule == "V1" and st.result is Verdict.ZERO:
                    unsound += not (st.divisor().a < 0 or st.divisor().b < 0)
                if st.rule == "V3" and st.result is Verdict.ZERO:
                    unsound += not (st.arg("generic") and st.arg("length") >= st.arg("h0_upper"))
                if st.result is Verdict.NONZERO:
                    if st.rule == "V1":
                        unsound += not (st.arg("effectivity") == "Effective" and st.arg("sheaf") == "O")
                    elif st.rule == "V6":
                        unsound += not dict(st.args).get("bound", -st.arg("chi")) > 0
                    elif st.rule not in ("V2", "V4"):
                        unsound += 1
        # planted Zero leaves: every leaf has C0-coefficient below -D.a
        n = rng.randint(1, 8)
        nodes = [LineBundle(DivisorClass(-D.a - 1 - rng.randint(0, 3), rng.randint(-9, 9))) for _ in range(n)]
        while len(nodes) > 1:
            i = rng.randrange(len(nodes) - 1)
            nodes[i : i + 2] = [Extension(nodes[i], nodes[i + 1], rng.random() < 0.5)]
        v, cert = h0_verdict(S, nodes[0], D)
        sandwich_bad += v is not Verdict.ZERO or bool(replay(S, cert))
    ok = replay_bad == sandwich_bad == unsound == 0
    report(9, ok, f"{certs} certificates: {replay_bad} replay failures, {unsound} unsound steps, "
                  f"{sandwich_bad} sandwich failures on 400 planted trees")


def test_criterion_10_flagged_discrepancies():
    gap = plan(PlanRequest(0, 0, 3, 0, 0, 10))
    sign = plan(PlanRequest(0, 0, 3, 1, 0, 103))
    mismatch = plan(PlanRequest(2, 1, 4, 0, 6, 70))
    found = {
        "h0-bound-gap": "h0-bound-gap" in gap.flags and "theorem h0 bound" in gap.asserted,
        "s-positivity-sign": "s-positivity-sign" in sign.flags
        and "E3: extension space nonzero as stated" in sign.asserted,
        "divisor-sum-mismatch": "divisor-sum-mismatch" in mismatch.flags
        and mismatch.parameters["stated_D_last"] != mismatch.parameters["D"][-1],
    }
    report(10, all(found.values()), f"flags present: {found}")


def _cli(argv) -> int:
    return cli.main([str(a) for a in argv])


def test_criterion_11_cli_round_trip(tmp_path, capsys):
    requests = list(grid_rank3_s2()) + list(grid_rank3_s1()) + list(grid_rank4_s0())
    requests += [PlanRequest(0, 0, 4, 1, 0, 20)]
    for req in grid_rank_r_pos():
        th = c2_threshold(req)
        requests.append(PlanRequest(req.g, req.e, req.rank, req.s, req.t, th.value + 1))
    accepted = failures = 0
    doc = tmp_path / "plan.json"
    for req in requests:
        try:
            plan(req)
        except PlanError:
            continue
        accepted += 1
        code = _cli(["plan", "--genus", req.g, "--e", req.e, "--rank", req.rank,
                     "--c1", f"{req.s},{req.t}", "--c2", req.c2, "--out", doc])
        failures += code != 0 or _cli(["check", doc, "--out", tmp_path / "check.json"]) != 0
    capsys.readouterr()
    echoes = []
    for req in (PlanRequest(0, 1, 4, 0, 0, 40), PlanRequest(2, 0, 4, 1, 0, 30, "rankr-ebar-lt-minus-one"),
                PlanRequest(0, 0, 3, 1, 0, 7)):
        th = c2_threshold(req)
        argv = ["plan", "--genus", req.g, "--e", req.e, "--rank", req.rank, "--c1", f"{req.s},{req.t}",
                "--c2", req.c2] + (["--theorem", req.theorem] if req.theorem else [])
        code = _cli(argv)
        err = capsys.readouterr().err
        echoes.append(code == 2 and f"threshold: {'>' if th.strict else '>='} {th.value}" in err)
    ok = failures == 0 and accepted > 0 and all(echoes)
    report(11, ok, f"plan -> check on {accepted} accepted grid points, {failures} failures; "
                   f"below-threshold exit 2 with threshold echoed {sum(echoes)}/{len(echoes)}")
