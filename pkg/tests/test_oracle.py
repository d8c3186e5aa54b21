from __future__ import annotations

import dataclasses

from hypothesis import given, settings

from prior_forge import oracle
from prior_forge.chern import ChernData, euler_char
from prior_forge.engine import Extension, IdealSheaf, LineBundle, chern_of
from prior_forge.lattice import DivisorClass, intersect, make_surface
from prior_forge.planners import PlanRequest, plan
from strategies import divisors, surfaces, trees


def test_whitney_worked_instance():
    S = make_surface(0, 1)
    pieces = oracle.ChainConstituents(
        (
            (DivisorClass(0, 2), 0),
            (DivisorClass(-5, 3), 1),
            (DivisorClass(2, 2), 4),
            (DivisorClass(3, -7), 44),
        )
    )
    assert oracle.whitney_c2(S, pieces) == 100


@given(surfaces, divisors)
def test_whitney_two_leaves(S, D):
    pieces = oracle.ChainConstituents(((D, 0), (-D, 0)))
    assert oracle.whitney_c2(S, pieces) == -intersect(S, D, D)


@settings(max_examples=300)
@given(surfaces, trees())
def test_bracketing_independence(S, T):
    assert oracle.whitney_c2(S, oracle.flatten(T)) == chern_of(S, T).c2


@given(trees())
def test_flatten_keeps_leaves(T):
    pieces = oracle.flatten(T)

    def leaves(node):
        if isinstance(node, Extension):
            return leaves(node.sub) + leaves(node.quot)
        return [(node.D, node.length if isinstance(node, IdealSheaf) else 0)]

    assert list(pieces.pieces) == leaves(T)


@given(surfaces, divisors)
def test_leray_matches_riemann_roch(S, D):
    assert oracle.chi_line_leray(S, D.a, D.b) == euler_char(S, ChernData(1, D, 0))


@settings(max_examples=200)
@given(surfaces, trees(), divisors)
def test_chain_chi_matches_riemann_roch(S, T, D):
    from prior_forge.chern import twist

    assert oracle.chi_chain(S, T, D) == euler_char(S, twist(S, chern_of(S, T), D))


def test_closed_form_suite_is_clean():
    report = oracle.closed_form_suite()
    assert report.mismatch_count == 0
    assert all(r.points > 0 for r in report.identities)


def test_closed_form_suite_reports_a_wrong_identity():
    bad = oracle._run("off by one", ["g", "e"], oracle.DEFAULT_GRID,
                      lambda S, p: 1 - S.g, lambda S, p: 2 - S.g)
    assert len(bad.mismatches) == bad.points == 16


def test_cross_check_worked_plans():
    for args in [(0, 0, 4, 1, 0, 20), (0, 0, 3, 1, 0, 103), (0, 1, 4, 0, 0, 100), (0, 0, 3, 5, -2, 100)]:
        p = plan(PlanRequest(*args))
        assert oracle.cross_check_plan(p.request.surface, p) == []


def test_cross_check_catches_a_shortened_scheme():
    p = plan(PlanRequest(0, 1, 4, 0, 0, 100))
    last = p.chain.quot.quot.quot
    shorter = IdealSheaf(last.D, last.length - 1, last.generic, last.label)
    chain = Extension(p.chain.sub, Extension(p.chain.quot.sub, Extension(p.chain.quot.quot.sub, shorter, False), False))
    bad = dataclasses.replace(p, chain=chain)
    kinds = {f["kind"] for f in oracle.cross_check_plan(bad.request.surface, bad)}
    assert {"whitney", "parameter"} <= kinds
    bad = dataclasses.replace(p, parameters={**p.parameters, "b": 3})
    assert [f["kind"] for f in oracle.cross_check_plan(bad.request.surface, bad)] == ["parameter"]
    p = plan(PlanRequest(0, 0, 4, 1, 0, 20))
    bad = dataclasses.replace(p, parameters={**p.parameters, "b": 4})
    assert [f["kind"] for f in oracle.cross_check_plan(bad.request.surface, bad)] == ["parameter"]


def test_line_bundle_leaf():
    S = make_surface(1, 1)
    T = Extension(LineBundle(DivisorClass(1, 0)), LineBundle(DivisorClass(0, 2)))
    assert oracle.whitney_c2(S, oracle.flatten(T)) == 2
