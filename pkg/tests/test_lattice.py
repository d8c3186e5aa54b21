from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prior_forge.errors import InvalidSurface
from prior_forge.lattice import (
    C0,
    F,
    DivisorClass,
    Effectivity,
    curve_h0_interval,
    effectivity,
    h0_upper,
    intersect,
    make_surface,
)
from strategies import divisors, surfaces


@pytest.mark.parametrize(
    "g, e, ebar, K",
    [(0, 0, 2, (-2, -2)), (1, 0, 0, (-2, 0)), (2, 1, -1, (-2, 1))],
)
def test_surface_constants(g, e, ebar, K):
    S = make_surface(g, e)
    assert S.ebar == ebar
    assert S.K == DivisorClass(*K)


def test_rejects_negative_invariants():
    with pytest.raises(InvalidSurface):
        make_surface(-1, 0)
    with pytest.raises(InvalidSurface):
        make_surface(0, -1)


def test_intersection_examples():
    assert intersect(make_surface(0, 2), C0, C0) == -2
    for e in range(6):
        assert intersect(make_surface(0, e), C0, F) == 1
        assert intersect(make_surface(0, e), F, F) == 0
    assert intersect(make_surface(0, 1), DivisorClass(2, 3), DivisorClass(1, -1)) == -1


def test_effectivity_examples():
    assert effectivity(make_surface(0, 0), DivisorClass(-1, 5)).verdict is Effectivity.NON_EFFECTIVE
    assert effectivity(make_surface(0, 0), DivisorClass(1, 0)).verdict is Effectivity.EFFECTIVE
    assert effectivity(make_surface(2, 0), DivisorClass(1, 2)).verdict is Effectivity.UNKNOWN


def test_h0_upper_examples():
    assert h0_upper(make_surface(0, 1), DivisorClass(-1, 5)) == 0
    assert h0_upper(make_surface(0, 1), DivisorClass(2, 1)) == 3


@pytest.mark.parametrize("g, deg, want", [(0, -1, (0, 0)), (1, 3, (3, 3)), (2, 2, (1, 2))])
def test_curve_h0_interval(g, deg, want):
    assert curve_h0_interval(g, deg) == want


def test_divisor_serialization():
    D = DivisorClass(3, -4)
    assert DivisorClass.from_list(D.to_list()) == D
    assert str(D) == "(3,-4)"


@given(surfaces, divisors, divisors, divisors)
def test_bilinear_and_symmetric(S, x, y, z):
    assert intersect(S, x + y, z) == intersect(S, x, z) + intersect(S, y, z)
    assert intersect(S, x, y) == intersect(S, y, x)


@given(surfaces, divisors)
def test_adjunction_parity(S, D):
    assert (intersect(S, D, D) - intersect(S, D, S.K)) % 2 == 0


@given(surfaces, divisors)
def test_non_effective_has_no_sections(S, D):
    if effectivity(S, D).verdict is Effectivity.NON_EFFECTIVE:
        assert h0_upper(S, D) == 0


@given(surfaces, divisors)
def test_effectivity_regions(S, D):
    v = effectivity(S, D).verdict
    if v is Effectivity.NON_EFFECTIVE:
        assert D.a < 0 or D.b < 0
    elif v is Effectivity.EFFECTIVE:
        assert D.a >= 0 and D.b > 2 * S.g - 2
    else:
        assert D.a >= 0 and 0 <= D.b <= 2 * S.g - 2


@given(surfaces, st.integers(0, 8), st.integers(-10, 20))
def test_h0_upper_monotone_in_b(S, a, b):
    assert h0_upper(S, DivisorClass(a, b)) <= h0_upper(S, DivisorClass(a, b + 1))


@given(st.integers(0, 5), st.integers(0, 8), st.integers(-10, 20))
def test_h0_upper_on_product(g, a, b):
    assert h0_upper(make_surface(g, 0), DivisorClass(a, b)) == (a + 1) * max(0, b + 1)


@given(divisors, divisors)
def test_group_laws(x, y):
    assert x + y == y + x
    assert x + (-x) == DivisorClass(0, 0)
    assert x - y == x + (-y)
