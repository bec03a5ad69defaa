import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepint.polyalg import MultiPoly, RationalFunc
from sepint.valuation import INFINITY, laplacian_valuation_drop, poly_vp, product_formula_check, v_inf, vp
from sepint.verify import _axiom_failures, _build, _irreducible_pool, _random_factored, random_poly

X, Y = MultiPoly.variables(2)
x, y, z = MultiPoly.variables(3)


def test_vp_examples():
    h = X**2 + Y**2
    assert vp(h**3 * X, h) == 3
    assert vp(Y, X) == 0
    assert vp(MultiPoly.zero(2), X) is INFINITY
    assert vp(RationalFunc(X, h**2), h) == -2


def test_v_inf_examples():
    x1 = MultiPoly.variables(1)[0]
    assert v_inf(RationalFunc(x1, x1**2 + 1)) == 1
    assert v_inf(7) == 0
    assert v_inf(RationalFunc(X**2 + Y**2, X)) == -1
    assert v_inf(MultiPoly.zero(2)) is INFINITY


def test_vp_rejects_constant_p():
    with pytest.raises(ValueError):
        vp(X, MultiPoly.constant(3, 2))


def test_infinity_arithmetic():
    assert INFINITY > 10**9 and not INFINITY < 5
    assert INFINITY + 3 is INFINITY and 3 + INFINITY is INFINITY
    assert min(INFINITY, 2) == 2
    with pytest.raises(ArithmeticError):
        INFINITY - INFINITY
    with pytest.raises(ArithmeticError):
        -INFINITY


def test_product_formula_examples():
    assert product_formula_check(2, [(X, 3)])
    assert product_formula_check(1, [], nvars=2)
    assert product_formula_check(1, [(X**2 + Y**2, 2), (X, 1)])
    assert product_formula_check(Fraction(-3, 7), [(X + 1, -2), (Y, 4)])


@given(st.integers(0, 10**6))
def test_valuation_axioms_random_factored(seed):
    rng = random.Random(seed)
    pool = _irreducible_pool()
    f = _build(*_random_factored(rng, pool))
    g = _build(*_random_factored(rng, pool))
    p = pool[rng.randrange(len(pool))]
    assert _axiom_failures(lambda r: vp(r, p), f, g) == []
    assert _axiom_failures(v_inf, f, g) == []


@given(st.integers(0, 10**6))
def test_vp_representation_independent(seed):
    rng = random.Random(seed)
    pool = _irreducible_pool()
    f = _build(*_random_factored(rng, pool))
    c = random_poly(rng, 2, 2, 3)
    for p in pool:
        assert vp(RationalFunc(f.num * c, f.den * c), p) == vp(f, p)


@given(st.integers(0, 10**6))
def test_product_formula_random(seed):
    rng = random.Random(seed)
    u, factors = _random_factored(rng, _irreducible_pool())
    assert product_formula_check(u, factors, nvars=2)


def test_laplacian_drop_examples():
    assert laplacian_valuation_drop(X**5, X) == 2
    q = x**2 + y**2 + z**2
    assert laplacian_valuation_drop(q**3, q) == 1
    # vp(f) = 1 is outside the generic statement; the drop is 0 or 1
    p = X**2 + Y**3 + 1
    assert laplacian_valuation_drop(p * (X + 2), p) in (0, 1)


@pytest.mark.parametrize("nu", [2, 3, 4])
def test_laplacian_drop_generic_family(nu):
    rng = random.Random(nu)
    p = X**2 + Y**3 + 1
    for _ in range(3):
        g = random_poly(rng, 2, 2, 3)
        if poly_vp(g, p) != 0:
            continue
        assert laplacian_valuation_drop(g * p**nu, p) == 2


@pytest.mark.parametrize("nu", [2, 3, 4])
def test_laplacian_drop_quadric_family(nu):
    q = x**2 + y**2 + z**2
    assert laplacian_valuation_drop(q**nu, q) == 1
