import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import polys
from sepint.calculus import (
    GradedElement,
    JetPoly,
    dual_quadric_divisible,
    gradient_norm_power,
    gradient_power,
    graded_laplacian,
    grading_preserved,
    load_octic,
    multi_indices,
    q_polynomial,
    q_tilde,
    substitute_jets,
)
from sepint.polyalg import MultiPoly, RationalFunc, laplacian, partial
from sepint.verify import random_poly

X, Y = MultiPoly.variables(2)
x, y, z = MultiPoly.variables(3)


def _d(f, alpha):
    for i, a in enumerate(alpha):
        for _ in range(a):
            f = partial(f, i)
    return f


def test_q_polynomial_examples():
    m = JetPoly.m(2)
    u0, u10, u20 = JetPoly.jet((0, 0)), JetPoly.jet((1, 0)), JetPoly.jet((2, 0))
    assert q_polynomial((0, 0)) == JetPoly.one(2)
    assert q_polynomial((1, 0)) == m * u10
    assert q_polynomial((2, 0)) == m.shift_m(1) * u10 * u10 + m * u0 * u20


def test_q_polynomial_jets_bounded_by_alpha():
    for alpha in multi_indices(2, 4):
        Q = q_polynomial(alpha)
        assert all(all(b <= a for b, a in zip(beta, alpha)) for beta in Q.jets())
        assert Q.m_degree() <= sum(alpha)


def test_q_tilde_examples():
    m = JetPoly.m(2)
    u0 = JetPoly.jet((0, 0))
    grad2 = gradient_norm_power(1, 2)
    lap = JetPoly.jet((2, 0)) + JetPoly.jet((0, 2))
    assert q_tilde(0, 2) == JetPoly.one(2)
    assert q_tilde(1, 2) == m.shift_m(1) * grad2 + m * u0 * lap
    assert q_tilde(1, 2).coeff_of_m(2) == grad2


def test_substitute_jets_examples():
    x1 = MultiPoly.variables(1)[0]
    assert substitute_jets(q_polynomial((1,)), x1**2, 3) == 6 * x1
    assert substitute_jets(JetPoly.one(2), X**3 + Y, 5) == MultiPoly.constant(1, 2)
    assert substitute_jets(q_tilde(1, 2), X**2 + Y**2, 2) == 16 * (X**2 + Y**2)


def test_substitute_jets_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        substitute_jets(q_polynomial((1, 0)), x, 2)


@pytest.mark.parametrize("alpha", [a for n in range(1, 5) for a in multi_indices(2, n)])
def test_jet_oracle_up_to_order_4(alpha):
    rng = random.Random(hash(alpha) & 0xFFFF)
    Q = q_polynomial(alpha)
    n = sum(alpha)
    assert Q.coeff_of_m(n) == gradient_power(alpha)
    for _ in range(2):
        f = random_poly(rng, 2, 2, 3)
        for m in (n, n + 1, n + 3):
            assert _d(f**m, alpha) == substitute_jets(Q, f, m) * f ** (m - n)


@pytest.mark.parametrize("i", [1, 2])
def test_q_tilde_matches_iterated_laplacian(i):
    rng = random.Random(i)
    Qt = q_tilde(i, 2)
    assert Qt.coeff_of_m(2 * i) == gradient_norm_power(i, 2)
    for _ in range(3):
        f = random_poly(rng, 2, 2, 3)
        m = 2 * i + rng.randint(0, 2)
        g = f**m
        for _ in range(i):
            g = laplacian(g)
        assert g == substitute_jets(Qt, f, m) * f ** (m - 2 * i)


def test_graded_laplacian_examples():
    h = x**2 + y**2 + z**2
    one = MultiPoly.constant(1, 3)
    assert graded_laplacian(one, h, 1) == RationalFunc(6 * one, h)
    assert graded_laplacian(one, h, 0).is_zero()
    h2 = X**2 + Y**2
    assert graded_laplacian(MultiPoly.constant(1, 2), h2, 2) * RationalFunc(h2**2) == RationalFunc(laplacian(h2**2))


@given(polys(nvars=2, max_deg=2), polys(nvars=2, max_deg=2, nonzero=True), st.integers(2, 4))
def test_graded_laplacian_identity_random(g, h, nu):
    assert graded_laplacian(g, h, nu) * RationalFunc(h**nu) == RationalFunc(laplacian(g * h**nu))


def test_graded_laplacian_fractional_nu_on_norm():
    # Lap |x|^(2 nu) = 2 nu (2 nu + d - 2) |x|^(2 nu - 2) in d variables
    h = x**2 + y**2 + z**2
    nu = Fraction(1, 4)
    got = graded_laplacian(MultiPoly.constant(1, 3), h, nu)
    assert got == RationalFunc(MultiPoly.constant(2 * nu * (2 * nu + 1), 3), h)


def test_grading_examples():
    assert grading_preserved(MultiPoly.constant(1, 2), X**2 + Y**2, 1, 1)
    assert grading_preserved(MultiPoly.zero(2), X**2 + Y**2, 1, 1)


@given(polys(nvars=2, max_deg=2), polys(nvars=2, max_deg=2, nonzero=True), st.integers(1, 3), st.integers(0, 5))
def test_grading_preserved_random(g, h, m, i):
    assert grading_preserved(g, h, m, i % (2 * m))


def test_graded_element_laplacian_keeps_grade():
    h = X**4 + Y**4
    e = GradedElement(RationalFunc(X), 7, h, 2)
    assert e.grade == 3 and e.nu == Fraction(3, 4)
    assert e.laplacian().grade == 3


def test_dual_quadric_examples():
    assert dual_quadric_divisible(load_octic())
    assert not dual_quadric_divisible(x)
    assert dual_quadric_divisible(x**2 + y**2 + z**2)


def test_dual_quadric_under_similarity():
    q = x**2 + y**2 + z**2
    rot = [[Fraction(3, 5), Fraction(4, 5), 0], [Fraction(-4, 5), Fraction(3, 5), 0], [0, 0, 1]]
    assert dual_quadric_divisible(q.linear_change(rot))
    assert dual_quadric_divisible(q.linear_change([[3, 4, 0], [-4, 3, 0], [0, 0, 5]]))
    # a non-conformal change breaks it: grad transforms with A A^T
    assert not dual_quadric_divisible(q.linear_change([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_octic_shape():
    p = load_octic()
    assert p.nvars == 4 and len(p) == 35 and p.is_homogeneous(8)
