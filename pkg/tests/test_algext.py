import random
from fractions import Fraction

import pytest

from sepint.algext import (
    MinPolyData,
    PerfectPowerError,
    charpoly,
    charpoly_of_power,
    coeff_homogeneity_check,
    companion,
    det,
    growth_slope,
    mat_pow,
    minpoly_of_root_body,
    perfect_root,
    power_sums,
    structural_form_check,
    valuation_growth,
)
from sepint.polyalg import MultiPoly, RationalFunc
from sepint.valuation import vp
from sepint.verify import power_root_fixtures, random_poly

X, Y = MultiPoly.variables(2)
ONE = MultiPoly.constant(1, 2)
ZERO = RationalFunc(MultiPoly.zero(2))


def inv(h):
    return RationalFunc(ONE, h)


def test_minpoly_examples():
    mp = minpoly_of_root_body(X**2 + Y**2, 2)
    assert mp.m == 1 and mp.coeffs == (-inv(X**2 + Y**2),)
    mp = minpoly_of_root_body(X**4 + Y**4, 4)
    assert mp.m == 2 and mp.coeffs[0] == -inv(X**4 + Y**4) and mp.coeffs[1].is_zero()
    with pytest.raises(PerfectPowerError):
        minpoly_of_root_body((X**2 + Y**2) ** 2, 4)
    with pytest.raises(ValueError):
        minpoly_of_root_body(X**3 + Y**3, 3)


def test_minpoly_rejects_zero_constant_coefficient():
    with pytest.raises(ValueError):
        MinPolyData(2, (ZERO, inv(X)))


def test_companion_examples():
    h = X**4 + Y**4
    assert companion(minpoly_of_root_body(X**2 + Y**2, 2)) == [[inv(X**2 + Y**2)]]
    C = companion(minpoly_of_root_body(h, 4))
    assert C == [[ZERO, inv(h)], [RationalFunc(ONE), ZERO]]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_charpoly_of_companion_is_mu(m):
    rng = random.Random(m)
    for _ in range(3):
        coeffs = tuple(RationalFunc(random_poly(rng, 2, 2, 2), random_poly(rng, 2, 1, 2)) for _ in range(m))
        mp = MinPolyData(m, coeffs)
        assert charpoly(companion(mp)) == list(coeffs)
        assert charpoly_of_power(companion(mp), 1) == list(coeffs)


def test_charpoly_of_square():
    h = X**4 + Y**4
    C = companion(minpoly_of_root_body(h, 4))
    assert charpoly_of_power(C, 2) == [RationalFunc(ONE, h**2), -2 * inv(h)]


def test_det_of_power_is_power_of_det():
    h = X**4 + Y**4
    C = companion(minpoly_of_root_body(h, 4))
    d3 = det(mat_pow(C, 3))
    assert d3 == det(C) ** 3
    assert d3 == -RationalFunc(ONE, h**3)


@pytest.mark.parametrize("name,h,two_m", power_root_fixtures())
def test_newton_trace_consistency(name, h, two_m):
    mp = minpoly_of_root_body(h, two_m)
    C = companion(mp)
    ps = power_sums(mp, 4)
    for s in range(1, 5):
        assert charpoly_of_power(C, s)[mp.m - 1] == -ps[s - 1]


@pytest.mark.parametrize("name,h,two_m", power_root_fixtures())
def test_root_fixtures_homogeneous_and_reconstructed(name, h, two_m):
    mp = minpoly_of_root_body(h, two_m)
    assert coeff_homogeneity_check(mp)
    assert structural_form_check(mp) == h


def test_valuation_growth_examples():
    h = X**4 + Y**4
    C = companion(minpoly_of_root_body(h, 4))
    assert valuation_growth(C, h, [2, 4, 6]) == [-1, -2, -3]
    assert valuation_growth(C, X + 1, [1, 2, 3]) == [0, 0, 0]
    q = X**2 + Y**2
    C1 = companion(minpoly_of_root_body(q, 2))
    assert valuation_growth(C1, q, [1, 2, 3]) == [-1, -2, -3]
    with pytest.raises(ValueError):
        valuation_growth(C, h, [9])


@pytest.mark.parametrize("name,h,two_m", [f for f in power_root_fixtures() if f[1].nvars == 2])
def test_growth_slope_matches_mu0(name, h, two_m):
    mp = minpoly_of_root_body(h, two_m)
    s_list = [mp.m * j for j in range(1, 3)]
    vals = valuation_growth(companion(mp), h, s_list)
    assert growth_slope(vals, s_list) == Fraction(vp(mp.coeffs[0], h), mp.m)


def test_homogeneity_examples():
    assert coeff_homogeneity_check(minpoly_of_root_body(X**4 + Y**4, 4))
    assert coeff_homogeneity_check(minpoly_of_root_body(X**2 + Y**2, 2))
    corrupted = MinPolyData(2, (-inv(X**4 + Y**3), ZERO))
    assert not coeff_homogeneity_check(corrupted)


def test_structural_form_examples():
    h = X**4 + Y**4
    assert structural_form_check(minpoly_of_root_body(h, 4)) == h
    assert structural_form_check(minpoly_of_root_body(X**2 + Y**2, 2)) == X**2 + Y**2
    with pytest.raises(ValueError):
        structural_form_check(MinPolyData(1, (-inv((X**2 + Y**2) ** 2),)))
    with pytest.raises(PerfectPowerError):
        structural_form_check(MinPolyData(2, (-inv((X**2 + Y**2) ** 2), ZERO)))


def test_structural_form_with_radius():
    # body of radius r: mu_0 = -1/(r^m h)
    h = X**4 + Y**4
    mp = MinPolyData(2, (-RationalFunc(ONE, h * 9), ZERO))
    assert structural_form_check(mp, r=3) == h


def test_perfect_root():
    q = X**2 + 2 * X * Y + 3 * Y**2
    assert perfect_root(q**3, 3) == q
    assert perfect_root(q**2 * 5, 2) == q
    assert perfect_root(X**4 + Y**4, 2) is None
