"""Exact polynomial identities behind the geometry.

Derivatives of powers through jet polynomials, the Laplacian on h^nu, the
degree-8 witness for p | grad p . grad p, valuations, and the minimal
polynomial of zeta = h^(-1/m) with its companion matrix.
"""
from sepint import (
    MultiPoly,
    RationalFunc,
    companion,
    charpoly_of_power,
    dual_quadric_divisible,
    graded_laplacian,
    load_octic,
    minpoly_of_root_body,
    q_polynomial,
    q_tilde,
    structural_form_check,
    substitute_jets,
    v_inf,
    valuation_growth,
    vp,
)
from sepint.polyalg import laplacian

x, y = MultiPoly.variables(2)

# d^2/dx^2 f^m = Q(m, jets) f^(m-2); Q is a polynomial in m
print("Q_(2,0) =", q_polynomial((2, 0)).to_text())
print("Qtilde_1 =", q_tilde(1, 2).to_text())
f = x**2 + y**2
print("Lap (x^2+y^2)^2 =", substitute_jets(q_tilde(1, 2), f, 2).to_text())

# Lap(g h^nu) = R h^nu with R rational
h = x**4 + y**4
R = graded_laplacian(x, h, 3)
print("identity holds:", R * RationalFunc(h**3) == RationalFunc(laplacian(x * h**3)))

# the octic divides its own gradient square
p = load_octic()
print("octic terms", len(p), "divisible", dual_quadric_divisible(p))

# valuations
print("vp((x^2+y^2)^3 x, x^2+y^2) =", vp(f**3 * x, f), " v_inf((x^2+y^2)/x) =", v_inf(f / x))

# zeta = h^(-1/2) solves lambda^2 - 1/h; C^2 = h^-1 I so v_h(C^s) falls like -s/2
mp = minpoly_of_root_body(h, 4)
C = companion(mp)
print("charpoly of C^2:", [c.to_text() for c in charpoly_of_power(C, 2)])
print("v_h(C^s), s=1..6:", valuation_growth(C, h, range(1, 7)))
print("reconstructed form:", structural_form_check(mp).to_text())
