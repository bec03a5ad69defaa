"""Isotropic volume functions of a few convex bodies.

V_H(t) is the volume of the part of K within distance t of the subspace
H-perp.  For the unit 3-ball and a line H it is 2 pi (t - t^3 / 3).
"""
import math

import numpy as np

from sepint import ball_volume_oracle, fixture, isotropic_volume, random_subspaces

ts = np.linspace(0.1, 0.9, 5)

# the ball: every direction gives the same curve, and the closed form agrees
ball = fixture("ball3")
for H in random_subspaces(3, 1, 3, seed=0):
    print("ball  ", np.round(isotropic_volume(ball, H, ts), 6))
print("oracle", np.round([ball_volume_oracle(3, 1, 1.0, t) for t in ts], 6))
print("closed", np.round(2 * math.pi * (ts - ts**3 / 3), 6))

# an ellipsoid: the curve depends on the direction through a(H) t + b(H) t^3
ell = fixture("ellipsoid125")
for H in random_subspaces(3, 1, 3, seed=0):
    print("ellip ", np.round(isotropic_volume(ell, H, ts * ell.inradius()), 6))

# the l4 ball {x^4 + y^4 + z^4 <= 1}: no such two-term structure
l4 = fixture("l4ball3")
print("l4 inradius", l4.inradius(), "circumradius", l4.circumradius())
for H in random_subspaces(3, 1, 3, seed=0):
    print("l4    ", np.round(isotropic_volume(l4, H, ts), 6))

# resolution is explicit; at 16 the ball is already exact to rounding
for res in (8, 16, 24):
    v = isotropic_volume(ball, np.array([[1.0, 0, 0]]), 0.5, resolution=res)
    print(res, v, abs(v / ball_volume_oracle(3, 1, 1.0, 0.5) - 1))
