"""Numerical rank of sampled volume matrices M[i, j] = V_{H_i}(t_j).

A separable V (finite sum of a_i(H) b_i(t)) caps the rank; the ball gives 1,
the ellipsoid 2.  The l4 ball has no such representation and its rank grows
with the grid, slowly, because its singular values decay geometrically.
"""
import numpy as np

from sepint import build_sep_matrix, fixture, numerical_rank, rank_growth_curve

for name in ("ball3", "ellipsoid125", "l4ball3"):
    M = build_sep_matrix(fixture(name), 1, 16, 16, seed=0)
    r = numerical_rank(M, 1e-7)
    s = r.singular_values / r.singular_values[0]
    print(f"{name:13s} rank {r.rank:2d}  sigma/sigma_1:", np.array2string(s[:9], precision=1))

# rank against grid size at tol 1e-7
print("l4 curve", rank_growth_curve(fixture("l4ball3"), 1, [8, 16, 24], seed=0))

# the count depends on where the spectrum crosses tol; a looser or tighter tol moves it
M = build_sep_matrix(fixture("l4ball3"), 1, 24, 24, seed=0)
for tol in (1e-5, 1e-7, 1e-9, 1e-11):
    print("tol", tol, "rank", numerical_rank(M, tol).rank)
