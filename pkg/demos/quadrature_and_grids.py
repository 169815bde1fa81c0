"""Gauss-Legendre rules and composite grids: exactness and convergence.

A rho-point Gauss rule on [0, 1] integrates polynomials up to degree
2*rho - 1 exactly.  Splitting [0, 1] into n coarse subintervals with p
fine pieces each (a CompositeGrid) keeps that exactness piecewise while
the error for general smooth integrands decays like h^(2*rho).
"""

import numpy as np

from urysohn import build_grid, gauss_rule, integrate_composite

rule = gauss_rule(2)
print("2-point rule on [0,1]:")
print("  nodes  ", rule.nodes)
print("  weights", rule.weights)
print("  degree of precision:", rule.degree)
print()

print("monomial moments with the 5-point rule (exact through degree 9):")
five = gauss_rule(5)
for k in (0, 3, 6, 9, 10):
    quad = float(five.weights @ five.nodes**k)
    exact = 1.0 / (k + 1)
    print(f"  t^{k:<2d}  quadrature {quad:.15f}  exact {exact:.15f}  diff {quad - exact:+.1e}")
print()

grid = build_grid(3, 2, gauss_rule(2))
print("composite grid: n=3 coarse intervals, p=2 fine pieces, 2-point rule")
print("  partition points:", grid.partition_points)
print("  first block of nodes:", np.round(grid.nodes[:4], 6))
print("  node weights sum to", grid.node_weights.sum())
print()

print("composite error for exp(t), 2-point rule (expected order 4):")
exact = np.e - 1
prev = None
for m in (2, 4, 8, 16, 32):
    approx = integrate_composite(np.exp, build_grid(m, 1, gauss_rule(2)))
    err = abs(approx - exact)
    rate = "" if prev is None else f"  order {np.log2(prev / err):5.2f}"
    print(f"  m={m:<3d} error {err:.3e}{rate}")
    prev = err
