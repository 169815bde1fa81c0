"""Predict the iterated solution's partition-point error from first principles.

The iterated Galerkin error at a partition point t_i behaves like

    z_S(t_i) - x(t_i) = C(t_i) * h^(2r) + higher order,

and for piecewise constants (r = 1) the coefficient C has a closed
perturbation-theory form built from two resolvent solves:

    C = E_2 + T/2

    T(t)   = (integral of J_1(tau)^2 dtau) * [(I - K')^{-1} K'' (x')^2](t)
           = (1/12) * [(I - K')^{-1} K'' (x')^2](t)

    E_2(t) = bbar[2,2] * [(I - K')^{-1} K' x''](t)
             - bbar[2,1] * ( lt(t,1) x'(1) - lt(t,0) x'(0) )

where K' and K'' are the first and second derivatives of the integral
operator at the exact solution x, and lt is the kernel of
(I - K')^{-1} K'.  Everything on the right-hand side is computable with a
dense quadrature discretization, so the prediction is independent of the
Galerkin solver itself.

This script computes C(t_i) that way, measures the solver's actual scaled
errors at two mesh sizes, Richardson-extrapolates them to h -> 0, and
prints all three columns side by side.  Agreement to several digits is a
strong end-to-end consistency check of the projection, quadrature, and
Newton machinery.
"""

import numpy as np

from urysohn import (
    bbar,
    build_grid,
    gauss_rule,
    get_problem,
    iterated_eval,
    j_square_integral,
    sinh_greens_branches,
    solve_discrete_galerkin,
)

problem = get_problem("rpk-aks")
x = problem.exact

gamma = np.sqrt(12.0)
g_lower, g_upper = sinh_greens_branches(gamma)


def greens(s, t):
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    return np.where(t <= s, g_lower(s, t), g_upper(s, t))


# Derivatives of the exact solution x(t) = 2/(2t+1) and of the
# nonlinearity psi(u) = 12u - 2u^3 evaluated along x.
dx = lambda t: -4.0 / (2 * t + 1) ** 2
d2x = lambda t: 16.0 / (2 * t + 1) ** 3
psi_u = lambda t: 12.0 - 6.0 * x(t) ** 2
psi_uu = lambda t: -12.0 * x(t)

# ---------------------------------------------------------------------------
# Dense discretization of the linearized operator K' at the exact solution.
# The kernel G(s,t) psi_u(t) is continuous with a derivative kink on the
# diagonal, so a fine composite Gauss grid resolves it well.
# ---------------------------------------------------------------------------

fine = build_grid(800, 1, gauss_rule(6))
nodes, weights = fine.nodes, fine.node_weights
kprime = greens(nodes[:, None], nodes[None, :]) * psi_u(nodes[None, :])
resolvent_lhs = np.eye(nodes.size) - kprime * weights[None, :]


def apply_kprime(values_at_nodes, s):
    s = np.asarray(s, dtype=float)
    return (greens(s[:, None], nodes[None, :]) * psi_u(nodes[None, :]) * weights) @ (
        values_at_nodes
    )


def solve_linearized(rhs_at_nodes):
    """Solve (I - K') y = rhs on the dense grid."""
    return np.linalg.solve(resolvent_lhs, rhs_at_nodes)


t_i = np.arange(1, 20) / 20.0

# --- T/2: second-order (nonlinear) contribution ----------------------------
rhs = (greens(nodes[:, None], nodes[None, :]) * (psi_uu(nodes) * dx(nodes) ** 2) * weights).sum(
    axis=1
)
y = solve_linearized(rhs)
rhs_at_ti = (greens(t_i[:, None], nodes[None, :]) * (psi_uu(nodes) * dx(nodes) ** 2) * weights).sum(
    axis=1
)
t_term = 0.5 * j_square_integral(1) * (rhs_at_ti + apply_kprime(y, t_i))

# --- E_2: quadrature/projection contribution --------------------------------
y2 = solve_linearized(apply_kprime(d2x(nodes), nodes))
l_x2 = apply_kprime(d2x(nodes), t_i) + apply_kprime(y2, t_i)


def resolvent_kernel_column(t_fixed):
    """lt(., t_fixed): solve (I - K') g = kprime(., t_fixed), then evaluate."""
    rhs_col = greens(nodes, np.full_like(nodes, t_fixed)) * psi_u(t_fixed)
    g = solve_linearized(rhs_col)
    direct = greens(t_i, np.full(t_i.shape, t_fixed)) * psi_u(t_fixed)
    return direct + apply_kprime(g, t_i)


e_term = bbar(1, 2) * l_x2 - bbar(1, 1) * (
    resolvent_kernel_column(1.0) * dx(1.0) - resolvent_kernel_column(0.0) * dx(0.0)
)

predicted = e_term + t_term

# ---------------------------------------------------------------------------
# Measured coefficients: signed error / h^2 at two mesh sizes, then
# Richardson-extrapolate the coefficient itself to the h -> 0 limit.
# ---------------------------------------------------------------------------


def measured_coefficient(n):
    sol = solve_discrete_galerkin(problem, n, 1)
    pts = np.arange(1, n) / n
    err = iterated_eval(sol, pts) - x(pts)
    return pts, err / (1.0 / n) ** 2


pts40, c40 = measured_coefficient(40)
pts80, c80 = measured_coefficient(80)
at40 = (t_i * 40).round().astype(int) - 1
at80 = (t_i * 80).round().astype(int) - 1
extrapolated = (4 * c80[at80] - c40[at40]) / 3.0

print("Scaled partition-point error (z_S - x)/h^2 for the builtin problem, r=1")
print()
print(f"{'t':>5} {'predicted C(t)':>15} {'measured (h->0)':>16} {'rel diff':>10}")
for i, t in enumerate(t_i):
    rel = abs(extrapolated[i] - predicted[i]) / max(abs(predicted[i]), 1e-30)
    print(f"{t:5.2f} {predicted[i]:15.6f} {extrapolated[i]:16.6f} {rel:10.2e}")

worst = np.max(
    np.abs(extrapolated - predicted) / np.maximum(np.abs(predicted), 1e-30)
)
print()
print(f"worst relative difference: {worst:.2e}")
print("The prediction uses only dense quadrature and two resolvent solves;")
print("its agreement with the solver is an independent end-to-end check.")
