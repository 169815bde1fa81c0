"""Nystrom discretisation of the Urysohn operator and its Newton solver.

The integral operator is replaced by the composite quadrature sum

    K_m(x)(s) = sum_b W_b * k(s, node_b, x(node_b)),

so the unknown is the vector of values at the quadrature nodes.  Values
anywhere in [0, 1] come from the natural extension x(s) = f(s) + K_m(x)(s).
The kernel is evaluated with the correct branch on each side of t = s via
:func:`urysohn.problems.kernel_eval`, which is what limits the attainable
accuracy to O(fine_h**2): the diagonal kink sits inside quadrature panels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, SingularOperatorError
from .problems import UrysohnProblem, kernel_eval
from .quadrature import CompositeGrid, values_on

__all__ = ["GridFunction", "apply_km", "km_prime_apply", "solve_nystrom", "NystromSolution"]

_MAX_NODES = 5000
_CHUNK = 512


@dataclass(frozen=True)
class GridFunction:
    """Values of a function at all quadrature nodes of a composite grid.

    Ordering matches ``grid.nodes``: coarse subinterval major, then fine
    subinterval, then Gauss point.
    """

    grid: CompositeGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.node_count,):
            raise ValueError(
                f"values shape {v.shape} does not match node count {self.grid.node_count}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("grid-function values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def _check_s(s) -> np.ndarray:
    s_arr = np.asarray(s, dtype=float)
    if s_arr.size and (np.min(s_arr) < 0.0 or np.max(s_arr) > 1.0):
        bad = s_arr[(s_arr < 0.0) | (s_arr > 1.0)].ravel()[0]
        raise DomainError(f"s={bad!r} outside [0, 1]")
    return s_arr


def _weighted_kernel_sum(problem, grid, xvals, s_flat, order, weight_extra=None):
    """sum_b W_b [extra_b] * kernel(s_a, node_b, xvals_b), chunked over a."""
    w = grid.node_weights if weight_extra is None else grid.node_weights * weight_extra
    out = np.empty(s_flat.size)
    for a0 in range(0, s_flat.size, _CHUNK):
        a1 = min(a0 + _CHUNK, s_flat.size)
        block = kernel_eval(
            problem, s_flat[a0:a1, None], grid.nodes[None, :], xvals[None, :], order
        )
        out[a0:a1] = block @ w
    return out


def apply_km(problem: UrysohnProblem, x: GridFunction, s):
    """Evaluate the discretised operator K_m(x) at points s in [0, 1]."""
    s_arr = _check_s(s)
    out = _weighted_kernel_sum(
        problem, x.grid, x.values, np.atleast_1d(s_arr).ravel(), order=0
    )
    return float(out[0]) if s_arr.ndim == 0 else out.reshape(s_arr.shape)


def km_prime_apply(problem: UrysohnProblem, base: GridFunction, v: GridFunction, s):
    """Evaluate the Frechet derivative action K_m'(base)[v] at points s.

    K_m'(base)v(s) = sum_b W_b * dk/du(s, node_b, base_b) * v_b.
    """
    if base.grid is not v.grid and base.grid.node_count != v.grid.node_count:
        raise ValueError("base and direction must live on the same grid")
    s_arr = _check_s(s)
    out = _weighted_kernel_sum(
        problem,
        base.grid,
        base.values,
        np.atleast_1d(s_arr).ravel(),
        order=1,
        weight_extra=v.values,
    )
    return float(out[0]) if s_arr.ndim == 0 else out.reshape(s_arr.shape)


@dataclass(frozen=True)
class NystromSolution:
    """Solution of the Nystrom equation x - K_m(x) = f at the grid nodes."""

    problem: UrysohnProblem
    grid: CompositeGrid
    node_values: GridFunction
    newton_iterations: int
    final_residual_norm: float
    residual_norms: tuple

    def __call__(self, s):
        """Natural extension f(s) + K_m(x)(s); agrees with the node values."""
        s_arr = np.asarray(s, dtype=float)
        f_s = values_on(self.problem.f, np.atleast_1d(s_arr).ravel())
        out = f_s + apply_km(self.problem, self.node_values, np.atleast_1d(s_arr).ravel())
        return float(out[0]) if s_arr.ndim == 0 else out.reshape(s_arr.shape)


def solve_nystrom(
    problem: UrysohnProblem,
    grid: CompositeGrid,
    tol: float = 1e-12,
    max_iter: int = 50,
    initial=None,
) -> NystromSolution:
    """Solve the Nystrom equation by Newton's method with a dense Jacobian.

    Parameters
    ----------
    problem : UrysohnProblem
    grid : CompositeGrid
        Node count m*rho must not exceed 5000 (dense linear algebra).
    tol : float
        Convergence threshold on the sup norm of the node residual
        x - K_m(x) - f.
    max_iter : int
        Maximum number of Newton iterations (residual evaluations).
    initial : None, callable, or ndarray
        Starting values at the nodes; defaults to f.

    Raises
    ------
    ConvergenceError
        If the iteration does not reach ``tol`` (carries the residual trace).
    SingularOperatorError
        If I - K_m'(x) is numerically singular at some iterate.
    """
    n_nodes = grid.node_count
    if n_nodes > _MAX_NODES:
        raise ValueError(f"grid has {n_nodes} nodes; dense solve capped at {_MAX_NODES}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    f_nodes = values_on(problem.f, grid.nodes)
    if initial is None:
        x = f_nodes.copy()
    elif callable(initial):
        x = values_on(initial, grid.nodes)
    else:
        x = np.asarray(initial, dtype=float).copy()
        if x.shape != (n_nodes,):
            raise ValueError(f"initial values shape {x.shape}, expected ({n_nodes},)")

    trace = []
    for iteration in range(1, max_iter + 1):
        km_x = _weighted_kernel_sum(problem, grid, x, grid.nodes, order=0)
        residual = x - km_x - f_nodes
        rnorm = float(np.max(np.abs(residual)))
        trace.append(rnorm)
        if rnorm <= tol:
            return NystromSolution(
                problem=problem,
                grid=grid,
                node_values=GridFunction(grid, x),
                newton_iterations=iteration,
                final_residual_norm=rnorm,
                residual_norms=tuple(trace),
            )
        # J = I - A with A_ab = W_b * dk/du(node_a, node_b, x_b)
        jac = kernel_eval(problem, grid.nodes[:, None], grid.nodes[None, :], x[None, :], 1)
        jac *= -grid.node_weights[None, :]
        jac[np.diag_indices_from(jac)] += 1.0
        try:
            step = np.linalg.solve(jac, -residual)
        except np.linalg.LinAlgError:
            raise SingularOperatorError(
                "Newton matrix I - K_m'(x) is singular: 1 is numerically an "
                "eigenvalue of the linearised operator at the current iterate",
                residual_norms=trace,
            ) from None
        if not np.all(np.isfinite(step)):
            raise ConvergenceError("Newton step is non-finite", residual_norms=trace)
        x = x + step

    raise ConvergenceError(
        f"Newton did not reach tol={tol} in {max_iter} iterations "
        f"(last residual {trace[-1]:.3e})",
        residual_norms=trace,
    )
