"""Urysohn integral equation problems x(s) - int_0^1 k(s,t,x(t)) dt = f(s).

A problem carries the kernel k as two smooth branches meeting at the
diagonal t = s (Green's-function-type kernel), the analytic partial
derivative dk/du needed by Newton's method, the right-hand side f, and
optionally the exact solution for error studies.

The built-in benchmark ``rpk-aks`` is the Hammerstein problem
k(s,t,u) = G(s,t) * (gamma**2 * u - 2 * u**3) with G the Green's function
of -w'' + gamma**2 w under Dirichlet conditions, gamma = sqrt(12), and f
chosen so that the exact solution is phi(s) = 2/(2s + 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationError, UnknownProblemError
from .quadrature import build_grid, gauss_rule, values_on

__all__ = [
    "UrysohnProblem",
    "kernel_eval",
    "residual_check",
    "sinh_greens_branches",
    "hammerstein_problem",
    "get_problem",
    "available_problems",
    "register_problem",
]


@dataclass(frozen=True)
class UrysohnProblem:
    """A Urysohn problem with a kernel split along the diagonal.

    ``kappa_lower(s, t, u)`` is the branch for t <= s and ``kappa_upper``
    the branch for t >= s; both must be smooth on the whole unit square
    and agree on the diagonal.  ``*_du`` are the partial derivatives with
    respect to u.  All callables must broadcast over numpy arrays.

    ``exact`` is the known solution (or None); ``description`` is a short
    human-readable summary for the registry listing.
    """

    name: str
    kappa_lower: Callable
    kappa_upper: Callable
    kappa_lower_du: Callable
    kappa_upper_du: Callable
    f: Callable
    exact: Callable | None = None
    description: str = ""


def kernel_eval(problem: UrysohnProblem, s, t, u, u_derivative_order: int = 0):
    """Evaluate the kernel (or its u-derivative) at (s, t, u), broadcasting.

    Points on the diagonal t == s use the lower branch (t <= s); the two
    branches agree there for a valid problem, so the choice only matters
    for ill-formed inputs.

    Parameters
    ----------
    u_derivative_order : {0, 1}
        0 for the kernel value, 1 for dk/du.
    """
    if u_derivative_order not in (0, 1):
        raise ValueError(f"u_derivative_order must be 0 or 1, got {u_derivative_order}")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    if u_derivative_order == 0:
        lower, upper = problem.kappa_lower, problem.kappa_upper
    else:
        lower, upper = problem.kappa_lower_du, problem.kappa_upper_du
    out = np.where(t <= s, lower(s, t, u), upper(s, t, u))
    if not np.all(np.isfinite(out)):
        raise EvaluationError(f"kernel of {problem.name!r} returned non-finite values")
    return float(out) if out.ndim == 0 else out


def residual_check(problem: UrysohnProblem, candidate, panels: int = 64) -> float:
    """Sup-norm residual of a candidate solution over 101 uniform points.

    Computes max over s in {0, 0.01, ..., 1} of
    |candidate(s) - int_0^1 k(s, t, candidate(t)) dt - f(s)|,
    splitting the integral at t = s so that each branch of the kernel is
    integrated where it is smooth (composite 10-point Gauss with
    ``panels`` panels on each side).

    This is the independent consistency oracle: for the exact solution it
    must be at quadrature accuracy, no solver involved.
    """
    if panels < 16:
        raise ValueError(f"panels must be >= 16, got {panels}")
    s = np.linspace(0.0, 1.0, 101)
    base = build_grid(panels, 1, gauss_rule(10))
    # Nodes/weights of the composite rule on [0, side] for every s at once.
    t_lower = s[:, None] * base.nodes[None, :]
    w_lower = s[:, None] * base.node_weights[None, :]
    t_upper = s[:, None] + (1.0 - s[:, None]) * base.nodes[None, :]
    w_upper = (1.0 - s[:, None]) * base.node_weights[None, :]

    cand_s = values_on(candidate, s)
    k_lower = problem.kappa_lower(s[:, None], t_lower, values_on(candidate, t_lower))
    k_upper = problem.kappa_upper(s[:, None], t_upper, values_on(candidate, t_upper))
    integral = np.sum(w_lower * k_lower, axis=1) + np.sum(w_upper * k_upper, axis=1)
    residual = cand_s - integral - values_on(problem.f, s)
    return float(np.max(np.abs(residual)))


def sinh_greens_branches(gamma: float):
    """Branches of the Green's function of -w'' + gamma**2 w, w(0)=w(1)=0.

    G(s, t) = sinh(gamma*min(s,t)) * sinh(gamma*(1 - max(s,t)))
              / (gamma * sinh(gamma)),
    returned as (lower, upper) callables for t <= s and t >= s.  G is
    symmetric, vanishes when s or t hits the boundary, and its t-derivative
    jumps by -1 across the diagonal.
    """
    denom = gamma * np.sinh(gamma)

    def lower(s, t):
        return np.sinh(gamma * t) * np.sinh(gamma * (1.0 - s)) / denom

    def upper(s, t):
        return np.sinh(gamma * s) * np.sinh(gamma * (1.0 - t)) / denom

    return lower, upper


def hammerstein_problem(
    name: str,
    g_lower: Callable,
    g_upper: Callable,
    psi: Callable,
    psi_du: Callable,
    f: Callable,
    exact: Callable | None = None,
    description: str = "",
) -> UrysohnProblem:
    """Assemble a problem with kernel k(s,t,u) = G(s,t) * psi(t,u)."""
    return UrysohnProblem(
        name=name,
        kappa_lower=lambda s, t, u: g_lower(s, t) * psi(t, u),
        kappa_upper=lambda s, t, u: g_upper(s, t) * psi(t, u),
        kappa_lower_du=lambda s, t, u: g_lower(s, t) * psi_du(t, u),
        kappa_upper_du=lambda s, t, u: g_upper(s, t) * psi_du(t, u),
        f=f,
        exact=exact,
        description=description,
    )


def _build_rpk_aks() -> UrysohnProblem:
    gamma = np.sqrt(12.0)
    g_lower, g_upper = sinh_greens_branches(gamma)

    def psi(t, u):
        return gamma * gamma * u - 2.0 * u**3

    def psi_du(t, u):
        return gamma * gamma - 6.0 * u * u

    def f(s):
        s = np.asarray(s, dtype=float)
        out = (2.0 * np.sinh(gamma * (1.0 - s)) + (2.0 / 3.0) * np.sinh(gamma * s)) / np.sinh(gamma)
        return float(out) if out.ndim == 0 else out

    def exact(s):
        s = np.asarray(s, dtype=float)
        out = 2.0 / (2.0 * s + 1.0)
        return float(out) if out.ndim == 0 else out

    return hammerstein_problem(
        "rpk-aks",
        g_lower,
        g_upper,
        psi,
        psi_du,
        f,
        exact,
        description=(
            "cubic Hammerstein benchmark: sinh Green's-function kernel, "
            "psi(t,u) = 12u - 2u^3, exact solution 2/(2s+1)"
        ),
    )


_REGISTRY: dict[str, UrysohnProblem] = {}


def register_problem(problem: UrysohnProblem) -> None:
    """Add a problem to the registry (name must be unused)."""
    if problem.name in _REGISTRY:
        raise ValueError(f"problem {problem.name!r} is already registered")
    _REGISTRY[problem.name] = problem


def get_problem(name: str) -> UrysohnProblem:
    """Look up a registered problem by name."""
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY)) or "(none)"
        raise UnknownProblemError(f"unknown problem {name!r}; available: {known}") from None


def available_problems() -> list[str]:
    return sorted(_REGISTRY)


register_problem(_build_rpk_aks())
