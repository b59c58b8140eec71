"""Exact first-order updates on quadratics, one scheme per polynomial family.

Each method below, run with step size eta = 1/beta, contracts the error in
the Hessian eigenbasis by exactly the polynomial family of the same name:
xi_k^(i) = P_k(mu_i) * xi_0^(i) with mu_i = 1 - lambda_i/beta. That identity
is the whole point of this module — `consistency_check` measures it to
floating-point precision, and `worst_case_probe` realizes the worst-case
bound on a one-dimensional problem whose curvature sits exactly at the edge
of the design interval.

Updates (g = gradient at the named point, m = gamma' - 1):

    power      w+ = w - eta g(w)
    chebyshev  w+ = w - gamma_k eta g(w) + (gamma_k - 1)(w - w_prev),
               gamma_k following the scalar schedule (first step is plain)
    sor        same shape with the constant gamma (first step is plain)
    nesterov   w+ = u - eta g(u);  u+ = (1 + m) w+ - m w
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .chebnumbers import cheb_number_closed
from .errors import DimensionError, MismatchError, NonFiniteError
from .params import AccelParams, accel_params
from .polynomials import Method, as_method, eval_closed
from .problems import QuadraticProblem

__all__ = [
    "OptimizerState",
    "Trajectory",
    "consistency_check",
    "make_optimizer",
    "run",
    "step",
    "worst_case_probe",
]


@dataclass(frozen=True)
class OptimizerState:
    """One iterate of a scheme; `step` maps k to k+1 without mutation."""

    method: Method
    params: AccelParams
    k: int
    w_curr: np.ndarray
    w_prev: Optional[np.ndarray]  # None only at k = 0
    u: Optional[np.ndarray]  # Nesterov lookahead point, else None
    gamma_next: float  # momentum weight the *next* step will use


def make_optimizer(
    method: Method | str,
    params: AccelParams,
    problem: QuadraticProblem,
    w0: Optional[np.ndarray] = None,
) -> OptimizerState:
    method = as_method(method)
    start = problem.w0 if w0 is None else np.asarray(w0, dtype=np.float64)
    if start.shape != (problem.dimension,):
        raise DimensionError(
            f"w0 has shape {start.shape}, problem dimension is {problem.dimension}"
        )
    return OptimizerState(
        method=method,
        params=params,
        k=0,
        w_curr=start.copy(),
        w_prev=None,
        u=start.copy() if method == Method.NESTEROV else None,
        gamma_next=1.0,  # gamma_1; also correct for the plain first sor step
    )


def step(state: OptimizerState, problem: QuadraticProblem) -> OptimizerState:
    """Advance one iteration. Raises NonFiniteError if the iterate blows up."""
    p = state.params
    eta = p.eta
    method = state.method
    w = state.w_curr

    if state.k > 0 and state.w_prev is None and method != Method.POWER:
        raise MismatchError(f"state at k={state.k} lost its previous iterate")

    u_new: Optional[np.ndarray] = None
    if method == Method.POWER:
        w_new = w - eta * problem.gradient(w)
        gamma_new = 1.0
    elif method == Method.NESTEROV:
        w_new = state.u - eta * problem.gradient(state.u)
        m = p.gamma_nesterov - 1.0
        u_new = (1.0 + m) * w_new - m * w
        gamma_new = p.gamma_nesterov
    else:
        # chebyshev and sor share the two-term shape; they differ only in
        # where gamma comes from. gamma_1 = 1 makes the first step plain
        # gradient descent for both, so w_prev is never touched at k = 0.
        gamma = state.gamma_next if method == Method.CHEBYSHEV else (
            1.0 if state.k == 0 else p.gamma_sor
        )
        w_new = w - gamma * eta * problem.gradient(w)
        if state.k > 0 and gamma != 1.0:
            w_new = w_new + (gamma - 1.0) * (w - state.w_prev)
        if method == Method.CHEBYSHEV:
            rho2 = p.rho * p.rho
            # scalar schedule: gamma_2 is special, then a fixed-point update
            gamma_new = 2.0 / (2.0 - rho2) if state.k == 0 else 1.0 / (
                1.0 - 0.25 * rho2 * gamma
            )
        else:
            gamma_new = p.gamma_sor

    if not np.all(np.isfinite(w_new)):
        raise NonFiniteError(
            f"{method.value} iterate diverged to non-finite values at k={state.k + 1}"
        )
    return replace(
        state,
        k=state.k + 1,
        w_curr=w_new,
        w_prev=w,
        u=u_new,
        gamma_next=gamma_new,
    )


@dataclass(frozen=True)
class Trajectory:
    """Everything recorded along a run: eigen-components and excess risks.

    `components[k, i]` is xi_k^(i) = <w_k - w*, q_i>; `excess_risks[k]` is
    f(w_k) - f(w*). Both have length k+1 (the k = 0 row is the start point).
    """

    method: Method
    params: AccelParams
    dimension: int
    components: np.ndarray  # (k+1, d)
    excess_risks: np.ndarray  # (k+1,)
    w_final: np.ndarray

    @property
    def k_max(self) -> int:
        return self.components.shape[0] - 1


def run(
    method: Method | str,
    params: AccelParams,
    problem: QuadraticProblem,
    k: int,
    w0: Optional[np.ndarray] = None,
) -> Trajectory:
    if k < 0:
        raise DimensionError(f"iteration count must be >= 0, got {k}")
    state = make_optimizer(method, params, problem, w0)
    components = np.empty((k + 1, problem.dimension), dtype=np.float64)
    risks = np.empty(k + 1, dtype=np.float64)
    components[0] = problem.components(state.w_curr)
    risks[0] = problem.excess_risk(state.w_curr)
    for j in range(1, k + 1):
        state = step(state, problem)
        components[j] = problem.components(state.w_curr)
        risks[j] = problem.excess_risk(state.w_curr)
    return Trajectory(
        method=state.method,
        params=params,
        dimension=problem.dimension,
        components=components,
        excess_risks=risks,
        w_final=state.w_curr.copy(),
    )


def consistency_check(traj: Trajectory, problem: QuadraticProblem) -> float:
    """Worst deviation between a recorded run and the spectral prediction.

    Returns max over k and i of |xi_k^(i) - P_k(mu_i) xi_0^(i)| scaled by
    the initial component magnitude (floored to dodge divide-by-zero on
    directions that start exactly at the optimum).
    """
    if traj.dimension != problem.dimension:
        raise MismatchError(
            f"trajectory dimension {traj.dimension} != problem dimension {problem.dimension}"
        )
    mus = problem.mu_values(traj.params.beta)
    ks = np.arange(traj.k_max + 1, dtype=np.int64)
    predicted = eval_closed(traj.method, mus, ks, traj.params)  # (k+1, d)
    xi0 = traj.components[0]
    scale = np.maximum(np.abs(xi0), 1e-300)
    dev = np.abs(traj.components - predicted * xi0[None, :]) / scale[None, :]
    return float(dev.max())


def worst_case_probe(
    method: Method | str, params: AccelParams, k: int
) -> Tuple[float, float]:
    """Run on the 1-D problem whose curvature sits at mu = rho exactly.

    Returns (bound, achieved): the worst-case excess-risk bound
    C_k^2 * (f(w0) - f*) and the excess risk the iterate actually reaches.
    On this problem the polynomial magnitude at rho is attained, so the two
    agree to rounding — the bound is exact, not just valid.
    """
    method = as_method(method)
    if k < 1:
        raise DimensionError(f"probe needs k >= 1, got {k}")
    lam = params.beta * (1.0 - params.rho)  # maps to mu = rho under eta = 1/beta
    eigs = np.array([lam], dtype=np.float64)
    probe = QuadraticProblem(
        dimension=1,
        hessian_eigenvalues=eigs,
        beta=params.beta,
        basis=None,
        w_star=np.zeros(1),
        representation="spectral",
        linear_term=np.zeros(1),
        w0=np.ones(1),
        provenance={"source": "worst-case-probe"},
    )
    traj = run(method, params, probe, k)
    cheb = cheb_number_closed(method, k, params).value
    bound = cheb * cheb * float(traj.excess_risks[0])
    return bound, float(traj.excess_risks[-1])
