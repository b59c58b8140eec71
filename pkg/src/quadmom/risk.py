"""Excess-risk accounting, exact per eigen-direction.

For a quadratic, f(w) - f* = 1/2 xi^T H xi splits over the Hessian
eigenbasis, and after k iterations each direction's share is known in closed
form: 1/2 * lambda_i * P_k(mu_i)^2 * xi_0_i^2. `reconstruct` computes that
breakdown (contributions carry the exact 1/2*lambda_i factor, so they sum to
the excess risk itself, not a scaled proxy), and the totals here use
compensated summation so a breakdown serialized twice is identical down to
the last bit regardless of how the caller chunks the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateError, DimensionError
from .params import AccelParams
from .polynomials import Method, as_method, eval_closed
from .problems import QuadraticProblem

__all__ = [
    "RiskBreakdown",
    "excess_risk_direct",
    "expected_excess_risk_rate",
    "reconstruct",
]


def excess_risk_direct(problem: QuadraticProblem, w: np.ndarray) -> float:
    """f(w) - f(w*) = 1/2 (w - w*)^T H (w - w*), summed compensated."""
    xi = problem.components(w)  # raises DimensionError on shape mismatch
    return 0.5 * math.fsum(problem.hessian_eigenvalues * xi * xi)


@dataclass(frozen=True)
class RiskBreakdown:
    """Per-direction excess risk after k steps of one method."""

    method: Method
    k: int
    mus: np.ndarray  # spectrum of B = I - H/beta, one per direction
    hessian_eigenvalues: np.ndarray
    contributions: np.ndarray  # 1/2 * lambda_i * P_k(mu_i)^2 * xi0_i^2
    total: float


def reconstruct(
    problem: QuadraticProblem,
    method: Method | str,
    params: AccelParams,
    k: int,
    w0: Optional[np.ndarray] = None,
) -> RiskBreakdown:
    """Predict the excess risk at step k spectrally, without iterating.

    Equals `excess_risk_direct` of the k-th iterate of the matching
    optimizer to rounding error; the consistency suite pins that down.
    """
    method = as_method(method)
    if k < 0:
        raise DimensionError(f"step index must be >= 0, got {k}")
    start = problem.w0 if w0 is None else np.asarray(w0, dtype=np.float64)
    xi0 = problem.components(start)
    mus = problem.mu_values(params.beta)
    pk = eval_closed(method, mus, int(k), params)
    contributions = 0.5 * problem.hessian_eigenvalues * (pk * xi0) ** 2
    return RiskBreakdown(
        method=method,
        k=int(k),
        mus=mus,
        hessian_eigenvalues=problem.hessian_eigenvalues.copy(),
        contributions=contributions,
        total=math.fsum(contributions),
    )


def expected_excess_risk_rate(
    mus: np.ndarray, method: Method | str, params: AccelParams, k: int
) -> float:
    """Spectrum-averaged contraction of the excess risk at step k.

    sum_i (1 - mu_i) P_k(mu_i)^2 / sum_i (1 - mu_i): the excess-risk ratio
    E[f(w_k) - f*] / E[f(w_0) - f*] under isotropic random xi_0. Directions
    with mu_i = 1 carry zero curvature and drop out of both sums; if the
    whole spectrum is flat at 1 the ratio is 0/0 and that's an error.
    """
    method = as_method(method)
    mus = np.atleast_1d(np.asarray(mus, dtype=np.float64))
    if k < 0:
        raise DimensionError(f"step index must be >= 0, got {k}")
    weights = 1.0 - mus
    denom = math.fsum(weights)
    if denom <= 0.0:
        raise DegenerateError(
            "every direction has mu = 1 (zero curvature); the rate is undefined"
        )
    pk = eval_closed(method, mus, int(k), params)
    return math.fsum(weights * pk * pk) / denom
