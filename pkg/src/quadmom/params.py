"""Scalar parameter algebra for the accelerated methods.

Everything downstream is driven by a handful of scalars derived from the
contraction target ``rho`` in (0, 1) and the curvature scale ``beta`` > 0:

* ``kappa = 1/(1 - rho)`` — the condition number the method is tuned for,
* ``eta = 1/beta`` — the base step size,
* ``delta_big``   = arccosh(1/rho)        (worst-case decay rate of the
  Chebyshev and heavy-ball iterations),
* ``lambda_big``  = arccosh(1/sqrt(rho))  (the square-root analogue used by
  the Nesterov iteration),
* ``delta_tilde`` = log((1 + e^{2*lambda_big})/2), the Nesterov decay rate;
  always strictly between 0 and ``delta_big``,
* ``gamma_sor``      = 2/(1 + sqrt(1 - rho^2))  — heavy-ball extrapolation,
* ``gamma_nesterov`` = 2/(1 + sqrt(1 - rho))    — Nesterov extrapolation.

Iteration matrices have the form ``B = I - eta * H`` for a PSD Hessian ``H``
with eigenvalues in [0, beta]; the spectrum maps to ``mu = 1 - mu_H/beta`` in
[0, 1]. ``classify`` places a single ``mu`` relative to ``rho`` and returns the
angle that parameterizes the closed-form residual polynomials: a trigonometric
angle ``arccos(mu/rho)`` below ``rho``, a hyperbolic one ``arccosh(mu/rho)``
above it, and a degenerate 0 on the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

__all__ = [
    "AccelParams",
    "AngleKind",
    "Regime",
    "SpectralPoint",
    "accel_params",
    "boundary_tolerance",
    "classify",
    "log_form_arccosh",
    "mu_from_hessian",
]


def log_form_arccosh(x: float) -> float:
    """arccosh via ``log(x + sqrt((x-1)(x+1)))``, stable for x near 1.

    Factoring ``x**2 - 1`` as ``(x-1)*(x+1)`` avoids the cancellation the naive
    ``sqrt(x*x - 1)`` suffers just above 1, and ``log1p`` keeps the final digit
    count when the whole argument is close to 1.
    """
    if x < 1.0:
        # Tolerate rounding dust from ratios like mu/rho when mu ~ rho.
        if x > 1.0 - 1e-12:
            return 0.0
        raise DomainError(f"arccosh argument must be >= 1, got {x!r}")
    v = x - 1.0
    return math.log1p(v + math.sqrt(v * (v + 2.0)))


def boundary_tolerance(rho: float) -> float:
    """Width of the window around ``rho`` treated as the boundary branch."""
    return 1e-9 * max(rho, 1e-3)


@dataclass(frozen=True)
class AccelParams:
    """Frozen bundle of the derived scalars for one (rho, beta) pair."""

    rho: float
    beta: float
    kappa: float
    eta: float
    delta_big: float
    lambda_big: float
    delta_tilde: float
    gamma_sor: float
    gamma_nesterov: float

    @classmethod
    def from_kappa(cls, kappa: float, beta: float = 1.0) -> "AccelParams":
        """Construct from a condition number ``kappa`` > 1 instead of rho."""
        if not (kappa > 1.0 and math.isfinite(kappa)):
            raise DomainError(f"kappa must be finite and > 1, got {kappa!r}")
        return accel_params(1.0 - 1.0 / kappa, beta)

    @property
    def tanh_delta(self) -> float:
        return math.tanh(self.delta_big)

    @property
    def tanh_lambda(self) -> float:
        return math.tanh(self.lambda_big)


def accel_params(rho: float, beta: float = 1.0) -> AccelParams:
    """Derive all method constants from ``rho`` in (0, 1) and ``beta`` > 0.

    rho = 0 (kappa = 1) is excluded: every derived angle degenerates and the
    one-step-exact regime needs no acceleration machinery.
    """
    rho = float(rho)
    beta = float(beta)
    if not (0.0 < rho < 1.0) or not math.isfinite(rho):
        raise DomainError(f"rho must lie strictly inside (0, 1), got {rho!r}")
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"beta must be finite and positive, got {beta!r}")

    delta_big = log_form_arccosh(1.0 / rho)
    lambda_big = log_form_arccosh(1.0 / math.sqrt(rho))
    # log((1 + e^{2L})/2) without overflow for extreme rho.
    delta_tilde = float(np.logaddexp(0.0, 2.0 * lambda_big)) - math.log(2.0)
    return AccelParams(
        rho=rho,
        beta=beta,
        kappa=1.0 / (1.0 - rho),
        eta=1.0 / beta,
        delta_big=delta_big,
        lambda_big=lambda_big,
        delta_tilde=delta_tilde,
        gamma_sor=2.0 / (1.0 + math.sqrt(1.0 - rho * rho)),
        gamma_nesterov=2.0 / (1.0 + math.sqrt(1.0 - rho)),
    )


class Regime(Enum):
    STRONGLY_CONVEX = "strongly_convex"  # mu < rho: inside the design interval
    BOUNDARY = "boundary"                # mu = rho (within tolerance)
    NON_STRONGLY_CONVEX = "non_strongly_convex"  # mu > rho: mis-specified tail


class AngleKind(Enum):
    TRIG = "trig"
    DEGENERATE = "degenerate"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class SpectralPoint:
    """One spectrum point ``mu`` with its branch and parameterizing angle."""

    mu: float
    regime: Regime
    angle: float
    angle_kind: AngleKind


def classify(mu: float, params: AccelParams, *, sqrt_ratio: bool = False) -> SpectralPoint:
    """Place ``mu`` relative to ``params.rho`` and compute its branch angle.

    With ``sqrt_ratio=False`` the angle satisfies ``cos(angle) = mu/rho``
    (trig branch) or ``cosh(angle) = mu/rho`` (hyperbolic branch). With
    ``sqrt_ratio=True`` the ratio is replaced by ``sqrt(mu/rho)`` — the
    parameterization the Nesterov polynomial uses.
    """
    mu = float(mu)
    if not (0.0 <= mu <= 1.0) or not math.isfinite(mu):
        raise DomainError(f"mu must lie in [0, 1], got {mu!r}")

    rho = params.rho
    if abs(mu - rho) <= boundary_tolerance(rho):
        return SpectralPoint(mu, Regime.BOUNDARY, 0.0, AngleKind.DEGENERATE)

    ratio = mu / rho
    if sqrt_ratio:
        ratio = math.sqrt(ratio)
    if mu < rho:
        # ratio in [0, 1): angle in (0, pi/2].
        return SpectralPoint(mu, Regime.STRONGLY_CONVEX, math.acos(ratio), AngleKind.TRIG)
    return SpectralPoint(
        mu, Regime.NON_STRONGLY_CONVEX, log_form_arccosh(ratio), AngleKind.HYPERBOLIC
    )


def mu_from_hessian(hessian_eigenvalues, beta: float):
    """Map Hessian eigenvalues ``mu_H`` in [0, beta] to ``mu = 1 - mu_H/beta``.

    Accepts a scalar or an array; returns the same shape. Values outside
    [0, beta] (beyond a relative rounding allowance) raise DomainError.
    """
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"beta must be finite and positive, got {beta!r}")
    eigs = np.asarray(hessian_eigenvalues, dtype=np.float64)
    slack = 1e-12 * beta
    if np.any(eigs < -slack) or np.any(eigs > beta + slack):
        raise DomainError(
            f"Hessian eigenvalues must lie in [0, beta={beta!r}]; "
            f"got range [{eigs.min()!r}, {eigs.max()!r}]"
        )
    mu = 1.0 - np.clip(eigs, 0.0, beta) / beta
    if np.ndim(hessian_eigenvalues) == 0:
        return float(mu)
    return mu
