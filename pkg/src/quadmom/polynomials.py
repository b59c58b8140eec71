"""Residual polynomials of the four methods, in closed form and by recurrence.

For a quadratic objective with iteration matrix ``B = I - H/beta``, each
method's error after k steps is ``xi_k = P_k(B) xi_0`` for a degree-k
polynomial with ``P_k(1) = 1``. The four families:

=========  =======================================================
power      ``mu^k`` (plain gradient descent)
chebyshev  ``C_k(mu/rho) / C_k(1/rho)`` (semi-iterative schedule)
sor        heavy ball / second-order Richardson, constant gamma
nesterov   constant-momentum accelerated gradient
=========  =======================================================

Each family is available two independent ways: the per-branch closed forms
(``eval_closed``, dispatched through the kernel backend) and the scalar
three-term recurrences (``eval_recurrence``). The recurrences are the
ground-truth oracle — they are literally the eigencomponent dynamics of the
weight-space updates — so closed-vs-recurrence agreement is the core
correctness check of the whole package.

Also here: the classical Chebyshev polynomial ``C_k`` (both the three-branch
cos/cosh definition and its recurrence), the extrapolation-coefficient
schedule ``gamma_schedule``, the auxiliary polynomials ``aux_Q`` used by the
closed-form derivations, a log-domain evaluator for decay certificates, the
sine bound ``lemma1_check``, and the alternative shifted Chebyshev residual
(normalized on [0, rho] rather than scaled through the origin; the two are
genuinely different polynomials and the shifted one is the true minimax
equioscillator on [0, rho]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import backend
from .errors import DomainError
from .params import AccelParams, AngleKind, Regime, accel_params, classify

__all__ = [
    "METHODS",
    "Method",
    "MethodPolynomial",
    "aux_Q",
    "chebyshev_C",
    "eval_closed",
    "eval_closed_log",
    "eval_recurrence",
    "gamma_schedule",
    "lemma1_check",
    "recurrence_coefficients",
    "recurrence_values",
    "residual_from_aux",
    "shifted_chebyshev_residual",
]


class Method(str, Enum):
    """The four residual-polynomial families."""

    POWER = "power"
    CHEBYSHEV = "chebyshev"
    SOR = "sor"
    NESTEROV = "nesterov"

    @property
    def kernel_id(self) -> int:
        return _KERNEL_IDS[self]


_KERNEL_IDS = {
    Method.POWER: backend.POWER,
    Method.CHEBYSHEV: backend.CHEBYSHEV,
    Method.SOR: backend.SOR,
    Method.NESTEROV: backend.NESTEROV,
}

METHODS = (Method.POWER, Method.CHEBYSHEV, Method.SOR, Method.NESTEROV)

ACCELERATED = (Method.CHEBYSHEV, Method.SOR, Method.NESTEROV)


def as_method(value) -> Method:
    """Coerce a Method or its string name, raising DomainError otherwise."""
    if isinstance(value, Method):
        return value
    try:
        return Method(str(value).lower())
    except ValueError:
        names = ", ".join(m.value for m in METHODS)
        raise DomainError(f"unknown method {value!r}; expected one of: {names}") from None


def _check_mu(mu) -> np.ndarray:
    arr = np.asarray(mu, dtype=np.float64)
    if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0):
        raise DomainError(f"mu must lie in [0, 1], got {mu!r}")
    return arr


def _check_k(k) -> np.ndarray:
    arr = np.asarray(k)
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.asarray(np.rint(arr), dtype=np.int64)
        if arr.size and not np.all(arr == rounded):
            raise DomainError(f"k must be integral, got {k!r}")
        arr = rounded
    arr = arr.astype(np.int64, copy=False)
    if arr.size and arr.min() < 0:
        raise DomainError(f"k must be >= 0, got {k!r}")
    return arr


# ---------------------------------------------------------------------------
# classical Chebyshev polynomial


def chebyshev_C(k: int, x, mode: str = "closed"):
    """Chebyshev polynomial of the first kind, C_k(x), for any real x.

    Parameters
    ----------
    k : int
        Degree, >= 0.
    x : float or array
        Evaluation point(s); the whole real line is accepted.
    mode : {"closed", "recurrence"}
        "closed" uses the three-branch definition (cos(k arccos x) on
        [-1, 1], cosh(k arccosh x) above, with the parity reflection below
        -1); "recurrence" iterates C_{k+1} = 2x C_k - C_{k-1}.

    Notes
    -----
    Both modes are exact up to rounding; outside [-1, 1] the values grow like
    e^{k arccosh|x|}, so at large k*x the result overflows to inf in either
    mode (this evaluator is the oracle for moderate degrees, not a
    log-domain path).
    """
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k!r}")
    scalar = np.ndim(x) == 0
    xs = np.asarray(x, dtype=np.float64)
    if mode == "closed":
        out = np.empty_like(xs)
        inside = np.abs(xs) <= 1.0
        above = xs > 1.0
        below = xs < -1.0
        out[inside] = np.cos(k * np.arccos(xs[inside]))
        out[above] = np.cosh(k * np.arccosh(xs[above]))
        out[below] = (-1.0) ** k * np.cosh(k * np.arccosh(-xs[below]))
    elif mode == "recurrence":
        prev = np.ones_like(xs)
        if k == 0:
            out = prev
        else:
            curr = xs.copy()
            for _ in range(k - 1):
                prev, curr = curr, 2.0 * xs * curr - prev
            out = curr
    else:
        raise DomainError(f"mode must be 'closed' or 'recurrence', got {mode!r}")
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# extrapolation coefficients


def gamma_schedule(rho: float, k: int) -> np.ndarray:
    """First k extrapolation coefficients of the Chebyshev schedule.

    Returns an array ``g`` of length k with ``g[j]`` holding the (j+1)-th
    coefficient: g[0] = 1, g[1] = 2/(2 - rho^2), and thereafter
    ``g[j+1] = 1/(1 - rho^2 g[j]/4)``. The sequence converges to the
    constant heavy-ball coefficient 2/(1 + sqrt(1 - rho^2)) from above
    once past the second entry.
    """
    if k < 1:
        raise DomainError(f"need at least one coefficient, got k={k!r}")
    if not (0.0 < rho < 1.0):
        raise DomainError(f"rho must lie strictly inside (0, 1), got {rho!r}")
    g = np.empty(k, dtype=np.float64)
    g[0] = 1.0
    if k >= 2:
        g[1] = 2.0 / (2.0 - rho * rho)
    for j in range(2, k):
        g[j] = 1.0 / (1.0 - rho * rho * g[j - 1] / 4.0)
    return g


def recurrence_coefficients(method: Method, params: AccelParams, kmax: int) -> np.ndarray:
    """Coefficient array feeding the recurrence kernels.

    Entry ``coef[j]`` is applied when producing P_{j+1}; power descent is
    the constant-1 schedule, the heavy-ball and Nesterov methods use their
    fixed-point coefficients, and Chebyshev uses the full schedule.
    """
    method = as_method(method)
    n = max(kmax, 1)
    if method == Method.CHEBYSHEV:
        # entry j is the coefficient of the step producing P_{j+1}
        return gamma_schedule(params.rho, n)
    if method == Method.SOR:
        return np.full(n, params.gamma_sor)
    if method == Method.NESTEROV:
        return np.full(n, params.gamma_nesterov)
    return np.ones(n)


# ---------------------------------------------------------------------------
# closed-form / recurrence evaluation


def eval_closed(method: Method, mu, k, params: AccelParams, use_numba=None):
    """Closed-form P_k(mu), branch chosen by where mu sits relative to rho.

    ``mu`` and ``k`` may each be a scalar or a 1-D array; array-array gives
    the full (len(k), len(mu)) table. Values are exact per Horner-free
    per-branch formulas (trig below rho, critically damped at rho,
    hyperbolic above), all rearranged so nothing overflows at large k.
    """
    method = as_method(method)
    mus = _check_mu(mu)
    ks = _check_k(k)
    table = backend.closed_table(
        np.atleast_1d(mus), np.atleast_1d(ks), params.rho, method.kernel_id, use_numba
    )
    if mus.ndim == 0 and ks.ndim == 0:
        return float(table[0, 0])
    if ks.ndim == 0:
        return table[0, :]
    if mus.ndim == 0:
        return table[:, 0]
    return table


def recurrence_values(method: Method, mus, kmax: int, params: AccelParams, use_numba=None):
    """Full recurrence table: row j holds P_j over ``mus``, j = 0..kmax."""
    method = as_method(method)
    if kmax < 0:
        raise DomainError(f"kmax must be >= 0, got {kmax!r}")
    mus = np.atleast_1d(_check_mu(mus))
    coef = recurrence_coefficients(method, params, kmax)
    return backend.recurrence_table(mus, coef, kmax, method.kernel_id, use_numba)


def eval_recurrence(method: Method, mu, k: int, params: AccelParams):
    """P_k(mu) by running the scalar three-term recurrence up to k.

    This is the independent oracle for ``eval_closed``: the coefficients are
    exactly those of the weight-space update rules, so the recurrence *is*
    the per-eigenvalue error dynamics.
    """
    ks = _check_k(k)
    if ks.ndim != 0:
        raise DomainError("k must be a single integer for eval_recurrence")
    mus = _check_mu(mu)
    table = recurrence_values(method, np.atleast_1d(mus), int(ks), params)
    row = table[int(ks), :]
    return float(row[0]) if mus.ndim == 0 else row


@dataclass(frozen=True)
class MethodPolynomial:
    """A residual polynomial: method tag, degree k, and its parameters."""

    method: Method
    k: int
    params: AccelParams

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"degree must be >= 0, got {self.k!r}")

    def eval_closed(self, mu, use_numba=None):
        return eval_closed(self.method, mu, self.k, self.params, use_numba)

    def eval_recurrence(self, mu):
        return eval_recurrence(self.method, mu, self.k, self.params)


# ---------------------------------------------------------------------------
# log-domain evaluation (decay/divergence certificates)


def _logcosh(x: np.ndarray) -> np.ndarray:
    """log(cosh(x)) for x >= 0 without overflow."""
    return x + np.log1p(np.exp(-2.0 * x)) - math.log(2.0)


def eval_closed_log(method: Method, mu: float, ks, params: AccelParams):
    """Signs and log-magnitudes of P_k(mu) for one mu over an array of k.

    Returns ``(sign, logabs)`` with ``sign`` in {-1, 0, +1} and
    ``logabs = log|P_k(mu)|`` (``-inf`` at exact zeros). Everything stays in
    the log domain, so k in the hundreds of thousands is fine — this is what
    the exponential decay/divergence certificates evaluate
    ``s_k = e^{k delta} |P_k(mu)|`` through.
    """
    method = as_method(method)
    mus = _check_mu(mu)
    if mus.ndim != 0:
        raise DomainError("mu must be a scalar for eval_closed_log")
    mu = float(mus)
    ks = np.atleast_1d(_check_k(ks)).astype(np.float64)

    if method == Method.POWER:
        if mu == 0.0:
            logabs = np.where(ks == 0.0, 0.0, -np.inf)
            sign = np.where(ks == 0.0, 1, 0)
            return sign.astype(np.int8), logabs
        return np.ones(ks.shape, np.int8), ks * math.log(mu)

    point = classify(mu, params, sqrt_ratio=(method == Method.NESTEROV))
    delta = params.delta_big
    lam = params.lambda_big
    if method == Method.NESTEROV:
        rate, t = lam, params.tanh_lambda
    else:
        rate, t = delta, params.tanh_delta

    if point.regime == Regime.BOUNDARY:
        if method == Method.CHEBYSHEV:
            logabs = -_logcosh(ks * delta)
        else:
            logabs = -ks * rate + np.log(ks * t + 1.0)
            if method == Method.NESTEROV:
                logabs = logabs + 0.5 * ks * math.log(mu)
        return np.ones(ks.shape, np.int8), logabs

    if point.regime == Regime.STRONGLY_CONVEX:
        theta = point.angle
        if method == Method.CHEBYSHEV:
            osc = np.cos(ks * theta)
            with np.errstate(divide="ignore"):
                logabs = np.log(np.abs(osc)) - _logcosh(ks * delta)
        else:
            cot = math.cos(theta) / math.sin(theta)
            osc = t * cot * np.sin(ks * theta) + np.cos(ks * theta)
            with np.errstate(divide="ignore"):
                logabs = -ks * rate + np.log(np.abs(osc))
            if method == Method.NESTEROV:
                if mu == 0.0:
                    # mu^{k/2} kills every k >= 1 term exactly.
                    logabs = np.where(ks == 0.0, 0.0, -np.inf)
                    osc = np.where(ks == 0.0, 1.0, 0.0)
                else:
                    logabs = logabs + 0.5 * ks * math.log(mu)
        sign = np.sign(osc).astype(np.int8)
        sign[logabs == -np.inf] = 0
        return sign, logabs

    big = point.angle
    e2 = np.exp(-2.0 * ks * big)
    if method == Method.CHEBYSHEV:
        logabs = (
            ks * (big - delta) + np.log1p(np.exp(-2.0 * ks * big)) - np.log1p(np.exp(-2.0 * ks * delta))
        )
    else:
        coth = 1.0 / math.tanh(big)
        logabs = ks * (big - rate) + np.log(0.5 * (t * coth * (1.0 - e2) + 1.0 + e2))
        if method == Method.NESTEROV:
            logabs = logabs + 0.5 * ks * math.log(mu)
    return np.ones(ks.shape, np.int8), logabs


# ---------------------------------------------------------------------------
# auxiliary polynomials and the residual reconstruction identity


def aux_Q(k: int, rho: float, x, variant: Method, mode: str = "closed"):
    """Auxiliary polynomial Q_k underlying the heavy-ball/Nesterov closed forms.

    The heavy-ball variant is ``(gamma-1)^{k/2}`` times the Dirichlet-style
    ratio sin((k+1)theta)/sin(theta) (with the critically damped value k+1 on
    the boundary and the sinh analogue above rho); the Nesterov variant
    carries an extra ``x^{k/2}`` and sqrt-ratio angles. ``mode="recurrence"``
    instead iterates the defining relation

        Q_{k+1} = gamma x Q_k + (1 - gamma) Q_{k-1}        (heavy ball)
        Q_{k+1} = gamma' x Q_k + (1 - gamma') x Q_{k-1}    (Nesterov)

    from Q_0 = 1, Q_1 = gamma x.
    """
    variant = as_method(variant)
    if variant not in (Method.SOR, Method.NESTEROV):
        raise DomainError(f"aux_Q is defined for sor/nesterov variants, got {variant.value!r}")
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k!r}")
    params = accel_params(rho)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(_check_mu(x))
    nesterov = variant == Method.NESTEROV
    gamma = params.gamma_nesterov if nesterov else params.gamma_sor

    if mode == "recurrence":
        prev = np.ones_like(xs)
        if k == 0:
            out = prev
        else:
            curr = gamma * xs
            for _ in range(k - 1):
                if nesterov:
                    prev, curr = curr, gamma * xs * curr + (1.0 - gamma) * xs * prev
                else:
                    prev, curr = curr, gamma * xs * curr + (1.0 - gamma) * prev
            out = curr
    elif mode == "closed":
        rate = params.lambda_big if nesterov else params.delta_big
        decay = math.exp(-k * rate)
        out = np.empty_like(xs)
        for i, xi in enumerate(xs):
            point = classify(float(xi), params, sqrt_ratio=nesterov)
            if point.regime == Regime.BOUNDARY:
                out[i] = decay * float(k + 1)
            elif point.angle_kind == AngleKind.TRIG:
                out[i] = decay * math.sin((k + 1) * point.angle) / math.sin(point.angle)
            else:
                a = point.angle
                # e^{-k rate} sinh((k+1)a)/sinh(a), exponentials merged so
                # neither factor overflows on its own
                out[i] = (
                    math.exp(k * (a - rate))
                    * (1.0 - math.exp(-2.0 * (k + 1) * a))
                    / (1.0 - math.exp(-2.0 * a))
                )
            if nesterov:
                out[i] *= xi ** (0.5 * k)
    else:
        raise DomainError(f"mode must be 'closed' or 'recurrence', got {mode!r}")
    return float(out[0]) if scalar else out


def residual_from_aux(variant: Method, k: int, rho: float, x):
    """Reassemble the residual polynomial from the auxiliary family.

    For k >= 1 the heavy-ball residual satisfies
    ``R_k(x) = x Q_{k-1}(x) + (1 - gamma) Q_{k-2}(x)`` and the Nesterov one
    ``N_k(x) = x Q_{k-1}(x) + (1 - gamma') x Q_{k-2}(x)`` (with Q_{-1} = 0),
    which is how the closed forms are derived in the first place.
    """
    variant = as_method(variant)
    if k < 1:
        raise DomainError(f"reconstruction needs k >= 1, got {k!r}")
    params = accel_params(rho)
    nesterov = variant == Method.NESTEROV
    gamma = params.gamma_nesterov if nesterov else params.gamma_sor
    xs = np.atleast_1d(_check_mu(x)).astype(np.float64)
    q1 = aux_Q(k - 1, rho, xs, variant)
    q2 = aux_Q(k - 2, rho, xs, variant) if k >= 2 else np.zeros_like(xs)
    if nesterov:
        out = xs * q1 + (1.0 - gamma) * xs * q2
    else:
        out = xs * q1 + (1.0 - gamma) * q2
    return float(out[0]) if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# misc


def lemma1_check(k: int, theta_grid) -> float:
    """Max over the grid of |sin(k theta)| - k sin(theta) (should be <= 0).

    The bound holds on [0, pi/2] for every integer k >= 1 and is the one
    inequality the strongly-convex-branch envelope proofs lean on.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k!r}")
    thetas = np.asarray(theta_grid, dtype=np.float64)
    return float(np.max(np.abs(np.sin(k * thetas)) - k * np.sin(thetas)))


def shifted_chebyshev_residual(mu, k: int, rho: float):
    """Residual normalized via the affine map of [0, rho] onto [-1, 1].

    ``C_k((2 mu - rho)/rho) / C_k((2 - rho)/rho)`` — the true minimax
    polynomial on [0, rho] among those with P(1) = 1. Distinct from the
    shipped semi-iterative family (which is C_k scaled through the origin);
    exposed because its k zeros in (0, rho) make it the natural
    equioscillation reference.
    """
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k!r}")
    if not (0.0 < rho < 1.0):
        raise DomainError(f"rho must lie strictly inside (0, 1), got {rho!r}")
    mus = np.atleast_1d(_check_mu(mu)).astype(np.float64)
    num = chebyshev_C(k, (2.0 * mus - rho) / rho, mode="recurrence")
    den = chebyshev_C(k, (2.0 - rho) / rho, mode="recurrence")
    out = num / den
    return float(out[0]) if np.ndim(mu) == 0 else out
