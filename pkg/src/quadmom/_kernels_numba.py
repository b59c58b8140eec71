"""Jit-compiled evaluation kernels (numba twins of ``_kernels_numpy``).

Importing this module requires numba; ``backend`` falls back to the numpy
twins when the import fails or when ``QUADMOM_DISABLE_NUMBA=1`` is set.
The per-branch formulas, branch tolerances, and operation order mirror
``_kernels_numpy`` exactly — see that module for the math.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._kernels_numpy import CHEBYSHEV, NESTEROV, POWER, SOR

__all__ = ["closed_table", "recurrence_table"]

_SC = 0
_BND = 1
_NSC = 2


@njit(cache=True)
def _arccosh1(x):
    v = x - 1.0
    if v < 0.0:
        v = 0.0
    return math.log1p(v + math.sqrt(v * (v + 2.0)))


@njit(cache=True)
def closed_table(mus, ks, rho, method):
    n = mus.size
    m = ks.size
    out = np.empty((m, n), dtype=np.float64)

    if method == POWER:
        for i in range(m):
            kf = float(ks[i])
            for j in range(n):
                out[i, j] = mus[j] ** kf
        return out

    delta = _arccosh1(1.0 / rho)
    lam = 0.0
    if method == NESTEROV:
        lam = _arccosh1(1.0 / math.sqrt(rho))
        rate = lam
    else:
        rate = delta
    t = math.tanh(rate)
    btol = 1e-9 * max(rho, 1e-3)

    branch = np.empty(n, dtype=np.int8)
    angle = np.empty(n, dtype=np.float64)   # theta below rho, T above
    cotc = np.empty(n, dtype=np.float64)    # cot(theta) / coth(T)
    for j in range(n):
        mu = mus[j]
        if abs(mu - rho) <= btol:
            branch[j] = _BND
            angle[j] = 0.0
            cotc[j] = 0.0
        else:
            ratio = mu / rho
            if method == NESTEROV:
                ratio = math.sqrt(ratio)
            if mu < rho:
                branch[j] = _SC
                th = math.acos(ratio)
                angle[j] = th
                cotc[j] = ratio / math.sin(th) if th > 0.0 else 0.0
            else:
                branch[j] = _NSC
                big = _arccosh1(ratio)
                angle[j] = big
                cotc[j] = 1.0 / math.tanh(big) if big > 0.0 else 0.0

    for i in range(m):
        k = float(ks[i])
        if method == CHEBYSHEV:
            ekd = math.exp(-k * delta)
            denom = 1.0 + ekd * ekd
            for j in range(n):
                if branch[j] == _SC:
                    out[i, j] = math.cos(k * angle[j]) * (2.0 * ekd / denom)
                elif branch[j] == _BND:
                    out[i, j] = 2.0 * ekd / denom
                else:
                    e2kT = math.exp(-2.0 * k * angle[j])
                    out[i, j] = math.exp(k * (angle[j] - delta)) * (1.0 + e2kT) / denom
        elif method == SOR:
            ekd = math.exp(-k * delta)
            for j in range(n):
                if branch[j] == _SC:
                    out[i, j] = ekd * (
                        t * cotc[j] * math.sin(k * angle[j]) + math.cos(k * angle[j])
                    )
                elif branch[j] == _BND:
                    out[i, j] = ekd * (k * t + 1.0)
                else:
                    e2kT = math.exp(-2.0 * k * angle[j])
                    out[i, j] = (
                        math.exp(k * (angle[j] - delta))
                        * 0.5
                        * (t * cotc[j] * (1.0 - e2kT) + 1.0 + e2kT)
                    )
        else:  # NESTEROV
            ekl = math.exp(-k * lam)
            half_k = 0.5 * k
            for j in range(n):
                mu = mus[j]
                if branch[j] == _SC:
                    out[i, j] = mu ** half_k * ekl * (
                        t * cotc[j] * math.sin(k * angle[j]) + math.cos(k * angle[j])
                    )
                elif branch[j] == _BND:
                    out[i, j] = mu ** half_k * ekl * (k * t + 1.0)
                else:
                    e2kT = math.exp(-2.0 * k * angle[j])
                    out[i, j] = (
                        math.exp(half_k * math.log(mu) + k * (angle[j] - lam))
                        * 0.5
                        * (t * cotc[j] * (1.0 - e2kT) + 1.0 + e2kT)
                    )
    return out


@njit(cache=True)
def recurrence_table(mus, coef, kmax, method):
    n = mus.size
    out = np.empty((kmax + 1, n), dtype=np.float64)
    for j in range(n):
        out[0, j] = 1.0
    if kmax >= 1:
        for j in range(n):
            out[1, j] = mus[j]
    for k in range(1, kmax):
        g = coef[k]
        if method == NESTEROV:
            for j in range(n):
                out[k + 1, j] = g * mus[j] * out[k, j] + (1.0 - g) * mus[j] * out[k - 1, j]
        else:
            for j in range(n):
                out[k + 1, j] = g * mus[j] * out[k, j] + (1.0 - g) * out[k - 1, j]
    return out
