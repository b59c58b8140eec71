"""Pure-numpy evaluation kernels.

These are the fallback twins of the jit-compiled kernels in
``_kernels_numba``; the backend module picks one pair at import time. Both
implementations follow the same branch structure and operation order so
their outputs agree to rounding error.

Method ids are small ints shared by both backends:

    0 power iteration / plain gradient descent   P_k(mu) = mu^k
    1 Chebyshev semi-iterative                   C_k(mu/rho) / C_k(1/rho)
    2 heavy ball (second-order Richardson)       constant-coefficient recurrence
    3 Nesterov                                   sqrt-parameterized recurrence

Closed forms are evaluated per spectral branch. Writing ``D`` for
arccosh(1/rho), ``L`` for arccosh(1/sqrt(rho)), ``t`` for tanh of the
matching rate, and ``theta``/``T`` for the trig/hyperbolic angle of ``mu``:

    mu < rho : damped oscillation   e^{-kD} (t*cot(theta)*sin(k theta) + cos(k theta))
    mu = rho : critical damping     e^{-kD} (k t + 1)
    mu > rho : damped growth        e^{-kD} (t*coth(T)*sinh(k T) + cosh(k T))

(the Nesterov variant carries an extra mu^{k/2} and uses L and the
sqrt-ratio angles). Hyperbolic branches are rearranged around
e^{k(T - D)} <= 1 so nothing overflows at large k.
"""

from __future__ import annotations

import math

import numpy as np

POWER = 0
CHEBYSHEV = 1
SOR = 2
NESTEROV = 3

__all__ = [
    "POWER",
    "CHEBYSHEV",
    "SOR",
    "NESTEROV",
    "closed_table",
    "recurrence_table",
]


def _arccosh_stable(x):
    """arccosh for x >= 1, elementwise, accurate near 1."""
    v = np.asarray(x, dtype=np.float64) - 1.0
    return np.log1p(v + np.sqrt(v * (v + 2.0)))


def closed_table(mus, ks, rho, method):
    """Closed-form residual values P_k(mu) for every (k, mu) pair.

    Parameters
    ----------
    mus : (n,) float64 array of spectrum points in [0, 1]
    ks : (m,) int64 array of iteration counts (k >= 0)
    rho : design contraction factor in (0, 1)
    method : one of POWER, CHEBYSHEV, SOR, NESTEROV

    Returns
    -------
    (m, n) float64 array; row i holds P_{ks[i]} evaluated on ``mus``.
    """
    mus = np.ascontiguousarray(mus, dtype=np.float64)
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    out = np.empty((ks.size, mus.size), dtype=np.float64)

    if method == POWER:
        for i in range(ks.size):
            out[i, :] = np.power(mus, float(ks[i]))
        return out

    delta = math.log1p((1.0 / rho - 1.0) + math.sqrt((1.0 / rho - 1.0) * (1.0 / rho + 1.0)))
    lam = 0.0
    if method == NESTEROV:
        srho = math.sqrt(rho)
        lam = math.log1p((1.0 / srho - 1.0) + math.sqrt((1.0 / srho - 1.0) * (1.0 / srho + 1.0)))
        rate = lam
    else:
        rate = delta
    t = math.tanh(rate)
    btol = 1e-9 * max(rho, 1e-3)

    bnd = np.abs(mus - rho) <= btol
    sc = (mus < rho) & ~bnd
    nsc = ~sc & ~bnd

    ratio_sc = mus[sc] / rho
    ratio_nsc = mus[nsc] / rho
    if method == NESTEROV:
        ratio_sc = np.sqrt(ratio_sc)
        ratio_nsc = np.sqrt(ratio_nsc)
    theta = np.arccos(ratio_sc)
    big = _arccosh_stable(ratio_nsc)
    cot_theta = np.where(theta > 0.0, ratio_sc / np.sin(theta), 0.0)
    coth_big = np.where(big > 0.0, 1.0 / np.tanh(big), 0.0)

    mu_bnd = mus[bnd]
    mu_sc = mus[sc]
    mu_nsc = mus[nsc]

    for i in range(ks.size):
        k = float(ks[i])
        row = out[i, :]
        if method == CHEBYSHEV:
            ekd = math.exp(-k * delta)
            denom = 1.0 + ekd * ekd
            row[sc] = np.cos(k * theta) * (2.0 * ekd / denom)
            row[bnd] = 2.0 * ekd / denom
            e2kT = np.exp(-2.0 * k * big)
            row[nsc] = np.exp(k * (big - delta)) * (1.0 + e2kT) / denom
        elif method == SOR:
            ekd = math.exp(-k * delta)
            row[sc] = ekd * (t * cot_theta * np.sin(k * theta) + np.cos(k * theta))
            row[bnd] = ekd * (k * t + 1.0)
            e2kT = np.exp(-2.0 * k * big)
            row[nsc] = (
                np.exp(k * (big - delta))
                * 0.5
                * (t * coth_big * (1.0 - e2kT) + 1.0 + e2kT)
            )
        else:  # NESTEROV
            ekl = math.exp(-k * lam)
            half_k = 0.5 * k
            row[sc] = np.power(mu_sc, half_k) * ekl * (
                t * cot_theta * np.sin(k * theta) + np.cos(k * theta)
            )
            row[bnd] = np.power(mu_bnd, half_k) * ekl * (k * t + 1.0)
            e2kT = np.exp(-2.0 * k * big)
            # mu^{k/2} e^{-kL} cosh-family term, combined in the exponent so
            # neither factor overflows/underflows on its own.
            row[nsc] = (
                np.exp(half_k * np.log(mu_nsc) + k * (big - lam))
                * 0.5
                * (t * coth_big * (1.0 - e2kT) + 1.0 + e2kT)
            )
    return out


def recurrence_table(mus, coef, kmax, method):
    """Three-term recurrence table: row k holds P_k on ``mus``.

    ``coef[k]`` is the extrapolation coefficient applied when producing
    row ``k + 1`` (only indices 1..kmax-1 are read):

        P_{k+1} = coef[k] * mu * P_k + (1 - coef[k]) * P_{k-1}

    with the Nesterov variant multiplying the trailing term by ``mu`` as
    well. Rows 0 and 1 are pinned to 1 and mu for every method. Power
    iteration is the special case coef == 1.
    """
    mus = np.ascontiguousarray(mus, dtype=np.float64)
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    out = np.empty((kmax + 1, mus.size), dtype=np.float64)
    out[0, :] = 1.0
    if kmax >= 1:
        out[1, :] = mus
    for k in range(1, kmax):
        g = coef[k]
        if method == NESTEROV:
            out[k + 1, :] = g * mus * out[k, :] + (1.0 - g) * mus * out[k - 1, :]
        else:
            out[k + 1, :] = g * mus * out[k, :] + (1.0 - g) * out[k - 1, :]
    return out
