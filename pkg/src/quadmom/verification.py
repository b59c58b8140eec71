"""Named verification suites: every guarantee in this package, run as code.

Each suite sweeps one family of claims over acceptance-grade default grids
and folds the outcomes into a single TheoremReport. The eleven canonical
suite names (thm3..thm10, lemma1, oracle, consistency) are what the CLI's
`verify` command dispatches on; `run_all` executes every one of them.

All suites accept ``grid_n`` / ``k_max`` overrides (None keeps the
acceptance-grade default) so callers can trade thoroughness for speed
without changing what is being claimed.

Suite map:
    oracle       closed forms against the three-term recurrences
    thm3         grid maxima of |P_k| on [0, rho] vs the closed worst case
    thm4         worst-case ordering chebyshev < sor < nesterov < power
    thm5         first-order asymptotics: residual is o(eps)
    thm6         decay certificates inside the design interval
    thm7         the divergence window of the nesterov family at mu = rho
    thm8         decay certificates above rho (mis-specified tuning)
    thm9         pointwise chains above rho at fixed tuning
    thm10        effect of the tuning parameter rho (worst-case + pointwise)
    lemma1       |sin k theta| <= k sin theta on [0, pi]
    consistency  optimizer iterates against the spectral prediction
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .chebnumbers import (
    TheoremReport,
    admissible_decay,
    asymptotic_cheb,
    check_ordering,
    compare_nonstrong,
    grid_scan,
    param_effect,
    rate_certificate,
)
from .errors import DomainError
from .params import AccelParams, accel_params
from .polynomials import (
    ACCELERATED,
    METHODS,
    Method,
    eval_closed,
    lemma1_check,
    recurrence_values,
)

__all__ = [
    "SUITE_NAMES",
    "merge_reports",
    "run_all",
    "run_suite",
    "suite_consistency",
    "suite_lemma1",
    "suite_oracle",
    "suite_thm3",
    "suite_thm4",
    "suite_thm5",
    "suite_thm6",
    "suite_thm7",
    "suite_thm8",
    "suite_thm9",
    "suite_thm10",
]

_WITNESS_CAP = 12


def merge_reports(
    theorem_id: str, grids: str, reports: Sequence[TheoremReport]
) -> TheoremReport:
    """Fold sub-checker reports into one: worst violation, capped witnesses."""
    witnesses: List[dict] = []
    violation = 0.0
    passed = True
    for rep in reports:
        violation = max(violation, rep.max_violation)
        if not rep.passed:
            passed = False
            for w in rep.witnesses or [{"check": rep.theorem_id}]:
                if len(witnesses) < _WITNESS_CAP:
                    entry = dict(w) if isinstance(w, dict) else {"witness": w}
                    entry.setdefault("from", rep.theorem_id)
                    witnesses.append(entry)
    return TheoremReport(
        theorem_id=theorem_id,
        grids=grids,
        max_violation=float(violation),
        witnesses=witnesses,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# oracle: closed forms vs recurrences


def suite_oracle(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    rhos: Sequence[float] = (0.5, 0.8, 0.85, 0.95, 0.99),
    tol: float = 1e-8,
) -> TheoremReport:
    """Closed-form evaluator against the literal three-term recurrences.

    The recurrences are the ground truth (they are the optimizers, scalar
    by scalar); the closed forms must match them to |dev| <= tol * max(1, |v|)
    over a full mu grid on [0, 1], every method, every k.
    """
    n = 101 if grid_n is None else int(grid_n)
    km = 100 if k_max is None else int(k_max)
    mus = np.linspace(0.0, 1.0, n)
    ks = np.arange(1, km + 1, dtype=np.int64)
    worst = 0.0
    witnesses: List[dict] = []
    for rho in rhos:
        params = accel_params(rho)
        for method in METHODS:
            closed = eval_closed(method, mus, ks, params)
            rec = recurrence_values(method, mus, km, params)[1:]
            dev = np.abs(closed - rec) / np.maximum(1.0, np.abs(rec))
            local = float(dev.max())
            if local > worst:
                worst = local
            if local > tol and len(witnesses) < _WITNESS_CAP:
                i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
                witnesses.append(
                    {
                        "method": method.value,
                        "rho": rho,
                        "k": int(ks[i]),
                        "mu": float(mus[j]),
                        "closed": float(closed[i, j]),
                        "recurrence": float(rec[i, j]),
                    }
                )
    return TheoremReport(
        theorem_id="oracle",
        grids=(
            f"mu: {n} points on [0,1]; k: 1..{km}; rho in {list(rhos)}; "
            f"4 methods; tol={tol:g}; worst_dev={worst:.3e}"
        ),
        max_violation=max(0.0, worst - tol),
        witnesses=witnesses,
        passed=worst <= tol,
    )


# ---------------------------------------------------------------------------
# thm3: worst case on [0, rho] — value and location


def suite_thm3(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    rhos: Sequence[float] = (0.5, 0.8, 0.85, 0.95),
    rel_tol: float = 1e-12,
) -> TheoremReport:
    """Brute-force grid maxima reproduce the closed worst case, at mu = rho.

    Ties in the scan break toward the largest mu, so equioscillation touch
    points (which attain the max exactly) never displace the canonical
    argmax at the right endpoint.
    """
    n = 100_000 if grid_n is None else int(grid_n)
    km = 50 if k_max is None else int(k_max)
    ks = np.arange(1, km + 1, dtype=np.int64)
    worst = 0.0
    witnesses: List[dict] = []
    for rho in rhos:
        params = accel_params(rho)
        for method in METHODS:
            scans = grid_scan(method, ks, params, n)
            closed = eval_closed(method, params.rho, ks, params)
            for scan, k, cval in zip(scans, ks, np.abs(closed)):
                rel = abs(scan.value - cval) / cval
                bad_argmax = scan.argmax_mu != params.rho
                if rel > worst:
                    worst = rel
                if (rel > rel_tol or bad_argmax) and len(witnesses) < _WITNESS_CAP:
                    witnesses.append(
                        {
                            "method": method.value,
                            "rho": rho,
                            "k": int(k),
                            "grid_max": scan.value,
                            "closed": float(cval),
                            "argmax_mu": scan.argmax_mu,
                        }
                    )
    passed = worst <= rel_tol and not witnesses
    return TheoremReport(
        theorem_id="thm3",
        grids=(
            f"grid: {n} points on [0,rho]; k: 1..{km}; rho in {list(rhos)}; "
            f"4 methods; rel_tol={rel_tol:g}; worst_rel={worst:.3e}"
        ),
        max_violation=max(0.0, worst - rel_tol) if passed else max(worst, 1e-300),
        witnesses=witnesses,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# thm4: worst-case ordering of the four families


def suite_thm4(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    rhos: Sequence[float] = (0.5, 0.8, 0.85, 0.95, 0.99),
) -> TheoremReport:
    """Strict chain 0 < chebyshev < sor < nesterov < power < 1 for k >= 2.

    At k = 1 every accelerated family collapses to the same degree-one
    polynomial, so the chain degenerates to equality at rho (checked to a
    few ulp). grid_n is unused; present for the uniform suite signature.
    """
    del grid_n
    km = 100 if k_max is None else int(k_max)
    reports = [
        check_ordering(k, accel_params(rho))
        for rho in rhos
        for k in range(1, km + 1)
    ]
    return merge_reports(
        "thm4",
        f"k: 1..{km} (k=1 as equality); rho in {list(rhos)}",
        reports,
    )


# ---------------------------------------------------------------------------
# thm5: first-order asymptotics as kappa -> infinity


def suite_thm5(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    eps_list: Sequence[float] = (1e-2, 1e-3, 1e-4),
    noise_floor: float = 1e-13,
) -> TheoremReport:
    """Residual of the first-order expansion is o(eps): the scaled residual
    |closed(rho=1-eps) - asymptotic| / eps must fall as eps does.

    At k = 1 the expansions are exact and the residuals sit at rounding
    level (about one ulp); dividing that noise by a shrinking eps makes the
    ratio *grow*, so the tie test looks at the raw residuals: pairs whose
    absolute residuals are both below the noise floor count as ties, not
    reversals. A spot anchor (chebyshev, k=3, eps=1e-2 -> 0.91) guards the
    formulas themselves against sign or factor slips.
    """
    del grid_n
    km = 10 if k_max is None else int(k_max)
    eps_sorted = sorted(eps_list, reverse=True)
    if len(eps_sorted) < 2:
        raise DomainError("thm5 needs at least two eps values to compare")
    worst = 0.0
    witnesses: List[dict] = []
    for method in METHODS:
        for k in range(1, km + 1):
            residuals = []
            ratios = []
            for eps in eps_sorted:
                params = accel_params(1.0 - eps)
                closed = eval_closed(method, params.rho, k, params)
                residuals.append(abs(abs(closed) - asymptotic_cheb(method, k, eps)))
                ratios.append(residuals[-1] / eps)
            for (hi, lo), (res_hi, res_lo) in zip(
                zip(ratios, ratios[1:]), zip(residuals, residuals[1:])
            ):
                if lo >= hi and not (res_lo <= noise_floor and res_hi <= noise_floor):
                    gap = lo - hi
                    worst = max(worst, max(gap, 1e-300))
                    if len(witnesses) < _WITNESS_CAP:
                        witnesses.append(
                            {"method": method.value, "k": k, "ratios": ratios}
                        )
                    break
    spot = asymptotic_cheb(Method.CHEBYSHEV, 3, 1e-2)
    if abs(spot - 0.91) > 1e-12:
        worst = max(worst, abs(spot - 0.91))
        witnesses.append({"check": "spot", "value": spot, "expected": 0.91})
    return TheoremReport(
        theorem_id="thm5",
        grids=(
            f"eps in {eps_sorted}; k: 1..{km}; 4 methods; "
            f"noise_floor={noise_floor:g}; spot: chebyshev k=3 eps=1e-2"
        ),
        max_violation=float(worst),
        witnesses=witnesses,
        passed=worst == 0.0,
    )


# ---------------------------------------------------------------------------
# thm6/thm7/thm8: exponential-decay certificates


def suite_thm6(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    rhos: Sequence[float] = (0.5, 0.8, 0.95),
    fractions: Sequence[float] = (0.5, 0.9, 0.99),
) -> TheoremReport:
    """e^{k delta} |P_k(mu)| -> 0 inside the design interval.

    Every accelerated family, mu in {0, rho/2, rho}, delta a fraction of
    the admissible rate (the certificate horizon stretches itself when a
    99% margin needs tens of thousands of steps to show three decades).
    """
    del grid_n
    km = 500 if k_max is None else int(k_max)
    reports = []
    descr = []
    for rho in rhos:
        params = accel_params(rho)
        for method in ACCELERATED:
            for mu in (0.0, rho / 2.0, rho):
                bound = admissible_decay(method, mu, params)
                for frac in fractions:
                    reports.append(
                        rate_certificate(method, params, mu, frac * bound, km)
                    )
        descr.append(f"rho={rho:g}: mu in {{0, {rho / 2.0:g}, {rho:g}}}")
    return merge_reports(
        "thm6",
        f"accelerated methods; delta/bound in {list(fractions)}; "
        f"k_max={km} (adaptive); " + "; ".join(descr),
        reports,
    )


def suite_thm7(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    rhos: Sequence[float] = (0.5, 0.8, 0.95),
) -> TheoremReport:
    """The nesterov family's divergence window at mu = rho.

    Its exact rate at the edge of the design interval is strictly worse
    than the common worst-case rate D: for delta in [rate, D) the weighted
    sequence e^{k delta} |P_k(rho)| grows without bound. Each certificate
    here must observe divergence — a decaying sequence is the violation.
    """
    del grid_n
    km = 2000 if k_max is None else int(k_max)
    reports = []
    for rho in rhos:
        params = accel_params(rho)
        lo, hi = params.delta_tilde, params.delta_big
        for delta in (lo, 0.5 * (lo + hi), lo + 0.999 * (hi - lo)):
            reports.append(
                rate_certificate(Method.NESTEROV, params, rho, delta, km)
            )
    return merge_reports(
        "thm7",
        f"nesterov at mu=rho; rho in {list(rhos)}; "
        f"delta in {{rate, midpoint, rate+0.999*(D-rate)}}; k_max={km} (adaptive)",
        reports,
    )


def suite_thm8(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    rhos: Sequence[float] = (0.5, 0.8, 0.95),
    fractions: Sequence[float] = (0.5, 0.99),
) -> TheoremReport:
    """Decay certificates above rho: tuning missed the true conditioning.

    For mu in (rho, 1) the admissible rate shrinks to the gap between the
    design rate and the eigenvalue's hyperbolic angle (or -log mu for plain
    descent) but stays positive — convergence degrades gracefully instead
    of breaking. All four methods, mu in {(rho+1)/2, 0.99}.
    """
    del grid_n
    km = 2000 if k_max is None else int(k_max)
    reports = []
    for rho in rhos:
        params = accel_params(rho)
        for mu in (0.5 * (rho + 1.0), 0.99):
            for method in METHODS:
                bound = admissible_decay(method, mu, params)
                for frac in fractions:
                    reports.append(
                        rate_certificate(method, params, mu, frac * bound, km)
                    )
    return merge_reports(
        "thm8",
        f"all methods; rho in {list(rhos)}; mu in {{(rho+1)/2, 0.99}}; "
        f"delta/bound in {list(fractions)}; k_max={km} (adaptive)",
        reports,
    )


# ---------------------------------------------------------------------------
# thm9/thm10: pointwise chains and the effect of the tuning parameter


def suite_thm9(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    rhos: Sequence[float] = (0.5, 0.85, 0.95),
) -> TheoremReport:
    """Pointwise on (rho, 1): 0 < chebyshev < sor < power < 1, nesterov < power."""
    n = 1000 if grid_n is None else int(grid_n)
    km = 50 if k_max is None else int(k_max)
    reports = []
    for rho in rhos:
        params = accel_params(rho)
        mus = np.linspace(rho, 1.0, n + 2)[1:-1]
        for k in range(2, km + 1):
            reports.append(compare_nonstrong(k, params, mus))
    return merge_reports(
        "thm9",
        f"k: 2..{km}; rho in {list(rhos)}; {n} mu points strictly inside (rho, 1)",
        reports,
    )


def suite_thm10(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    pairs: Sequence = ((0.5, 0.8), (0.85, 0.92)),
) -> TheoremReport:
    """Smaller rho tightens the worst case and the pointwise tail above rho2."""
    n = 512 if grid_n is None else int(grid_n)
    km = 20 if k_max is None else int(k_max)
    reports = []
    for rho1, rho2 in pairs:
        mus = np.linspace(rho2, 1.0, n + 2)[1:-1]
        for k in range(2, km + 1):
            reports.append(param_effect(k, rho1, rho2, mus))
    return merge_reports(
        "thm10",
        f"k: 2..{km}; (rho1, rho2) in {list(pairs)}; {n} mu points above rho2",
        reports,
    )


# ---------------------------------------------------------------------------
# lemma1 and end-to-end consistency


def suite_lemma1(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    tol: float = 1e-12,
) -> TheoremReport:
    """|sin(k theta)| <= k sin(theta) on [0, pi] — the workhorse inequality."""
    n = 10_000 if grid_n is None else int(grid_n)
    km = 50 if k_max is None else int(k_max)
    thetas = np.linspace(0.0, math.pi, n)
    worst = -math.inf
    witnesses: List[dict] = []
    for k in range(1, km + 1):
        excess = lemma1_check(k, thetas)
        worst = max(worst, excess)
        if excess > tol and len(witnesses) < _WITNESS_CAP:
            witnesses.append({"k": k, "excess": excess})
    return TheoremReport(
        theorem_id="lemma1",
        grids=f"theta: {n} points on [0, pi]; k: 1..{km}; tol={tol:g}",
        max_violation=max(0.0, worst),
        witnesses=witnesses,
        passed=worst <= tol,
    )


def suite_consistency(
    grid_n: Optional[int] = None,
    k_max: Optional[int] = None,
    n_problems: int = 20,
    rhos: Sequence[float] = (0.5, 0.8, 0.95),
    tol: float = 1e-8,
) -> TheoremReport:
    """Optimizer iterates match the per-eigenvalue polynomial prediction.

    Seeded random problems (d <= 50), all four methods, every tuning in
    rhos — including spectra whose mu values land above rho, so the
    mis-specified regime is exercised end to end, not just in closed form.
    """
    # local import: this suite is the only one that needs the iterative side
    from .optimizers import consistency_check, run
    from .problems import SpectrumKind, SpectrumSpec, gen_spectrum

    del grid_n
    km = 100 if k_max is None else int(k_max)
    kinds = (
        SpectrumKind.UNIFORM,
        SpectrumKind.GEOMETRIC_DECAY,
        SpectrumKind.CLUSTERED_TOP,
        SpectrumKind.CLUSTERED_BOTTOM,  # mu near 1: the mis-specified regime
    )
    worst = 0.0
    witnesses: List[dict] = []
    for i in range(int(n_problems)):
        spec = SpectrumSpec(
            kind=kinds[i % len(kinds)],
            dimension=5 + (7 * i) % 46,
            seed=1000 + i,
            top=1.0,
        )
        problem = gen_spectrum(spec)
        for rho in rhos:
            params = accel_params(rho)
            for method in METHODS:
                traj = run(method, params, problem, km)
                dev = consistency_check(traj, problem)
                if dev > worst:
                    worst = dev
                if dev > tol and len(witnesses) < _WITNESS_CAP:
                    witnesses.append(
                        {
                            "method": method.value,
                            "rho": rho,
                            "seed": spec.seed,
                            "kind": spec.kind.value,
                            "dimension": spec.dimension,
                            "deviation": dev,
                        }
                    )
    return TheoremReport(
        theorem_id="consistency",
        grids=(
            f"{n_problems} seeded problems (d <= 50, 4 spectrum kinds); "
            f"k: 0..{km}; rho in {list(rhos)}; 4 methods; tol={tol:g}; "
            f"worst_dev={worst:.3e}"
        ),
        max_violation=max(0.0, worst - tol),
        witnesses=witnesses,
        passed=worst <= tol,
    )


# ---------------------------------------------------------------------------
# registry


SUITES: Dict[str, Callable[..., TheoremReport]] = {
    "thm3": suite_thm3,
    "thm4": suite_thm4,
    "thm5": suite_thm5,
    "thm6": suite_thm6,
    "thm7": suite_thm7,
    "thm8": suite_thm8,
    "thm9": suite_thm9,
    "thm10": suite_thm10,
    "lemma1": suite_lemma1,
    "oracle": suite_oracle,
    "consistency": suite_consistency,
}

SUITE_NAMES = tuple(SUITES)


def run_suite(
    name: str, grid_n: Optional[int] = None, k_max: Optional[int] = None
) -> TheoremReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise DomainError(
            f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or 'all'"
        ) from None
    return fn(grid_n=grid_n, k_max=k_max)


def run_all(
    grid_n: Optional[int] = None, k_max: Optional[int] = None
) -> List[TheoremReport]:
    """Every suite, in canonical order. k_max/grid_n scale all of them."""
    return [run_suite(name, grid_n=grid_n, k_max=k_max) for name in SUITE_NAMES]
