"""The iterative side: exact updates, trajectories, spectral consistency."""

import numpy as np
import pytest

from quadmom.errors import DimensionError, MismatchError, NonFiniteError
from quadmom.optimizers import (
    consistency_check,
    make_optimizer,
    run,
    step,
    worst_case_probe,
)
from quadmom.params import accel_params
from quadmom.polynomials import METHODS, Method
from quadmom.problems import QuadraticProblem, SpectrumKind, SpectrumSpec, gen_spectrum


def diag_problem(mus, beta=1.0, w0=None):
    """Spectral problem with the given mu values (w* = 0)."""
    mus = np.asarray(mus, dtype=np.float64)
    d = mus.size
    eigs = beta * (1.0 - mus)
    return QuadraticProblem(
        dimension=d,
        hessian_eigenvalues=eigs,
        beta=beta,
        basis=None,
        w_star=np.zeros(d),
        representation="spectral",
        linear_term=np.zeros(d),
        w0=np.ones(d) if w0 is None else np.asarray(w0, dtype=np.float64),
        provenance={},
    )


def test_make_optimizer_state(p08):
    prob = diag_problem([0.3, 0.8])
    st = make_optimizer("nesterov", p08, prob)
    assert st.k == 0 and st.w_prev is None
    assert np.array_equal(st.u, prob.w0)
    st2 = make_optimizer("sor", p08, prob)
    assert st2.u is None
    with pytest.raises(DimensionError):
        make_optimizer("sor", p08, prob, w0=np.ones(3))


def test_chebyshev_gamma_bookkeeping(p08):
    prob = diag_problem([0.5])
    st = make_optimizer("chebyshev", p08, prob)
    assert st.gamma_next == 1.0  # gamma_1
    st = step(st, prob)
    assert st.gamma_next == pytest.approx(2.0 / (2.0 - 0.64), rel=1e-15)  # gamma_2
    st = step(st, prob)
    assert st.gamma_next == pytest.approx(1.3076923076923077, rel=1e-14)  # gamma_3


def test_first_step_is_plain_gradient_descent(p08):
    prob = diag_problem([0.2, 0.6, 0.9])
    for method in METHODS:
        traj = run(method, p08, prob, 1)
        # xi_1 = mu * xi_0 for every method
        assert np.allclose(traj.components[1], [0.2, 0.6, 0.9], atol=1e-15), method


def test_run_k0_and_shapes(p08):
    prob = diag_problem([0.3, 0.7])
    traj = run("power", p08, prob, 0)
    assert traj.components.shape == (1, 2)
    assert traj.excess_risks.shape == (1,)
    assert traj.k_max == 0
    with pytest.raises(DimensionError):
        run("power", p08, prob, -1)


def test_gd_energy_decreases(p08):
    spec = SpectrumSpec(kind=SpectrumKind.UNIFORM, dimension=20, seed=11, top=1.0)
    prob = gen_spectrum(spec)
    traj = run("power", p08, prob, 200)
    assert np.all(np.diff(traj.excess_risks) <= 0.0)


def test_start_at_optimum_stays_there(p08):
    prob = diag_problem([0.1, 0.5, 0.8], w0=[0.0, 0.0, 0.0])
    for method in METHODS:
        traj = run(method, p08, prob, 25)
        assert np.all(traj.excess_risks == 0.0), method
        assert np.all(traj.components == 0.0), method


def test_consistency_check_small(p08):
    prob = diag_problem([0.0, 0.2, 0.5, 0.8, 0.95])
    for method in METHODS:
        traj = run(method, p08, prob, 50)
        assert consistency_check(traj, prob) <= 1e-9, method


def test_consistency_check_dimension_mismatch(p08):
    prob = diag_problem([0.3, 0.8])
    other = diag_problem([0.3, 0.8, 0.9])
    traj = run("sor", p08, prob, 5)
    with pytest.raises(MismatchError):
        consistency_check(traj, other)


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
def test_nonfinite_detection():
    # a wildly understated smoothness estimate makes plain descent explode
    params = accel_params(0.5, beta=0.01)  # eta = 100 against curvature 1
    prob = diag_problem([0.0], beta=1.0)  # single eigenvalue 1.0
    st = make_optimizer("power", params, prob)
    with pytest.raises(NonFiniteError):
        for _ in range(400):
            st = step(st, prob)


def test_probe_frozen_ratios(p08):
    initial = 0.5 * p08.beta * (1.0 - p08.rho)
    bound, achieved = worst_case_probe("chebyshev", p08, 2)
    assert achieved / initial == pytest.approx((8.0 / 17.0) ** 2, rel=1e-10)
    bound, achieved = worst_case_probe("power", p08, 3)
    assert achieved / initial == pytest.approx(0.262144, rel=1e-12)
    bound, achieved = worst_case_probe("sor", p08, 2)
    assert achieved / initial == pytest.approx(0.3025, rel=1e-12)


def test_probe_bound_is_tight_everywhere(p08):
    for method in METHODS:
        for k in (1, 2, 7, 30):
            bound, achieved = worst_case_probe(method, p08, k)
            assert bound == pytest.approx(achieved, rel=1e-10), (method, k)
    with pytest.raises(DimensionError):
        worst_case_probe("sor", p08, 0)


def test_mis_specified_beta_still_consistent(p08):
    # method assumes beta = 2 while the true top eigenvalue is 1: mu values
    # shift upward but the polynomial identity must keep holding
    prob = diag_problem([0.1, 0.6, 0.9], beta=1.0)
    params = accel_params(0.8, beta=2.0)
    for method in METHODS:
        traj = run(method, params, prob, 60)
        assert consistency_check(traj, prob) <= 1e-9, method


def test_trajectory_records_method(p08):
    prob = diag_problem([0.4])
    traj = run(Method.NESTEROV, p08, prob, 3)
    assert traj.method == Method.NESTEROV
    assert traj.dimension == 1
    assert traj.w_final.shape == (1,)
