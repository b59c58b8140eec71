"""Problem construction: synthetic spectra and Matrix Market ingestion."""

import numpy as np
import pytest
import scipy.io
import scipy.sparse

from quadmom.errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    IndefiniteError,
    IoError,
    MismatchError,
    NotSymmetricError,
    ParseError,
    SpecError,
)
from quadmom.problems import (
    QuadraticProblem,
    SpectrumKind,
    SpectrumSpec,
    descriptor,
    gen_spectrum,
    load_matrix,
    sqrt_factor,
)


# ---------------------------------------------------------------------------
# synthetic spectra


def test_geometric_decay_example():
    spec = SpectrumSpec(kind=SpectrumKind.GEOMETRIC_DECAY, dimension=4, seed=0, ratio=0.1)
    prob = gen_spectrum(spec)
    assert np.allclose(prob.hessian_eigenvalues, [1.0, 0.1, 0.01, 0.001], rtol=1e-15)
    assert prob.beta == 1.0
    assert prob.representation == "spectral"


def test_explicit_list_maps_to_mu():
    spec = SpectrumSpec(
        kind=SpectrumKind.EXPLICIT_LIST, dimension=1, seed=0, top=1.0, values=(0.2,)
    )
    prob = gen_spectrum(spec)
    assert prob.mu_values()[0] == pytest.approx(0.8, abs=1e-15)


def test_uniform_within_range_and_deterministic():
    spec = SpectrumSpec(kind=SpectrumKind.UNIFORM, dimension=30, seed=42, top=2.0)
    a, b = gen_spectrum(spec), gen_spectrum(spec)
    assert np.array_equal(a.hessian_eigenvalues, b.hessian_eigenvalues)
    assert np.array_equal(a.w_star, b.w_star)
    assert np.array_equal(a.w0, b.w0)
    assert a.hessian_eigenvalues.min() >= 0.0
    assert a.hessian_eigenvalues.max() <= 2.0
    assert a.beta == 2.0
    # order statistics: sorted descending
    assert np.all(np.diff(a.hessian_eigenvalues) <= 0.0)


def test_clustered_kinds_land_near_their_end():
    top = gen_spectrum(
        SpectrumSpec(kind=SpectrumKind.CLUSTERED_TOP, dimension=40, seed=1)
    )
    bottom = gen_spectrum(
        SpectrumSpec(kind=SpectrumKind.CLUSTERED_BOTTOM, dimension=40, seed=1)
    )
    assert top.hessian_eigenvalues.min() > 0.9
    assert bottom.hessian_eigenvalues.max() < 0.15
    # clustered-bottom spectra are the mis-specified regime: mu near 1
    assert bottom.mu_values().min() > 0.85


def test_spectrum_spec_validation():
    with pytest.raises(SpecError):
        gen_spectrum(SpectrumSpec(kind=SpectrumKind.GEOMETRIC_DECAY, dimension=3, ratio=1.5))
    with pytest.raises(SpecError):
        gen_spectrum(SpectrumSpec(kind=SpectrumKind.UNIFORM, dimension=0))
    with pytest.raises(SpecError):
        gen_spectrum(SpectrumSpec(kind=SpectrumKind.UNIFORM, dimension=3, top=-1.0))
    with pytest.raises(SpecError):
        gen_spectrum(SpectrumSpec(kind=SpectrumKind.EXPLICIT_LIST, dimension=2, values=()))
    with pytest.raises(SpecError):
        gen_spectrum(
            SpectrumSpec(kind=SpectrumKind.EXPLICIT_LIST, dimension=2, values=(0.5, 1.5))
        )
    with pytest.raises(SpecError):
        gen_spectrum(
            SpectrumSpec(kind=SpectrumKind.CLUSTERED_TOP, dimension=2, width=-0.1)
        )


def test_linear_term_matches_w_star():
    prob = gen_spectrum(SpectrumSpec(kind=SpectrumKind.UNIFORM, dimension=8, seed=9))
    # b = H w*: the gradient vanishes at the optimum
    assert np.max(np.abs(prob.gradient(prob.w_star))) <= 1e-15


# ---------------------------------------------------------------------------
# Matrix Market loading


def write_mm(path, arr):
    scipy.io.mmwrite(str(path), np.asarray(arr, dtype=np.float64))
    return str(path) + ".mtx"


def test_load_simple_spd(tmp_path):
    path = write_mm(tmp_path / "spd", [[2.0, 0.5], [0.5, 1.0]])
    prob = load_matrix(path)
    assert prob.dimension == 2
    assert prob.representation == "dense"
    eigs = np.linalg.eigvalsh(np.array([[2.0, 0.5], [0.5, 1.0]]))
    assert prob.hessian_eigenvalues == pytest.approx(eigs, rel=1e-12)
    assert prob.beta == pytest.approx(eigs[-1], rel=1e-14)
    # default companion: b = H @ ones, so w* = ones
    assert prob.w_star == pytest.approx(np.ones(2), rel=1e-12)
    assert np.max(np.abs(prob.gradient(prob.w_star))) <= 1e-12
    # basis is orthonormal
    Q = prob.basis
    assert np.max(np.abs(Q.T @ Q - np.eye(2))) <= 1e-10


def test_load_rejects_asymmetric(tmp_path):
    path = write_mm(tmp_path / "asym", [[1.0, 0.3], [0.0, 1.0]])
    with pytest.raises(NotSymmetricError):
        load_matrix(path)


def test_load_rejects_indefinite(tmp_path):
    path = write_mm(tmp_path / "indef", [[1.0, 0.0], [0.0, -0.5]])
    with pytest.raises(IndefiniteError):
        load_matrix(path)


def test_load_zero_matrix_degenerate(tmp_path):
    path = write_mm(tmp_path / "zero", [[0.0, 0.0], [0.0, 0.0]])
    with pytest.raises(DegenerateError):
        load_matrix(path)


def test_load_missing_file():
    with pytest.raises(IoError):
        load_matrix("/no/such/file.mtx")


def test_load_garbage_file(tmp_path):
    bad = tmp_path / "junk.mtx"
    bad.write_text("this is not a matrix\n")
    with pytest.raises(ParseError):
        load_matrix(str(bad))


def test_singular_matrix_rank_deficiency(tmp_path):
    # rank-1 PSD 3x3: one positive eigenvalue, two exact zeros
    v = np.array([[1.0], [1.0], [1.0]])
    path = write_mm(tmp_path / "rank1", v @ v.T)
    prob = load_matrix(path)
    zeros = np.sum(prob.hessian_eigenvalues == 0.0)
    assert zeros == 2
    assert prob.provenance["rank_deficient_directions"] == 2
    # the zero directions map to mu = 1: flagged non-convergent directions
    assert np.sum(prob.mu_values() == 1.0) == 2
    # default b = H@1 lies in the range, so nothing was projected away
    assert prob.provenance["nonconvergent_component_dropped"] == 0.0
    assert np.max(np.abs(prob.gradient(prob.w_star))) <= 1e-12


def test_companion_vector_roundtrip(tmp_path):
    h = [[2.0, 0.0], [0.0, 0.5]]
    path = write_mm(tmp_path / "withy", h)
    yfile = tmp_path / "b.txt"
    yfile.write_text("1.0\n2.0\n")
    prob = load_matrix(path, y_path=str(yfile))
    # w* = H^{-1} b in whatever order eigh produced
    assert prob.gradient(prob.w_star) == pytest.approx(np.zeros(2), abs=1e-12)
    assert prob.excess_risk(prob.w_star) == 0.0
    assert prob.y_vector == pytest.approx(np.array([1.0, 2.0]), rel=1e-15)


def test_companion_vector_length_mismatch(tmp_path):
    path = write_mm(tmp_path / "m", [[1.0, 0.0], [0.0, 1.0]])
    yfile = tmp_path / "b.txt"
    yfile.write_text("1.0\n2.0\n3.0\n")
    with pytest.raises(MismatchError):
        load_matrix(path, y_path=str(yfile))


def test_companion_vector_bad_line(tmp_path):
    path = write_mm(tmp_path / "m2", [[1.0, 0.0], [0.0, 1.0]])
    yfile = tmp_path / "b.txt"
    yfile.write_text("1.0\npotato\n")
    with pytest.raises(ParseError):
        load_matrix(path, y_path=str(yfile))


def test_companion_null_component_projected(tmp_path):
    # b with a component in the null space: projected away and flagged
    v = np.array([[1.0], [1.0]])
    path = write_mm(tmp_path / "null", v @ v.T)
    yfile = tmp_path / "b.txt"
    yfile.write_text("1.0\n-1.0\n")  # entirely in the null space
    prob = load_matrix(path, y_path=str(yfile))
    assert prob.provenance["nonconvergent_component_dropped"] > 0.0
    assert np.max(np.abs(prob.linear_term)) <= 1e-12  # all of b was null


def test_beta_override_only_upward(tmp_path):
    path = write_mm(tmp_path / "b", [[1.0, 0.0], [0.0, 0.25]])
    prob = load_matrix(path, beta_override=4.0)
    assert prob.beta == 4.0
    with pytest.raises(DomainError):
        load_matrix(path, beta_override=0.5)


def test_dimension_cap(tmp_path):
    big = scipy.sparse.coo_matrix(
        (np.ones(1), (np.zeros(1, dtype=int), np.zeros(1, dtype=int))),
        shape=(2001, 2001),
    )
    path = tmp_path / "big.mtx"
    scipy.io.mmwrite(str(path), big)
    with pytest.raises(DimensionError):
        load_matrix(str(path))


def test_sqrt_factor_dense(tmp_path):
    h = np.array([[2.0, 0.5], [0.5, 1.0]])
    path = write_mm(tmp_path / "f", h)
    prob = load_matrix(path)
    X = sqrt_factor(prob)
    assert X.T @ X == pytest.approx(h, abs=1e-10)


def test_descriptor_round_trips_through_json(tmp_path):
    import json

    prob = gen_spectrum(SpectrumSpec(kind=SpectrumKind.UNIFORM, dimension=4, seed=2))
    d = descriptor(prob)
    text = json.dumps(d)
    back = json.loads(text)
    assert back["dimension"] == 4
    assert back["provenance"]["kind"] == "uniform"
    assert len(back["hessian_eigenvalues"]) == 4


def test_mu_values_validates_beta():
    prob = gen_spectrum(SpectrumSpec(kind=SpectrumKind.UNIFORM, dimension=4, seed=3))
    with pytest.raises(DomainError):
        prob.mu_values(prob.beta / 2.0)
    mus = prob.mu_values(2.0 * prob.beta)
    assert mus.min() >= 0.5  # doubling beta pushes every mu above 1/2
