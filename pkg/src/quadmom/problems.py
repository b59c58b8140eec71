"""Quadratic problem construction: synthetic spectra and Matrix Market files.

A problem is ``f(w) = 1/2 ||y - X w||^2`` represented through its Hessian
``H = X^T X``: either spectrally (eigenvalues only, identity basis) or as a
dense symmetric matrix with its eigendecomposition attached. The linear term
is ``b = X^T y``, so the gradient is ``H w - b`` and the minimizer solves the
normal equations. Everything downstream is per-eigenvalue, which is why a
dense symmetric eigendecomposition (capped at d <= 2000) is all the linear
algebra this package ever needs.

Synthetic problems draw ``w*`` and ``w0`` from a seeded generator and take
``y = X w*`` (zero residual at the optimum, hence ``b = H w*``). File-loaded
problems read a real symmetric Matrix Market file as ``H``, optionally a
companion plain-text vector (one value per line) holding ``b``, defaulting to
``b = H 1``; any component of ``b`` in the null space of ``H`` makes plain
gradient descent drift forever, so such components are projected out, the
problem is restricted to the range of ``H``, and the event is flagged in the
provenance record.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import scipy.io
import scipy.sparse

from .errors import (
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

__all__ = [
    "MAX_DIMENSION",
    "QuadraticProblem",
    "SpectrumKind",
    "SpectrumSpec",
    "descriptor",
    "gen_spectrum",
    "load_matrix",
    "sqrt_factor",
]

MAX_DIMENSION = 2000

#: Hessian eigenvalues this far below zero (relative to beta) mean the input
#: was genuinely indefinite rather than a rank-deficient matrix with rounding.
INDEFINITE_CUTOFF = 1e-6

#: eigenvalues within this relative band of zero are treated as exact rank
#: deficiency (covers both signs of eigensolver noise on singular inputs).
RANK_CUTOFF = 1e-12


@dataclass(frozen=True)
class QuadraticProblem:
    """Immutable least-squares quadratic, spectral or dense representation."""

    dimension: int
    hessian_eigenvalues: np.ndarray
    beta: float
    basis: Optional[np.ndarray]  # None marks the identity basis
    w_star: np.ndarray
    representation: str  # "spectral" | "dense"
    linear_term: np.ndarray  # b = X^T y; gradient(w) = H w - b
    w0: np.ndarray
    dense_hessian: Optional[np.ndarray] = None
    y_vector: Optional[np.ndarray] = None
    provenance: dict = field(default_factory=dict)

    def gradient(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.dimension,):
            raise DimensionError(f"expected shape ({self.dimension},), got {w.shape}")
        if self.representation == "spectral":
            return self.hessian_eigenvalues * w - self.linear_term
        return self.dense_hessian @ w - self.linear_term

    def components(self, w: np.ndarray) -> np.ndarray:
        """Error coordinates of ``w`` in the Hessian eigenbasis: <w - w*, q_i>."""
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.dimension,):
            raise DimensionError(f"expected shape ({self.dimension},), got {w.shape}")
        xi = w - self.w_star
        return xi if self.basis is None else self.basis.T @ xi

    def mu_values(self, beta: Optional[float] = None) -> np.ndarray:
        """Spectrum of B = I - H/beta; beta defaults to the problem's own."""
        b = self.beta if beta is None else float(beta)
        if b < self.beta * (1.0 - 1e-12):
            raise DomainError(
                f"beta={b!r} is below the top Hessian eigenvalue {self.beta!r}"
            )
        return 1.0 - self.hessian_eigenvalues / b

    def excess_risk(self, w: np.ndarray) -> float:
        """f(w) - f(w*) = 1/2 (w - w*)^T H (w - w*), exact for quadratics."""
        xi = self.components(w)
        return 0.5 * float(np.dot(self.hessian_eigenvalues, xi * xi))


class SpectrumKind(str, Enum):
    UNIFORM = "uniform"
    GEOMETRIC_DECAY = "geometric"
    CLUSTERED_TOP = "clustered_top"
    CLUSTERED_BOTTOM = "clustered_bottom"
    EXPLICIT_LIST = "explicit"


@dataclass(frozen=True)
class SpectrumSpec:
    """Recipe for a synthetic Hessian spectrum; deterministic given the seed.

    ``top`` is the smoothness scale beta; all generated eigenvalues land in
    [0, top]. Kind-specific knobs: ``ratio`` (geometric decay per index),
    ``center``/``width`` (clustered kinds; center defaults to top resp. 0),
    ``values`` (explicit list).
    """

    kind: SpectrumKind
    dimension: int
    seed: int = 0
    top: float = 1.0
    ratio: float = 0.1
    center: Optional[float] = None
    width: float = 0.05
    values: Optional[tuple] = None


def _spectrum_values(spec: SpectrumSpec, rng: np.random.Generator) -> np.ndarray:
    top = spec.top
    d = spec.dimension
    kind = SpectrumKind(spec.kind)
    if kind == SpectrumKind.UNIFORM:
        eigs = np.sort(rng.uniform(0.0, top, d))[::-1]
    elif kind == SpectrumKind.GEOMETRIC_DECAY:
        if not (0.0 < spec.ratio < 1.0):
            raise SpecError(f"geometric decay ratio must lie in (0, 1), got {spec.ratio!r}")
        eigs = top * spec.ratio ** np.arange(d, dtype=np.float64)
    elif kind in (SpectrumKind.CLUSTERED_TOP, SpectrumKind.CLUSTERED_BOTTOM):
        if spec.width < 0.0:
            raise SpecError(f"cluster width must be >= 0, got {spec.width!r}")
        center = spec.center
        if center is None:
            center = top if kind == SpectrumKind.CLUSTERED_TOP else 0.05 * top
        if not (0.0 <= center <= top):
            raise SpecError(f"cluster center must lie in [0, top], got {center!r}")
        eigs = np.clip(center + spec.width * top * (rng.random(d) - 0.5), 0.0, top)
        eigs = np.sort(eigs)[::-1]
    elif kind == SpectrumKind.EXPLICIT_LIST:
        if not spec.values:
            raise SpecError("explicit spectrum needs a nonempty values tuple")
        eigs = np.asarray(spec.values, dtype=np.float64)
        if eigs.shape != (d,):
            raise SpecError(f"explicit values must have length {d}, got {eigs.shape}")
        if eigs.min() < 0.0 or eigs.max() > top:
            raise SpecError(f"explicit eigenvalues must lie in [0, top={top!r}]")
    else:  # pragma: no cover - enum is closed
        raise SpecError(f"unknown spectrum kind {spec.kind!r}")
    return np.ascontiguousarray(eigs, dtype=np.float64)


def gen_spectrum(spec: SpectrumSpec) -> QuadraticProblem:
    """Deterministic synthetic problem in the spectral representation.

    Draw order is fixed (eigenvalues, then w*, then w0) so identical specs
    are bit-for-bit identical. ``y = X w*``, hence ``b = H w*`` and the
    excess risk at w* is exactly zero.
    """
    if spec.dimension < 1:
        raise SpecError(f"dimension must be >= 1, got {spec.dimension!r}")
    if spec.dimension > MAX_DIMENSION:
        raise SpecError(f"dimension {spec.dimension} exceeds the cap {MAX_DIMENSION}")
    if not (spec.top > 0.0 and math.isfinite(spec.top)):
        raise SpecError(f"top (beta) must be finite and positive, got {spec.top!r}")
    rng = np.random.default_rng(spec.seed)
    eigs = _spectrum_values(spec, rng)
    w_star = rng.standard_normal(spec.dimension)
    w0 = rng.standard_normal(spec.dimension)
    return QuadraticProblem(
        dimension=spec.dimension,
        hessian_eigenvalues=eigs,
        beta=float(spec.top),
        basis=None,
        w_star=w_star,
        representation="spectral",
        linear_term=eigs * w_star,
        w0=w0,
        provenance={
            "source": "synthetic",
            "kind": SpectrumKind(spec.kind).value,
            "seed": spec.seed,
            "top": spec.top,
        },
    )


def _read_companion(y_path: str, d: int) -> np.ndarray:
    try:
        with open(y_path, "r", encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise IoError(f"cannot read companion vector {y_path!r}: {exc}") from exc
    vals = []
    for ln in lines:
        if not ln or ln.startswith(("%", "#")):
            continue
        try:
            vals.append(float(ln))
        except ValueError:
            raise ParseError(f"companion vector {y_path!r}: bad line {ln!r}") from None
    vec = np.asarray(vals, dtype=np.float64)
    if vec.shape != (d,):
        raise MismatchError(
            f"companion vector has {vec.size} entries, problem dimension is {d}"
        )
    return vec


def load_matrix(
    path: str,
    y_path: Optional[str] = None,
    beta_override: Optional[float] = None,
) -> QuadraticProblem:
    """Load a real symmetric Matrix Market file as the Hessian.

    The eigendecomposition is dense (d <= 2000 enforced before
    densification). beta is the top eigenvalue unless overridden upward.
    Slightly negative eigenvalues are eigensolver noise on singular inputs
    and are clamped to exact zeros; anything below -1e-6*beta raises
    IndefiniteError. ``w*`` is the pseudoinverse solution on the positive
    eigenspace; null-space components of ``b`` are projected away and
    flagged (see the module docstring).
    """
    if not os.path.exists(path):
        raise IoError(f"no such matrix file: {path!r}")
    try:
        raw = scipy.io.mmread(path)
    except OSError as exc:
        raise IoError(f"cannot read {path!r}: {exc}") from exc
    except Exception as exc:
        raise ParseError(f"not a readable Matrix Market file: {path!r} ({exc})") from exc

    if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
        raise ParseError(f"matrix must be square, got shape {raw.shape}")
    d = int(raw.shape[0])
    if d < 1:
        raise ParseError("matrix is empty")
    if d > MAX_DIMENSION:
        raise DimensionError(f"dimension {d} exceeds the dense cap {MAX_DIMENSION}")
    dense = raw.toarray() if scipy.sparse.issparse(raw) else np.asarray(raw)
    dense = np.asarray(dense, dtype=np.float64)
    if not np.all(np.isfinite(dense)):
        raise ParseError(f"matrix {path!r} contains non-finite entries")

    scale = float(np.abs(dense).max())
    asym = float(np.abs(dense - dense.T).max())
    if scale == 0.0:
        raise DegenerateError(f"matrix {path!r} is identically zero")
    if asym > 1e-10 * scale:
        raise NotSymmetricError(
            f"matrix {path!r} is asymmetric: max |A - A^T| = {asym:g} vs scale {scale:g}"
        )
    sym = 0.5 * (dense + dense.T)

    eigs, basis = np.linalg.eigh(sym)  # ascending
    beta = float(eigs[-1])
    if beta <= 0.0:
        raise IndefiniteError(f"matrix {path!r} has no positive eigenvalue")
    if float(eigs[0]) < -INDEFINITE_CUTOFF * beta:
        raise IndefiniteError(
            f"matrix {path!r} has eigenvalue {eigs[0]:g} below -{INDEFINITE_CUTOFF:g}*beta"
        )
    eigs = np.where(eigs <= RANK_CUTOFF * beta, 0.0, eigs)

    if beta_override is not None:
        if beta_override < beta * (1.0 - 1e-12):
            raise DomainError(
                f"beta override {beta_override!r} is below the top eigenvalue {beta!r}; "
                "the smoothness estimate may only be raised"
            )
        beta = float(max(beta, beta_override))

    b = _read_companion(y_path, d) if y_path is not None else sym @ np.ones(d)
    b_comp = basis.T @ b
    null = eigs == 0.0
    dropped = float(np.linalg.norm(b_comp[null])) if null.any() else 0.0
    flagged = dropped > 1e-8 * max(float(np.linalg.norm(b)), 1e-300)
    if null.any():
        b_comp = np.where(null, 0.0, b_comp)
        b = basis @ b_comp
    w_star_comp = np.divide(b_comp, eigs, out=np.zeros_like(b_comp), where=~null)
    w_star = basis @ w_star_comp

    provenance = {
        "source": "matrix-market",
        "path": os.path.abspath(path),
        "companion": os.path.abspath(y_path) if y_path else None,
        "rank_deficient_directions": int(null.sum()),
        "nonconvergent_component_dropped": dropped if flagged else 0.0,
    }
    return QuadraticProblem(
        dimension=d,
        hessian_eigenvalues=np.ascontiguousarray(eigs),
        beta=beta,
        basis=basis,
        w_star=w_star,
        representation="dense",
        linear_term=b,
        w0=np.zeros(d),
        dense_hessian=sym,
        y_vector=b,
        provenance=provenance,
    )


def sqrt_factor(problem: QuadraticProblem) -> np.ndarray:
    """A matrix X with X^T X equal to the Hessian (symmetric square root)."""
    eigs = problem.hessian_eigenvalues
    if eigs.min() < 0.0:
        raise IndefiniteError("cannot factor a Hessian with negative eigenvalues")
    root = np.sqrt(eigs)
    if problem.basis is None:
        return np.diag(root)
    return (problem.basis * root) @ problem.basis.T


def descriptor(problem: QuadraticProblem) -> dict:
    """JSON-ready reproducibility record for a problem."""
    return {
        "dimension": problem.dimension,
        "beta": problem.beta,
        "representation": problem.representation,
        "hessian_eigenvalues": [float(v) for v in problem.hessian_eigenvalues],
        "provenance": dict(problem.provenance),
    }
