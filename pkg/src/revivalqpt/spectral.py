"""Symmetric eigenproblem kernels shared by every model module.

Two matrix carriers (tridiagonal and dense) and two solver entry points.
The dense path reduces to tridiagonal form with orthogonal Householder
transformations and then reuses the tridiagonal solver, so both paths
share one spectral backend.  Everything is float64.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import scipy.linalg
from scipy.linalg import lapack as _lapack

__all__ = [
    "ValidationError",
    "SolverError",
    "SymTridiagonal",
    "SymDense",
    "EigenSystem",
    "EnergySpectrum",
    "eig_sym_tridiagonal",
    "eig_sym_dense",
]

# Residual acceptance for eigenpairs, relative to the matrix inf-norm.
RESIDUAL_RTOL = 1e-9
# Relative asymmetry tolerated by SymDense.
SYMMETRY_RTOL = 1e-12


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


class SolverError(RuntimeError):
    """Raised when an eigensolver fails to converge.

    ``index`` carries the failure index reported by the backend, when the
    backend reports one; otherwise None.
    """

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


def _as_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class SymTridiagonal:
    """Symmetric tridiagonal matrix: main diagonal and one off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = _as_vector(self.diag, "diag")
        off = _as_vector(self.offdiag, "offdiag")
        if diag.size < 1:
            raise ValidationError("diag must hold at least one entry")
        if off.size != diag.size - 1:
            raise ValidationError(
                f"offdiag length {off.size} does not match dim {diag.size}"
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    @property
    def dim(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.offdiag.size:
            idx = np.arange(self.offdiag.size)
            m[idx, idx + 1] = self.offdiag
            m[idx + 1, idx] = self.offdiag
        return m

    def inf_norm(self) -> float:
        return float(np.max(np.abs(self.to_dense()).sum(axis=1)))


@dataclass(frozen=True)
class SymDense:
    """Dense symmetric matrix; rejects asymmetry beyond 1e-12 relative."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"entries must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValidationError("entries must be at least 1x1")
        if not np.all(np.isfinite(m)):
            raise ValidationError("entries contain non-finite values")
        scale = max(float(np.max(np.abs(m))), 1.0)
        asym = float(np.max(np.abs(m - m.T)))
        if asym > SYMMETRY_RTOL * scale:
            raise ValidationError(
                f"matrix asymmetric: max |M - M^T| = {asym:.3e} "
                f"exceeds {SYMMETRY_RTOL:g} relative"
            )
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def inf_norm(self) -> float:
        return float(np.max(np.abs(self.entries).sum(axis=1)))


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues, optional orthonormal eigenvectors.

    ``residual_bound`` is the largest per-pair residual ||Mv - lambda v||_inf
    actually measured; it is None when vectors were not requested.
    """

    values: np.ndarray
    vectors: Optional[np.ndarray] = None
    residual_bound: Optional[float] = None

    def __post_init__(self):
        vals = _as_vector(self.values, "values")
        if np.any(np.diff(vals) < 0):
            raise ValidationError("eigenvalues must be non-decreasing")
        object.__setattr__(self, "values", vals)
        if self.vectors is not None:
            vecs = np.asarray(self.vectors, dtype=float)
            if vecs.shape != (vals.size, vals.size):
                raise ValidationError("vectors must be a square matrix of columns")
            object.__setattr__(self, "vectors", vecs)


@dataclass(frozen=True)
class EnergySpectrum:
    """Ascending eigenvalues of one symmetry sector, indexed by level k."""

    levels: np.ndarray
    params: Any = None
    truncation_converged: Optional[bool] = None

    def __post_init__(self):
        levels = _as_vector(self.levels, "levels")
        if np.any(np.diff(levels) < 0):
            raise ValidationError("levels must be ascending")
        object.__setattr__(self, "levels", levels)

    def __len__(self) -> int:
        return self.levels.size


def _check_trace(values: np.ndarray, trace: float) -> None:
    # sum(values) must reproduce the matrix trace within 1e-8 relative.
    err = abs(float(np.sum(values)) - trace)
    if err > 1e-8 * abs(trace) + 1e-10:
        raise SolverError(
            f"eigenvalue sum deviates from trace by {err:.3e}", index=None
        )


def _failure_index(exc: Exception) -> Optional[int]:
    m = re.search(r"(\d+)", str(exc))
    return int(m.group(1)) if m else None


def _check_residuals(
    dense: np.ndarray, values: np.ndarray, vectors: np.ndarray, norm: float
) -> float:
    resid = dense @ vectors - vectors * values[np.newaxis, :]
    worst = float(np.max(np.abs(resid))) if resid.size else 0.0
    if worst > RESIDUAL_RTOL * max(norm, 1e-300):
        raise SolverError(
            f"eigenpair residual {worst:.3e} exceeds {RESIDUAL_RTOL:g} * ||M||",
            index=int(np.argmax(np.max(np.abs(resid), axis=0))),
        )
    return worst


def eig_sym_tridiagonal(m: SymTridiagonal, want_vectors: bool = False) -> EigenSystem:
    """Eigenvalues (and optionally eigenvectors) of a symmetric tridiagonal.

    Values-only calls use the QL/QR variant that skips vector accumulation.
    Non-convergence surfaces as SolverError carrying the index the backend
    reported.
    """
    if not isinstance(m, SymTridiagonal):
        raise ValidationError("expected a SymTridiagonal")
    if m.dim == 1:
        vecs = np.array([[1.0]]) if want_vectors else None
        return EigenSystem(m.diag.copy(), vecs, 0.0 if want_vectors else None)
    trace = float(np.sum(m.diag))
    try:
        if want_vectors:
            values, vectors = scipy.linalg.eigh_tridiagonal(
                m.diag, m.offdiag, lapack_driver="stev"
            )
        else:
            values = scipy.linalg.eigh_tridiagonal(
                m.diag, m.offdiag, eigvals_only=True, lapack_driver="sterf"
            )
            vectors = None
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"tridiagonal eigensolver failed to converge: {exc}",
            index=_failure_index(exc),
        ) from exc
    _check_trace(values, trace)
    residual = None
    if want_vectors:
        residual = _check_residuals(m.to_dense(), values, vectors, m.inf_norm())
    return EigenSystem(values, vectors, residual)


def eig_sym_dense(m: SymDense, want_vectors: bool = False) -> EigenSystem:
    """Dense symmetric eigensolve: Householder reduction, then the
    tridiagonal backend.  Vector mode back-transforms with the accumulated
    orthogonal factor."""
    if not isinstance(m, SymDense):
        raise ValidationError("expected a SymDense")
    a = np.asfortranarray(m.entries.copy())
    trace = float(np.trace(a))
    if m.dim == 1:
        vecs = np.array([[1.0]]) if want_vectors else None
        return EigenSystem(np.diag(a).copy(), vecs, 0.0 if want_vectors else None)
    c, d, e, tau, info = _lapack.dsytrd(a, lower=0)
    if info != 0:
        raise SolverError(f"tridiagonal reduction failed (info={info})", index=info)
    tri = SymTridiagonal(d, e)
    try:
        if want_vectors:
            values, tri_vectors = scipy.linalg.eigh_tridiagonal(
                tri.diag, tri.offdiag, lapack_driver="stev"
            )
        else:
            values = scipy.linalg.eigh_tridiagonal(
                tri.diag, tri.offdiag, eigvals_only=True, lapack_driver="sterf"
            )
            tri_vectors = None
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"dense eigensolver failed to converge: {exc}",
            index=_failure_index(exc),
        ) from exc
    _check_trace(values, trace)
    residual = None
    vectors = None
    if want_vectors:
        q = _accumulate_q_upper(c, tau)
        vectors = q @ tri_vectors
        residual = _check_residuals(m.entries, values, vectors, m.inf_norm())
    return EigenSystem(values, vectors, residual)


def _accumulate_q_upper(c: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """Orthogonal factor of the upper-storage Householder reduction.

    With upper storage Q = H_{n-1} ... H_1 where H_i = I - tau_i v v^T,
    the i-th reflector having v[i-1] = 1, v[i:] = 0, and its head stored
    in column i of the reduced matrix (0-based).  Applied as successive
    rank-1 updates.
    """
    n = c.shape[0]
    q = np.eye(n)
    for i in range(n - 1):
        v = np.zeros(n)
        v[i] = 1.0
        v[:i] = c[:i, i + 1]
        q -= np.outer(tau[i] * v, v @ q)
    return q
