"""Dense complex linear algebra for Hilbert-space dimensions up to 8.

Everything here operates on plain complex ndarrays.  The routines are thin,
contract-checked layers over LAPACK (via numpy), except for the matrix
exponential, which is implemented directly with scaling-and-squaring so that
it stays trustworthy for the non-Hermitian generators used by the no-jump
evolution.

Tolerance conventions used throughout the package:
construction/identity checks 1e-10, solver/spectral checks 1e-8,
physics-level acceptance checks 1e-6.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, NumericalFailureError

HERMITICITY_TOL = 1e-9
PSD_CLAMP_TOL = 1e-9


class EigenDecomposition(NamedTuple):
    """Eigenvalues plus the matrix of column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Largest entrywise absolute difference (the package's equality metric)."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return max_abs_diff(m, dagger(m)) <= tol


def _require_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise InvalidInputError("matrix dimension must be at least 1")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; block (i, j) equals a[i, j] * b."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a truncated series.

    The input is halved until its 1-norm is at most 0.5, the series is summed
    to machine tolerance, and the result is squared back up.  Accurate to
    better than 1e-10 relative error for norms up to ~100, Hermitian or not.
    """
    m = _require_square(m)
    d = m.shape[0]
    norm = float(np.linalg.norm(m, 1))
    n_squarings = 0
    if norm > 0.5:
        n_squarings = max(0, int(math.ceil(math.log2(norm / 0.5))))
    a = m / (2.0 ** n_squarings)

    eye = np.eye(d, dtype=complex)
    total = eye.copy()
    term = eye.copy()
    for k in range(1, 40):
        term = term @ a / k
        total += term
        if np.max(np.abs(term)) <= 1e-18 * (1.0 + np.max(np.abs(total))):
            break
    else:  # pragma: no cover - series converges in < 25 terms for norm <= 0.5
        raise NumericalFailureError("matrix exponential series did not converge")

    for _ in range(n_squarings):
        total = total @ total
    return total


def eig_hermitian(m: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending."""
    m = _require_square(m)
    if not is_hermitian(m):
        raise InvalidInputError(
            f"matrix is not Hermitian within {HERMITICITY_TOL:g}"
        )
    values, vectors = np.linalg.eigh(m)
    order = np.argsort(values)[::-1]
    return EigenDecomposition(values[order].copy(), vectors[:, order].copy())


def eig_general(m: np.ndarray) -> EigenDecomposition:
    """General (possibly non-Hermitian) eigendecomposition, unsorted."""
    m = _require_square(m)
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        # LAPACK does not report its iteration count; forward its message.
        raise NumericalFailureError(f"eigendecomposition did not converge: {exc}")
    return EigenDecomposition(values, vectors)


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix.

    Eigenvalues in [-1e-9, 0) are treated as round-off and clamped to zero;
    anything more negative is rejected.
    """
    m = _require_square(m)
    if not is_hermitian(m):
        raise InvalidInputError(
            f"matrix is not Hermitian within {HERMITICITY_TOL:g}"
        )
    values, vectors = np.linalg.eigh(m)
    if values.min() < -PSD_CLAMP_TOL:
        raise InvalidInputError(
            f"matrix has negative eigenvalue {values.min():.3e}, not PSD"
        )
    root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    return (root + dagger(root)) / 2.0


def null_space(m: np.ndarray, tol: float) -> list[np.ndarray]:
    """Orthonormal basis of the right null space {v : ||m v|| <= tol ||m||}."""
    if tol <= 0:
        raise InvalidInputError("null-space tolerance must be positive")
    m = _require_square(m)
    _, singular, vh = np.linalg.svd(m)
    smax = singular[0] if singular.size else 0.0
    if smax == 0.0:
        mask = np.ones(m.shape[1], dtype=bool)
    else:
        mask = singular <= tol * smax
    return [vh[i].conj() for i in np.nonzero(mask)[0]]
