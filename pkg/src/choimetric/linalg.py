"""Dense complex linear-algebra helpers shared across the package."""

from __future__ import annotations

import numpy as np

# Structural tolerance: closure residuals, Hermiticity, unit reconstruction.
EPS_STRUCT = 1e-9
# Eigenvalue floor for PSD tests, relative to the largest magnitude eigenvalue.
EPS_PSD = 1e-9


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def inner_hs(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product <a, b> = tr(a* b)."""
    return complex(np.vdot(a, b))


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def is_hermitian(m: np.ndarray, tol: float = EPS_STRUCT) -> bool:
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    return frobenius(m - dagger(m)) <= tol * scale


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def min_max_eig(m: np.ndarray) -> tuple[float, float]:
    """Extreme eigenvalues of the Hermitian part of m."""
    lam = np.linalg.eigvalsh(hermitian_part(m))
    return float(lam[0]), float(lam[-1])


def is_psd(m: np.ndarray, tol: float = EPS_PSD) -> bool:
    """PSD test with an eigenvalue floor relative to the largest magnitude
    eigenvalue.  The matrix must also be Hermitian to the same relative
    tolerance."""
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if frobenius(m - dagger(m)) > 10 * tol * scale * m.shape[0]:
        return False
    lam = np.linalg.eigvalsh(hermitian_part(m))
    mag = max(float(np.abs(lam).max(initial=0.0)), 1.0)
    return float(lam[0]) >= -tol * mag


def is_positive_definite(m: np.ndarray, tol: float = EPS_PSD) -> bool:
    lam = np.linalg.eigvalsh(hermitian_part(m))
    mag = max(float(np.abs(lam).max(initial=0.0)), 1.0)
    return float(lam[0]) > tol * mag


def is_unitary(m: np.ndarray, tol: float = EPS_STRUCT) -> bool:
    n = m.shape[0]
    return frobenius(dagger(m) @ m - np.eye(n)) <= tol * n


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_many(mats) -> np.ndarray:
    out = None
    for m in mats:
        out = m if out is None else np.kron(out, m)
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def real_from_complex_columns(cols: np.ndarray) -> np.ndarray:
    """Stack a (n, k) complex matrix into a (2n, k) real matrix."""
    return np.vstack([cols.real, cols.imag])


def null_space_real(mat: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis of the null space of a real matrix, columns."""
    if mat.size == 0:
        return np.eye(mat.shape[1])
    # the economy SVD already carries the complete right factor when the
    # matrix has at least as many rows as columns
    full = mat.shape[0] < mat.shape[1]
    _, s, vh = np.linalg.svd(mat, full_matrices=full)
    if s.size == 0:
        return vh.conj().T
    tol = s[0] * rtol * max(mat.shape)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def row_space_real(mat: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis of the row space of a real matrix, columns."""
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0:
        return np.zeros((mat.shape[1], 0))
    tol = s[0] * rtol * max(mat.shape)
    rank = int(np.sum(s > tol))
    return vh[:rank].conj().T
