"""Dense real linear algebra on phase space.

Matrices are plain ``numpy`` arrays.  The ``as_*`` validators convert their
input to a float array and raise if the structural requirement (square,
symmetric, positive definite) does not hold.  Norms written ``|A|_inf`` below
are the largest absolute entry of ``A``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NotPositiveDefinite, NumericalPairingError

SYM_TOL = 1e-10
SPD_TOL = 1e-10
PAIRING_TOL = 1e-6
MAX_DIM = 512

__all__ = [
    "as_square",
    "as_symmetric",
    "as_spd",
    "max_abs",
    "standard_symplectic",
    "symplectic_form",
    "is_symplectic",
    "symplectic_inverse",
    "spd_eigh",
    "spd_power",
    "spd_sqrt",
    "spd_inv",
    "symplectic_eigenvalues",
]


def max_abs(a) -> float:
    """Largest absolute entry; 0 for empty input."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def as_square(m) -> np.ndarray:
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise DimensionError("matrix dimension must be at least 1")
    if m.shape[0] > MAX_DIM:
        raise DimensionError(f"matrix dimension {m.shape[0]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_symmetric(m, tol: float = SYM_TOL) -> np.ndarray:
    """Validate symmetry and return the exactly symmetrized matrix."""
    m = as_square(m)
    scale = max(1.0, max_abs(m))
    if max_abs(m - m.T) > tol * scale:
        raise ValueError("matrix is not symmetric")
    return 0.5 * (m + m.T)


def spd_eigh(m, tol: float = SPD_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition ``(w, V)`` of an SPD matrix, ascending ``w``.

    Raises NotPositiveDefinite when the smallest eigenvalue is not above
    ``tol * |m|_inf``.
    """
    try:
        m = as_symmetric(m)
    except DimensionError:
        raise
    except ValueError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    w, v = np.linalg.eigh(m)
    if w[0] <= tol * max_abs(m):
        raise NotPositiveDefinite(
            f"smallest eigenvalue {w[0]:.3e} is not positive")
    return w, v


def as_spd(m, tol: float = SPD_TOL) -> np.ndarray:
    spd_eigh(m, tol)
    m = np.array(m, dtype=float)
    return 0.5 * (m + m.T)


def spd_power(m, power: float) -> np.ndarray:
    """``m**power`` for SPD ``m`` through its eigendecomposition."""
    w, v = spd_eigh(m)
    r = (v * w**power) @ v.T
    return 0.5 * (r + r.T)


def spd_sqrt(m) -> np.ndarray:
    """Principal (SPD) square root."""
    return spd_power(m, 0.5)


def spd_inv(m) -> np.ndarray:
    return spd_power(m, -1.0)


def standard_symplectic(n: int) -> np.ndarray:
    """The ``2n x 2n`` matrix ``[[0, I], [-I, 0]]``."""
    if int(n) != n or n < 1:
        raise DimensionError(f"number of degrees of freedom must be >= 1, got {n}")
    n = int(n)
    if 2 * n > MAX_DIM:
        raise DimensionError(f"matrix dimension {2 * n} exceeds {MAX_DIM}")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def _half_dim(m: np.ndarray) -> int:
    if m.shape[0] % 2:
        raise DimensionError(f"phase-space matrices need even dimension, got {m.shape[0]}")
    return m.shape[0] // 2


def symplectic_form(z, w) -> np.ndarray:
    """sigma(z, w) = Jz . w, broadcast over leading axes."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    if z.shape[-1] != w.shape[-1] or z.shape[-1] % 2:
        raise DimensionError("phase-space vectors must share an even length")
    n = z.shape[-1] // 2
    x, p = z[..., :n], z[..., n:]
    xw, pw = w[..., :n], w[..., n:]
    # Jz = (p, -x)
    return np.sum(p * xw, axis=-1) - np.sum(x * pw, axis=-1)


def is_symplectic(s, tol: float = 1e-10) -> bool:
    s = as_square(s)
    j = standard_symplectic(_half_dim(s))
    return max_abs(s.T @ j @ s - j) <= tol


def symplectic_inverse(s) -> np.ndarray:
    """Inverse of a symplectic matrix, ``-J S^T J``; no factorization."""
    s = as_square(s)
    j = standard_symplectic(_half_dim(s))
    return -j @ s.T @ j


def symplectic_eigenvalues(m) -> np.ndarray:
    """Symplectic eigenvalues of a ``2n x 2n`` SPD matrix, descending.

    With ``K = M^{1/2} J M^{1/2}`` (similar to ``JM``, and antisymmetric),
    ``K^T K`` is symmetric with every eigenvalue ``lambda_j^2`` appearing
    twice.  Those doubles are paired after sorting.
    """
    m = np.array(m, dtype=float)
    n = _half_dim(as_square(m))
    w, v = spd_eigh(m)
    root = (v * np.sqrt(w)) @ v.T
    k = root @ standard_symplectic(n) @ root
    ktk = k.T @ k
    sq = np.linalg.eigvalsh(0.5 * (ktk + ktk.T))[::-1]
    lam = np.sqrt(np.clip(sq, 0.0, None))
    first, second = lam[0::2], lam[1::2]
    mismatch = np.max(np.abs(first - second))
    if mismatch > PAIRING_TOL * max_abs(m):
        raise NumericalPairingError(
            f"symplectic eigenvalue pairs differ by {mismatch:.3e}")
    return 0.5 * (first + second)
