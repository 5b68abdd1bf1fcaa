"""Closed-form Fermi and Wigner machinery for squeezed coherent states.

A state is the centred Gaussian

    psi(x) = (pi hbar)^(-n/4) det(X)^(1/4) exp(-(X + iY) x.x / (2 hbar))

with ``X`` symmetric positive definite and ``Y`` symmetric.  Phase-space
points are ordered ``z = (x_1..x_n, p_1..p_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError
from .symplectic import (
    as_symmetric,
    max_abs,
    spd_eigh,
    symplectic_inverse,
)

__all__ = [
    "SqueezedState",
    "FermiQuadric",
    "FermiFactorization",
    "random_squeezed_state",
    "evaluate_state",
    "fermi_quadric",
    "fermi_value",
    "fermi_factorization",
    "wigner_matrix",
    "wigner_value",
    "wigner_transform_point",
    "wigner_fermi_identity_residual",
]


@dataclass(frozen=True, eq=False)
class SqueezedState:
    X: np.ndarray
    Y: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        w, v = spd_eigh(self.X)
        x = 0.5 * (np.asarray(self.X, float) + np.asarray(self.X, float).T)
        y = as_symmetric(self.Y)
        if y.shape != x.shape:
            raise DimensionError(f"X is {x.shape} but Y is {y.shape}")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)
        object.__setattr__(self, "hbar", float(self.hbar))
        object.__setattr__(self, "_eig", (w, v))

    @classmethod
    def fiducial(cls, n: int = 1, hbar: float = 1.0) -> "SqueezedState":
        """The isotropic ground state, X = I and Y = 0."""
        return cls(np.eye(n), np.zeros((n, n)), hbar)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def trace_x(self) -> float:
        return float(np.trace(self.X))

    @property
    def x_eigenvalues(self) -> np.ndarray:
        return self._eig[0]

    def _x_power(self, power: float) -> np.ndarray:
        w, v = self._eig
        r = (v * w**power) @ v.T
        return 0.5 * (r + r.T)

    @cached_property
    def x_sqrt(self) -> np.ndarray:
        return self._x_power(0.5)

    @cached_property
    def x_inv_sqrt(self) -> np.ndarray:
        return self._x_power(-0.5)

    @cached_property
    def x_inv(self) -> np.ndarray:
        return self._x_power(-1.0)


@dataclass(frozen=True, eq=False)
class FermiQuadric:
    """g_F(z) = mF z.z - constant."""

    mF: np.ndarray
    constant: float


@dataclass(frozen=True, eq=False)
class FermiFactorization:
    """mF = s^T d s with s symplectic and d = diag(X, X)."""

    s: np.ndarray
    d: np.ndarray


def random_squeezed_state(rng: np.random.Generator, n: int, hbar: float = 1.0,
                          spread: float = 2.0, floor: float = 0.1) -> SqueezedState:
    """Draw X = A^T A + floor*I and a symmetric Y, entries uniform in [-spread, spread]."""
    a = rng.uniform(-spread, spread, size=(n, n))
    y = np.triu(rng.uniform(-spread, spread, size=(n, n)))
    y = y + np.triu(y, 1).T
    return SqueezedState(a.T @ a + floor * np.eye(n), y, hbar)


def _points(state: SqueezedState, z, width: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim == 0 or z.shape[-1] != width:
        raise DimensionError(
            f"expected vectors of length {width}, got shape {z.shape}")
    return z


def evaluate_state(state: SqueezedState, x) -> complex | np.ndarray:
    """Wavefunction value at ``x`` (shape ``(..., n)``)."""
    x = _points(state, x, state.n)
    hbar = state.hbar
    norm = (np.pi * hbar) ** (-state.n / 4) * np.prod(state.x_eigenvalues) ** 0.25
    q = np.einsum("...i,ij,...j->...", x, state.X + 1j * state.Y, x)
    out = norm * np.exp(-q / (2 * hbar))
    return complex(out) if out.ndim == 0 else out


def fermi_quadric(state: SqueezedState) -> FermiQuadric:
    x, y = state.X, state.Y
    m = np.block([[x @ x + y @ y, y], [y, np.eye(state.n)]])
    return FermiQuadric(0.5 * (m + m.T), state.hbar * state.trace_x)


def fermi_value(state: SqueezedState, z) -> float | np.ndarray:
    """(p + Yx)^2 + X^2 x.x - hbar Tr X at ``z = (x, p)``."""
    z = _points(state, z, 2 * state.n)
    n = state.n
    x, p = z[..., :n], z[..., n:]
    kin = p + x @ state.Y.T
    xx = x @ state.X.T
    out = np.sum(kin * kin, axis=-1) + np.sum(xx * xx, axis=-1) - state.hbar * state.trace_x
    return float(out) if out.ndim == 0 else out


def fermi_factorization(state: SqueezedState) -> FermiFactorization:
    n = state.n
    zero = np.zeros((n, n))
    s = np.block([[state.x_sqrt, zero],
                  [state.x_inv_sqrt @ state.Y, state.x_inv_sqrt]])
    d = np.block([[state.X, zero], [zero, state.X]])
    return FermiFactorization(s, d)


def wigner_matrix(state: SqueezedState) -> np.ndarray:
    """The matrix G of the Wigner exponent, built from its block formula."""
    x, y, xi = state.X, state.Y, state.x_inv
    g = np.block([[x + y @ xi @ y, y @ xi], [xi @ y, xi]])
    return 0.5 * (g + g.T)


def wigner_value(state: SqueezedState, z) -> float | np.ndarray:
    z = _points(state, z, 2 * state.n)
    g = wigner_matrix(state)
    q = np.einsum("...i,ij,...j->...", z, g, z)
    out = (np.pi * state.hbar) ** (-state.n) * np.exp(-q / state.hbar)
    return float(out) if out.ndim == 0 else out


def wigner_transform_point(state: SqueezedState) -> np.ndarray:
    """The linear map S^-1 D^-1/2 S taking Wigner arguments to Fermi arguments."""
    fac = fermi_factorization(state)
    n = state.n
    zero = np.zeros((n, n))
    d_inv_sqrt = np.block([[state.x_inv_sqrt, zero], [zero, state.x_inv_sqrt]])
    return symplectic_inverse(fac.s) @ d_inv_sqrt @ fac.s


def wigner_fermi_identity_residual(state: SqueezedState, samples) -> float:
    """Largest deviation between the Wigner function and its Fermi-function form.

    The Fermi form is ``(pi hbar)^-n exp(-Tr X) exp(-g_F(T z) / hbar)`` with
    ``T = S^-1 D^-1/2 S``; the result is scaled by the peak ``(pi hbar)^-n``.
    """
    z = _points(state, samples, 2 * state.n)
    if z.ndim == 1:
        z = z[None, :]
    if z.shape[0] == 0:
        raise ValueError("need at least one sample point")
    peak = (np.pi * state.hbar) ** (-state.n)
    moved = z @ wigner_transform_point(state).T
    fermi_form = peak * np.exp(-state.trace_x) * np.exp(-fermi_value(state, moved) / state.hbar)
    return max_abs(wigner_value(state, z) - fermi_form) / peak
