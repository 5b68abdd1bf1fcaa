"""Harmonic-oscillator eigenstates (unit mass and frequency) and their Fermi balls."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import PhaseSpaceEllipsoid
from .errors import DimensionError

__all__ = [
    "OscillatorEigenstate",
    "hermite_polynomial",
    "eigenfunction_value",
    "oscillator_fermi_value",
    "fermi_ball",
]


@dataclass(frozen=True)
class OscillatorEigenstate:
    """Tensor product of unnormalized Hermite functions with quantum numbers ``indices``."""

    indices: tuple[int, ...]
    hbar: float = 1.0

    def __post_init__(self):
        idx = tuple(int(i) for i in np.atleast_1d(self.indices))
        if not idx:
            raise DimensionError("need at least one degree of freedom")
        if any(i < 0 for i in idx) or any(i != j for i, j in zip(idx, np.atleast_1d(self.indices))):
            raise ValueError(f"indices must be nonnegative integers, got {self.indices}")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def energy(self) -> float:
        """Squared Fermi radius, sum_j (2 N_j + 1) hbar (twice the energy)."""
        return float(sum(2 * k + 1 for k in self.indices) * self.hbar)


def hermite_polynomial(N: int, x):
    """Physicists' Hermite polynomial H_N by three-term recurrence."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    x = np.asarray(x, dtype=float)
    h_prev, h = np.ones_like(x), 2.0 * x
    if N == 0:
        h = h_prev
    for k in range(1, N):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return float(h) if h.ndim == 0 else h


def _check(state: OscillatorEigenstate, z, width: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim == 0 or z.shape[-1] != width:
        raise DimensionError(f"expected vectors of length {width}, got shape {z.shape}")
    return z


def eigenfunction_value(state: OscillatorEigenstate, x):
    """prod_j exp(-x_j^2 / 2 hbar) H_{N_j}(x_j / sqrt(hbar)), real and signed."""
    x = _check(state, x, state.n)
    out = np.ones(x.shape[:-1])
    for j, k in enumerate(state.indices):
        xj = x[..., j]
        out = out * np.exp(-xj * xj / (2 * state.hbar)) * hermite_polynomial(k, xj / np.sqrt(state.hbar))
    return float(out) if out.ndim == 0 else out


def oscillator_fermi_value(state: OscillatorEigenstate, z):
    z = _check(state, z, 2 * state.n)
    out = np.sum(z * z, axis=-1) - state.energy
    return float(out) if out.ndim == 0 else out


def fermi_ball(state: OscillatorEigenstate) -> PhaseSpaceEllipsoid:
    """The ball |x|^2 + |p|^2 <= sum_j (2 N_j + 1) hbar."""
    d = 2 * state.n
    return PhaseSpaceEllipsoid(np.zeros(d), np.eye(d), state.energy)
