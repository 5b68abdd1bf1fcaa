"""Sampled 1D wavefunctions, their polar form, and phase-space fields."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyWavefunction, GridError

__all__ = [
    "NODE_THRESHOLD",
    "GridWavefunction",
    "PolarFields",
    "PhaseSpaceField",
    "polar_decompose",
    "second_difference",
    "true_runs",
    "run_gradient",
]

NODE_THRESHOLD = 1e-6
MIN_SAMPLES = 16
DECAY_RATIO = 1e-6


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    """Samples ``psi(x_min + k dx)`` for ``k = 0..K-1``."""

    x_min: float
    dx: float
    samples: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex).reshape(-1)
        if samples.size < MIN_SAMPLES:
            raise GridError(f"need at least {MIN_SAMPLES} samples, got {samples.size}")
        if not (np.isfinite(self.dx) and self.dx > 0):
            raise GridError(f"dx must be positive, got {self.dx}")
        if not np.all(np.isfinite(samples)):
            raise GridError("samples contain non-finite values")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        peak = np.max(np.abs(samples))
        if peak == 0:
            raise EmptyWavefunction("all samples are zero")
        edge = max(abs(samples[0]), abs(samples[-1]))
        if edge > DECAY_RATIO * peak:
            warnings.warn(
                f"wavefunction has not decayed at the grid boundary "
                f"(|psi| = {edge / peak:.2e} of peak)", RuntimeWarning, stacklevel=3)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "hbar", float(self.hbar))

    @classmethod
    def from_function(cls, f, x_min: float, x_max: float, count: int,
                      hbar: float = 1.0) -> "GridWavefunction":
        """Sample ``f`` (vectorized over a 1D array) on ``count`` points spanning [x_min, x_max]."""
        if count < 2 or not x_max > x_min:
            raise GridError("need count >= 2 and x_max > x_min")
        x = np.linspace(x_min, x_max, count)
        return cls(x_min, (x_max - x_min) / (count - 1), f(x), hbar)

    @property
    def size(self) -> int:
        return self.samples.size

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.size)

    @property
    def x_max(self) -> float:
        return self.x_min + self.dx * (self.size - 1)

    def norm_squared(self) -> float:
        """Riemann sum of |psi|^2 dx."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.dx)


@dataclass(frozen=True, eq=False)
class PolarFields:
    """psi = r exp(i phi / hbar) on the grid; entries under ``node_mask`` are unreliable."""

    r: np.ndarray
    phi: np.ndarray
    node_mask: np.ndarray


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Real field on an (x, p) grid; ``values[k, m]`` sits at ``(x_axis[k], p_axis[m])``."""

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    masked: np.ndarray

    def __post_init__(self):
        shape = (len(self.x_axis), len(self.p_axis))
        if np.shape(self.values) != shape or np.shape(self.masked) != shape:
            raise GridError("field arrays do not match the axes")

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0])

    @property
    def dp(self) -> float:
        return float(self.p_axis[1] - self.p_axis[0])

    @property
    def spacing(self) -> float:
        return max(self.dx, self.dp)


def polar_decompose(psi: GridWavefunction, mode: str = "abs",
                    node_threshold: float = NODE_THRESHOLD) -> PolarFields:
    """Split samples into amplitude and phase.

    ``mode="abs"`` takes ``r = |psi|`` and an unwrapped phase.  ``mode="signed"``
    takes ``r = Re psi`` with ``phi = 0`` and requires an (almost) real state,
    so real eigenfunctions keep a smooth signed amplitude across their nodes.
    ``mode="auto"`` picks ``signed`` for real input and ``abs`` otherwise.
    """
    s = psi.samples
    mag = np.abs(s)
    peak = mag.max()
    if peak == 0:
        raise EmptyWavefunction("all samples are zero")
    mask = mag < node_threshold * peak
    is_real = np.max(np.abs(s.imag)) <= 1e-10 * peak
    if mode == "auto":
        mode = "signed" if is_real else "abs"
    if mode == "signed":
        if not is_real:
            raise ValueError("signed mode needs a real-valued wavefunction")
        return PolarFields(s.real.copy(), np.zeros(s.size), mask)
    if mode != "abs":
        raise ValueError(f"unknown polar mode {mode!r}")

    angle = np.angle(s)
    phi = angle.copy()
    # unwrap each unmasked run independently; the phase is meaningless across nodes
    for lo, hi in true_runs(~mask):
        phi[lo:hi] = np.unwrap(angle[lo:hi])
    return PolarFields(mag, psi.hbar * phi, mask)


def true_runs(valid: np.ndarray) -> list[tuple[int, int]]:
    """Half-open index ranges of the maximal True runs in ``valid``."""
    v = np.concatenate([[False], np.asarray(valid, bool), [False]])
    edges = np.flatnonzero(np.diff(v.astype(np.int8)))
    return list(zip(edges[0::2].tolist(), edges[1::2].tolist()))


def run_gradient(f: np.ndarray, dx: float, valid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Second-order first derivative computed separately on each valid run.

    Returns ``(df, ok)``; runs shorter than 3 points are not differentiated and
    come back with ``ok`` False and ``df`` zero.
    """
    df = np.zeros_like(f, dtype=float)
    ok = np.zeros(f.shape, dtype=bool)
    for lo, hi in true_runs(valid):
        if hi - lo >= 3:
            df[lo:hi] = np.gradient(f[lo:hi], dx, edge_order=2)
            ok[lo:hi] = True
    return df, ok


def second_difference(f: np.ndarray, dx: float) -> np.ndarray:
    """Centred second difference with second-order one-sided ends."""
    if f.size < 4:
        raise GridError("second difference needs at least 4 points")
    out = np.empty_like(f)
    out[1:-1] = f[2:] - 2 * f[1:-1] + f[:-2]
    out[0] = 2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]
    out[-1] = 2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]
    return out / (dx * dx)
