"""Discrete Wigner transform of a sampled 1D wavefunction."""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import GridError
from .grid import GridWavefunction, PhaseSpaceField

__all__ = ["wigner_transform", "refine_twofold", "thread_count"]

ROW_CHUNK = 128
REALITY_TOL = 1e-10


def thread_count() -> int:
    """Worker cap from FERMI_SCOPE_THREADS, default 1."""
    raw = os.environ.get("FERMI_SCOPE_THREADS")
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"FERMI_SCOPE_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"FERMI_SCOPE_THREADS must be a positive integer, got {raw!r}")
    return value


def refine_twofold(samples: np.ndarray) -> np.ndarray:
    """Band-limited interpolation onto a grid of half the spacing.

    Returns ``2K`` values; entry ``2k`` reproduces ``samples[k]`` and the last
    entry is the periodic midpoint between the two ends.
    """
    k = samples.size
    if k % 2:
        raise GridError("band-limited refinement needs an even sample count")
    spectrum = np.fft.fft(samples)
    half = k // 2
    padded = np.zeros(2 * k, dtype=complex)
    padded[:half] = spectrum[:half]
    padded[2 * k - half + 1:] = spectrum[half + 1:]
    # split the Nyquist bin so the refined signal stays consistent with the samples
    padded[half] = 0.5 * spectrum[half]
    padded[2 * k - half] = 0.5 * spectrum[half]
    return 2.0 * np.fft.ifft(padded)


def wigner_transform(psi: GridWavefunction, workers: int | None = None) -> PhaseSpaceField:
    """W(x_k, p_m) = (1/2 pi hbar) dy sum_j exp(-i p_m y_j / hbar) psi(x_k + y_j/2) psi*(x_k - y_j/2).

    The lag grid has the x spacing and K points (extent equal to the x
    domain); the half shifts land on a twofold band-limited refinement.  The
    momentum axis is ``p_m = 2 pi hbar m / (K dy)`` for ``m = -K/2 .. K/2-1``.
    Samples beyond the grid are taken as zero.
    """
    size = psi.size
    if size % 2:
        raise GridError(f"Wigner transform needs an even number of samples, got {size}")
    hbar, dy = psi.hbar, psi.dx
    fine = refine_twofold(psi.samples)
    buf = np.zeros(4 * size, dtype=complex)
    # the final refined entry wraps around the domain; leave it out
    buf[size:3 * size - 1] = fine[:-1]

    lags = np.arange(-size // 2, size // 2)
    lags_fft = np.fft.ifftshift(lags)
    nyquist_col = int(np.flatnonzero(lags_fft == -size // 2)[0])
    scale = dy / (2 * np.pi * hbar)

    def block(rows: np.ndarray) -> tuple[np.ndarray, float]:
        centre = size + 2 * rows[:, None]
        prod = buf[centre + lags_fft[None, :]] * np.conj(buf[centre - lags_fft[None, :]])
        # the unpaired -K/2 lag gets the average of itself and its missing +K/2 partner
        prod[:, nyquist_col] = prod[:, nyquist_col].real
        out = np.fft.fftshift(np.fft.fft(prod, axis=1), axes=1) * scale
        return out.real, float(np.max(np.abs(out.imag)))

    chunks = [np.arange(s, min(s + ROW_CHUNK, size)) for s in range(0, size, ROW_CHUNK)]
    n_workers = thread_count() if workers is None else workers
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(block, chunks))
    else:
        results = [block(c) for c in chunks]
    values = np.concatenate([r[0] for r in results], axis=0)
    imag = max(r[1] for r in results)
    peak = np.max(np.abs(values))
    if imag > REALITY_TOL * peak:
        warnings.warn(f"Wigner transform has imaginary part {imag:.2e} "
                      f"(peak {peak:.2e})", RuntimeWarning, stacklevel=2)

    p_axis = 2 * np.pi * hbar * lags / (size * dy)
    return PhaseSpaceField(psi.x, p_axis, values, np.zeros(values.shape, bool))
