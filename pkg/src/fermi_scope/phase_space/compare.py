"""Comparison of the Fermi zero set with level sets of the Wigner function."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contour import polyline_area, zero_contour
from .fermi import fermi_field_on_axis, quantum_potential_term
from .grid import NODE_THRESHOLD, GridWavefunction, PhaseSpaceField, polar_decompose
from .wigner import wigner_transform

__all__ = [
    "LevelComparison",
    "ComparisonReport",
    "compare_fermi_wigner",
    "field_centroid",
    "radial_profile",
    "mean_radial_distance",
    "symmetric_area_difference",
    "sample_field",
]

ANGLE_SAMPLES = 720
LEVEL_SPREAD_TOL = 5e-2


@dataclass
class LevelComparison:
    fraction: float
    level: float
    contours: list[np.ndarray]
    area: float
    symmetric_area_difference: float
    mean_radial_distance: float


@dataclass
class ComparisonReport:
    fermi_field: PhaseSpaceField
    wigner_field: PhaseSpaceField
    centre: tuple[float, float]
    fermi_contours: list[np.ndarray]
    fermi_area: float
    levels: list[LevelComparison]
    # W on the Fermi zero set relative to max W: mean and relative spread
    contour_wigner_fraction: float
    contour_wigner_spread: float
    # exp(hbar R''/R) at the amplitude peak; exp(-Tr X) for a Gaussian, the
    # Wigner level whose contour is the Fermi surface mapped by (S^-1 D^-1/2 S)^-1
    quantum_potential_fraction: float
    # W nearly constant along the Fermi contour (Gaussians, oscillator eigenstates)
    fermi_is_wigner_level: bool
    coincidence: LevelComparison | None = None
    tolerance: float = 0.0


def field_centroid(w: PhaseSpaceField) -> tuple[float, float]:
    """Mean (x, p) under the Wigner field (that is, <x> and <p>)."""
    vals = np.where(w.masked, 0.0, w.values)
    total = vals.sum()
    x = float((vals.sum(axis=1) * w.x_axis).sum() / total)
    p = float((vals.sum(axis=0) * w.p_axis).sum() / total)
    return x, p


def radial_profile(lines: list[np.ndarray], centre) -> tuple[np.ndarray, np.ndarray]:
    """Angles (sorted) and radii of all polyline vertices about ``centre``."""
    pts = np.concatenate([ln for ln in lines], axis=0)
    d = pts - np.asarray(centre)
    theta = np.arctan2(d[:, 1], d[:, 0])
    r = np.hypot(d[:, 0], d[:, 1])
    order = np.argsort(theta, kind="stable")
    return theta[order], r[order]


def _radius_at(theta_ref, r_ref, theta):
    return np.interp(theta, theta_ref, r_ref, period=2 * np.pi)


def mean_radial_distance(lines: list[np.ndarray], reference: list[np.ndarray], centre) -> float:
    """Mean over vertices of ``lines`` of |r - r_ref(theta)|; assumes star-shaped sets."""
    t_ref, r_ref = radial_profile(reference, centre)
    t, r = radial_profile(lines, centre)
    return float(np.mean(np.abs(r - _radius_at(t_ref, r_ref, t))))


def symmetric_area_difference(a: list[np.ndarray], b: list[np.ndarray], centre,
                              samples: int = ANGLE_SAMPLES) -> float:
    """Area of the symmetric difference of two star-shaped regions.

    On a common angular grid, the polygon of pointwise larger radii minus
    the polygon of pointwise smaller radii (both by the shoelace formula).
    """
    theta = np.linspace(-np.pi, np.pi, samples, endpoint=False)
    ra = _radius_at(*radial_profile(a, centre), theta)
    rb = _radius_at(*radial_profile(b, centre), theta)
    ring = np.column_stack([np.cos(theta), np.sin(theta)])
    outer = ring * np.maximum(ra, rb)[:, None]
    inner = ring * np.minimum(ra, rb)[:, None]
    return polyline_area(outer) - polyline_area(inner)


def sample_field(f: PhaseSpaceField, pts: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of a uniform field at ``(x, p)`` rows."""
    fx = (pts[:, 0] - f.x_axis[0]) / f.dx
    fp = (pts[:, 1] - f.p_axis[0]) / f.dp
    i = np.clip(np.floor(fx).astype(int), 0, len(f.x_axis) - 2)
    j = np.clip(np.floor(fp).astype(int), 0, len(f.p_axis) - 2)
    tx, tp = fx - i, fp - j
    v = f.values
    return ((1 - tx) * (1 - tp) * v[i, j] + tx * (1 - tp) * v[i + 1, j]
            + tx * tp * v[i + 1, j + 1] + (1 - tx) * tp * v[i, j + 1])


def _total_area(lines: list[np.ndarray]) -> float:
    return float(sum(polyline_area(ln) for ln in lines))


def _level(w: PhaseSpaceField, fermi_lines, centre, fraction: float, peak: float) -> LevelComparison:
    lines = zero_contour(w, fraction * peak)
    if lines and fermi_lines:
        dist = mean_radial_distance(lines, fermi_lines, centre)
        sym = symmetric_area_difference(lines, fermi_lines, centre)
    else:
        dist = sym = float("nan")
    return LevelComparison(float(fraction), float(fraction * peak), lines,
                           _total_area(lines), sym, dist)


def compare_fermi_wigner(psi: GridWavefunction, fractions, mode: str = "abs",
                         node_threshold: float = NODE_THRESHOLD,
                         workers: int | None = None) -> ComparisonReport:
    """Contour the Fermi field at 0 and the Wigner field at ``fraction * max W``.

    Both fields share the Wigner transform's (x, p) grid.  W is sampled along
    the Fermi zero set; when it is nearly constant there (as for Gaussian
    states and oscillator eigenstates) the report also extracts the Wigner contour at that measured
    fraction, which then coincides with the Fermi contour.
    """
    fractions = [float(f) for f in fractions]
    if any(not 0 < f < 1 for f in fractions):
        raise ValueError("level fractions must lie strictly between 0 and 1")
    w = wigner_transform(psi, workers=workers)
    g = fermi_field_on_axis(psi, w.p_axis, mode, node_threshold)
    peak = float(np.max(w.values))
    centre = field_centroid(w)

    fermi_lines = zero_contour(g, 0.0)
    if fermi_lines:
        on_contour = sample_field(w, np.concatenate(fermi_lines)) / peak
        frac = float(np.mean(on_contour))
        spread = float(np.std(on_contour) / abs(frac)) if frac else float("inf")
    else:
        frac, spread = float("nan"), float("nan")

    fields = polar_decompose(psi, mode, node_threshold)
    q = quantum_potential_term(fields, psi.dx, psi.hbar, node_threshold)
    k_peak = int(np.argmax(np.abs(psi.samples)))
    q_frac = float(np.exp(q[k_peak] / psi.hbar)) if np.isfinite(q[k_peak]) else float("nan")

    levels = [_level(w, fermi_lines, centre, f, peak) for f in fractions]
    on_level = bool(np.isfinite(spread) and spread <= LEVEL_SPREAD_TOL)
    coincidence = None
    if on_level and 0 < frac < 1:
        coincidence = _level(w, fermi_lines, centre, frac, peak)
    return ComparisonReport(
        fermi_field=g,
        wigner_field=w,
        centre=centre,
        fermi_contours=fermi_lines,
        fermi_area=_total_area(fermi_lines),
        levels=levels,
        contour_wigner_fraction=frac,
        contour_wigner_spread=spread,
        quantum_potential_fraction=q_frac,
        fermi_is_wigner_level=on_level,
        coincidence=coincidence,
        tolerance=2 * w.spacing,
    )
