"""CSV, JSON and SVG emission with atomic file replacement."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import GridError
from .phase_space.grid import GridWavefunction, PhaseSpaceField

__all__ = [
    "fmt",
    "atomic_write",
    "csv_text",
    "field_csv",
    "contours_csv",
    "summary_json",
    "read_wavefunction_csv",
    "comparison_svg",
]

SVG_SIZE = 800
SPACING_TOL = 1e-9


def fmt(value) -> str:
    """17 significant digits; NaN and infinities spelled ``nan``/``inf``/``-inf``."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return "%.17g" % value


def atomic_write(path: Path, text: str) -> None:
    """Write UTF-8 text with LF endings via a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600 files
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: list[str], columns: list[np.ndarray]) -> str:
    cols = [np.asarray(c).reshape(-1) for c in columns]
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def field_csv(field: PhaseSpaceField, name: str, with_mask: bool) -> str:
    x, p = np.meshgrid(field.x_axis, field.p_axis, indexing="ij")
    header = ["x", "p", name]
    cols = [x, p, field.values]
    if with_mask:
        header.append("masked")
        cols.append(np.where(field.masked, "1", "0").astype(object))
    return csv_text(header, cols)


def contours_csv(lines: list[np.ndarray], ids: list[int] | None = None) -> str:
    ids = list(range(len(lines))) if ids is None else ids
    rows = ["contourId,vertexIndex,x,p"]
    for cid, line in zip(ids, lines):
        for k, (x, p) in enumerate(line):
            rows.append(f"{cid},{k},{fmt(x)},{fmt(p)}")
    return "\n".join(rows) + "\n"


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    return obj


def summary_json(summary: dict) -> str:
    """Single-line JSON; non-finite numbers become null."""
    return json.dumps(_json_safe(summary), separators=(", ", ": "), allow_nan=False)


def read_wavefunction_csv(path, hbar: float) -> GridWavefunction:
    """Read ``x,re,im`` rows on a uniform grid."""
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=float, encoding="utf-8")
    names = data.dtype.names or ()
    if tuple(names) != ("x", "re", "im"):
        raise GridError(f"{path}: header must be x,re,im, got {','.join(names)}")
    x = np.atleast_1d(data["x"])
    if x.size < 2:
        raise GridError(f"{path}: too few rows")
    steps = np.diff(x)
    dx = (x[-1] - x[0]) / (x.size - 1)
    if dx <= 0 or np.max(np.abs(steps - dx)) > SPACING_TOL * abs(dx):
        raise GridError(f"{path}: x values are not uniformly spaced and increasing")
    return GridWavefunction(x[0], dx, np.atleast_1d(data["re"]) + 1j * np.atleast_1d(data["im"]), hbar)


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * step:
        out.append(round(t / step) * step + 0.0)
        t += step
    return out


def comparison_svg(fermi_lines: list[np.ndarray], wigner_levels: list[tuple[float, list[np.ndarray]]]) -> str:
    """800x800 plot of the Fermi contour (solid) and Wigner contours (dashed)."""
    pts = [ln for ln in fermi_lines] + [ln for _, lines in wigner_levels for ln in lines]
    if pts:
        allp = np.concatenate(pts)
        lo = allp.min(axis=0)
        hi = allp.max(axis=0)
    else:
        lo, hi = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
    half = 0.55 * max(float(np.max(hi - lo)), 1e-9)
    mid = 0.5 * (lo + hi)
    xlo, xhi = mid[0] - half, mid[0] + half
    plo, phi = mid[1] - half, mid[1] + half
    margin, size = 70, SVG_SIZE
    span = size - 2 * margin

    def sx(x):
        return margin + (x - xlo) / (xhi - xlo) * span

    def sp(p):
        return size - margin - (p - plo) / (phi - plo) * span

    def path(line):
        return " ".join(f"{'M' if k == 0 else 'L'}{sx(x):.3f},{sp(p):.3f}" for k, (x, p) in enumerate(line))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(xlo, xhi):
        u = sx(t)
        out.append(f'<line x1="{u:.3f}" y1="{size - margin}" x2="{u:.3f}" y2="{size - margin + 6}" stroke="black"/>')
        out.append(f'<text x="{u:.3f}" y="{size - margin + 20}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(plo, phi):
        u = sp(t)
        out.append(f'<line x1="{margin - 6}" y1="{u:.3f}" x2="{margin}" y2="{u:.3f}" stroke="black"/>')
        out.append(f'<text x="{margin - 10}" y="{u + 4:.3f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{size / 2}" y="{size - 20}" text-anchor="middle">x</text>')
    out.append(f'<text x="20" y="{size / 2}" text-anchor="middle">p</text>')

    colours = ["#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"]
    for line in fermi_lines:
        out.append(f'<path d="{path(line)}" fill="none" stroke="#d62728" stroke-width="2"/>')
    for k, (frac, lines) in enumerate(wigner_levels):
        c = colours[k % len(colours)]
        for line in lines:
            out.append(f'<path d="{path(line)}" fill="none" stroke="{c}" '
                       f'stroke-width="1.5" stroke-dasharray="6,4"/>')

    ly = margin + 18
    out.append(f'<line x1="{margin + 12}" y1="{ly}" x2="{margin + 42}" y2="{ly}" stroke="#d62728" stroke-width="2"/>')
    out.append(f'<text x="{margin + 50}" y="{ly + 4}">Fermi g_F = 0</text>')
    for k, (frac, _) in enumerate(wigner_levels):
        ly += 18
        c = colours[k % len(colours)]
        out.append(f'<line x1="{margin + 12}" y1="{ly}" x2="{margin + 42}" y2="{ly}" stroke="{c}" '
                   f'stroke-width="1.5" stroke-dasharray="6,4"/>')
        out.append(f'<text x="{margin + 50}" y="{ly + 4}">Wigner {frac:.6g} of max</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
