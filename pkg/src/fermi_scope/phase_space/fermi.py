"""Numerical Fermi function of a sampled wavefunction.

For psi = R exp(i Phi / hbar) the Fermi function is

    g_F(x, p) = (p - Phi'(x))^2 + hbar^2 R''(x) / R(x)

and the operator obtained by replacing p with -i hbar d/dx annihilates psi.
"""

from __future__ import annotations

import numpy as np

from ..errors import GridError
from .grid import (
    NODE_THRESHOLD,
    GridWavefunction,
    PhaseSpaceField,
    PolarFields,
    polar_decompose,
    run_gradient,
    second_difference,
)

__all__ = [
    "quantum_potential_term",
    "fermi_field",
    "fermi_field_on_axis",
    "fermi_operator_residual",
    "trivial_residual",
]

MIN_P_COUNT = 16


def quantum_potential_term(fields: PolarFields, dx: float, hbar: float,
                           node_threshold: float = NODE_THRESHOLD) -> np.ndarray:
    """hbar^2 R'' / R on the grid, NaN where R is too small to divide by.

    This is -2m times the Bohm quantum potential for unit mass.
    """
    r = np.asarray(fields.r, dtype=float)
    small = np.abs(r) < node_threshold * np.max(np.abs(r))
    bad = small | np.asarray(fields.node_mask, bool)
    d2 = second_difference(r, dx)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = hbar * hbar * d2 / r
    q[bad] = np.nan
    return q


def _phase_slope(fields: PolarFields, dx: float) -> tuple[np.ndarray, np.ndarray]:
    valid = ~np.asarray(fields.node_mask, bool)
    return run_gradient(np.asarray(fields.phi, dtype=float), dx, valid)


def fermi_field_on_axis(psi: GridWavefunction, p_axis, mode: str = "abs",
                        node_threshold: float = NODE_THRESHOLD) -> PhaseSpaceField:
    p_axis = np.asarray(p_axis, dtype=float)
    fields = polar_decompose(psi, mode, node_threshold)
    q = quantum_potential_term(fields, psi.dx, psi.hbar, node_threshold)
    slope, ok = _phase_slope(fields, psi.dx)
    bad_x = np.isnan(q) | ~ok
    values = (p_axis[None, :] - slope[:, None]) ** 2 + q[:, None]
    masked = np.broadcast_to(bad_x[:, None], values.shape).copy()
    values[masked] = np.nan
    return PhaseSpaceField(psi.x, p_axis, values, masked)


def fermi_field(psi: GridWavefunction, p_min: float, p_max: float, p_count: int,
                mode: str = "abs", node_threshold: float = NODE_THRESHOLD) -> PhaseSpaceField:
    """g_F sampled on the wavefunction's x grid times ``p_count`` momenta in [p_min, p_max].

    Masked cells (rows over nodes of psi) hold NaN.
    """
    if p_count < MIN_P_COUNT:
        raise GridError(f"p_count must be >= {MIN_P_COUNT}, got {p_count}")
    if not p_max > p_min:
        raise GridError("p_max must exceed p_min")
    return fermi_field_on_axis(psi, np.linspace(p_min, p_max, p_count), mode, node_threshold)


def _stencil_valid(bad: np.ndarray, reach: int) -> np.ndarray:
    """Points whose whole stencil of half-width ``reach`` avoids ``bad`` and the ends."""
    padded = np.concatenate([np.ones(reach, bool), bad, np.ones(reach, bool)])
    hit = np.zeros(bad.shape, bool)
    for off in range(2 * reach + 1):
        hit |= padded[off:off + bad.size]
    return ~hit


def _residual_parts(psi: GridWavefunction, mode: str, node_threshold: float):
    fields = polar_decompose(psi, mode, node_threshold)
    hbar, dx = psi.hbar, psi.dx
    q = quantum_potential_term(fields, dx, hbar, node_threshold)
    slope, ok = _phase_slope(fields, dx)
    bad = np.isnan(q) | ~ok
    valid = _stencil_valid(bad, 2)
    return fields, np.where(bad, 0.0, q), np.where(bad, 0.0, slope), valid


def fermi_operator_residual(psi: GridWavefunction, mode: str = "abs",
                            node_threshold: float = NODE_THRESHOLD) -> float:
    """Relative residual |g_F(op) psi| / |psi| of the discretized Fermi operator.

    The squared gauge-covariant momentum is applied as two successive central
    first differences, and the R''/R term uses the compact second difference,
    so the residual vanishes at rate dx^2.  Points within two cells of a node
    or of the grid ends are excluded.
    """
    _, q, slope, valid = _residual_parts(psi, mode, node_threshold)
    if not valid.any():
        raise GridError("no grid points are far enough from nodes and edges")
    hbar, dx = psi.hbar, psi.dx
    s = psi.samples

    def momentum(f):
        return -1j * hbar * np.gradient(f, dx, edge_order=2) - slope * f

    out = momentum(momentum(s)) + q * s
    return float(np.linalg.norm(out[valid]) / np.linalg.norm(s[valid]))


def trivial_residual(psi: GridWavefunction, mode: str = "abs",
                     node_threshold: float = NODE_THRESHOLD) -> float:
    """Relative residual of (-hbar^2 d^2/dx^2 + hbar^2 R''/R) R on the same point set.

    Both terms share one stencil, so this is zero up to rounding.
    """
    fields, q, _, valid = _residual_parts(psi, mode, node_threshold)
    if not valid.any():
        raise GridError("no grid points are far enough from nodes and edges")
    r = fields.r
    out = -psi.hbar**2 * second_difference(r, psi.dx) + q * r
    return float(np.linalg.norm(out[valid]) / np.linalg.norm(r[valid]))
