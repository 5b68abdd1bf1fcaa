"""Symplectic capacity of phase-space ellipsoids and quantum blobs."""

from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import DimensionError
from .gaussian import SqueezedState, fermi_factorization, fermi_quadric, fermi_value
from .symplectic import as_spd, as_square, symplectic_eigenvalues, symplectic_inverse

__all__ = [
    "PhaseSpaceEllipsoid",
    "QuantumBlob",
    "CapacityReport",
    "ellipsoid_capacity",
    "fermi_ellipsoid",
    "fermi_normal_form_ellipsoid",
    "fermi_capacity",
    "capacity_bounds_report",
    "quantum_blob_inside",
    "sphere_directions",
    "blob_boundary_points",
    "blob_containment_margin",
]

BOUND_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PhaseSpaceEllipsoid:
    """The set ``shape (z - center).(z - center) <= bound``."""

    center: np.ndarray
    shape: np.ndarray
    bound: float

    def __post_init__(self):
        shape = as_spd(self.shape)
        if shape.shape[0] % 2:
            raise DimensionError("ellipsoid must live in an even-dimensional space")
        center = np.asarray(self.center, dtype=float).reshape(-1)
        if center.shape[0] != shape.shape[0]:
            raise DimensionError("center and shape dimensions differ")
        if not self.bound > 0:
            raise ValueError(f"bound must be positive, got {self.bound}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "bound", float(self.bound))

    @property
    def dim(self) -> int:
        return self.shape.shape[0]

    def quadratic(self, z) -> np.ndarray:
        d = np.asarray(z, dtype=float) - self.center
        return np.einsum("...i,ij,...j->...", d, self.shape, d)

    def contains(self, z, tol: float = 0.0):
        return self.quadratic(z) <= self.bound + tol


@dataclass(frozen=True, eq=False)
class QuantumBlob:
    """Image ``symplectic @ B(0, radius) + center`` of a phase-space ball."""

    symplectic: np.ndarray
    center: np.ndarray
    radius: float

    def ellipsoid(self) -> PhaseSpaceEllipsoid:
        # w = T b + c with |b| <= r  <=>  |T^-1 (w - c)|^2 <= r^2
        inv = symplectic_inverse(self.symplectic)
        return PhaseSpaceEllipsoid(self.center, inv.T @ inv, self.radius**2)

    def capacity(self) -> float:
        return ellipsoid_capacity(self.ellipsoid())


@dataclass(frozen=True)
class CapacityReport:
    capacity: float
    lower: float
    upper: float
    within_bounds: bool


def ellipsoid_capacity(e: PhaseSpaceEllipsoid) -> float:
    """pi * bound / (largest symplectic eigenvalue of the shape matrix)."""
    return float(np.pi * e.bound / symplectic_eigenvalues(e.shape)[0])


def fermi_ellipsoid(state: SqueezedState) -> PhaseSpaceEllipsoid:
    """The region g_F <= 0 of a squeezed state."""
    q = fermi_quadric(state)
    return PhaseSpaceEllipsoid(np.zeros(2 * state.n), q.mF, q.constant)


def fermi_normal_form_ellipsoid(state: SqueezedState) -> PhaseSpaceEllipsoid:
    """The Fermi ellipsoid after the symplectic change of variables z' = S z.

    In those coordinates it reads X x'.x' + X p'.p' <= hbar Tr X.
    """
    fac = fermi_factorization(state)
    return PhaseSpaceEllipsoid(np.zeros(2 * state.n), fac.d, state.hbar * state.trace_x)


def fermi_capacity(state: SqueezedState) -> float:
    """pi hbar Tr X / lambda_max(X)."""
    return float(np.pi * state.hbar * state.trace_x / state.x_eigenvalues[-1])


def capacity_bounds_report(state: SqueezedState) -> CapacityReport:
    c = fermi_capacity(state)
    lower = np.pi * state.hbar
    upper = state.n * np.pi * state.hbar
    ok = lower - BOUND_TOL <= c <= upper + BOUND_TOL
    return CapacityReport(c, lower, upper, bool(ok))


def quantum_blob_inside(state: SqueezedState) -> QuantumBlob:
    """A quantum blob contained in the Fermi ellipsoid.

    The ball of radius sqrt(hbar) in the coordinates z' = S z maps into the
    ellipsoid because X b.b <= lambda_max(X) |b|^2 <= hbar Tr X.
    """
    s = fermi_factorization(state).s
    return QuantumBlob(symplectic_inverse(s), np.zeros(2 * state.n), float(np.sqrt(state.hbar)))


def sphere_directions(count: int, dim: int) -> np.ndarray:
    """Deterministic, well spread unit vectors on the sphere S^(dim-1).

    Uses evenly spaced angles for dim = 2, and otherwise the generalized
    golden-ratio (R_d) lattice pushed through the Gaussian inverse CDF.
    """
    if count < 1 or dim < 2:
        raise ValueError("need count >= 1 and dim >= 2")
    if dim == 2:
        t = 2 * np.pi * (np.arange(count) + 0.5) / count
        return np.column_stack([np.cos(t), np.sin(t)])
    # phi_d is the positive root of x^(d+1) = x + 1
    phi = 2.0
    for _ in range(64):
        phi = (1 + phi) ** (1.0 / (dim + 1))
    alpha = (1.0 / phi) ** np.arange(1, dim + 1)
    u = (0.5 + np.outer(np.arange(1, count + 1), alpha)) % 1.0
    u = np.clip(u, 1e-12, 1 - 1e-12)
    inv = np.vectorize(NormalDist().inv_cdf)
    g = inv(u)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def blob_boundary_points(blob: QuantumBlob, count: int = 1000) -> np.ndarray:
    dim = as_square(blob.symplectic).shape[0]
    b = blob.radius * sphere_directions(count, dim)
    return b @ blob.symplectic.T + blob.center


def blob_containment_margin(state: SqueezedState, blob: QuantumBlob,
                            count: int = 1000) -> float:
    """Largest g_F over sampled blob boundary points; <= 0 means contained."""
    return float(np.max(fermi_value(state, blob_boundary_points(blob, count))))
