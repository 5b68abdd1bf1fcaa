"""Numerical phase-space analysis of sampled one-dimensional wavefunctions."""

from .compare import ComparisonReport, LevelComparison, compare_fermi_wigner
from .contour import polyline_area, zero_contour
from .fermi import (
    fermi_field,
    fermi_field_on_axis,
    fermi_operator_residual,
    quantum_potential_term,
    trivial_residual,
)
from .grid import GridWavefunction, PhaseSpaceField, PolarFields, polar_decompose
from .wigner import wigner_transform

__all__ = [
    "ComparisonReport",
    "GridWavefunction",
    "LevelComparison",
    "PhaseSpaceField",
    "PolarFields",
    "compare_fermi_wigner",
    "fermi_field",
    "fermi_field_on_axis",
    "fermi_operator_residual",
    "polar_decompose",
    "polyline_area",
    "quantum_potential_term",
    "trivial_residual",
    "wigner_transform",
    "zero_contour",
]
