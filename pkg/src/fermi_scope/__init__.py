"""Fermi phase-space functions of quantum states.

Exact tools for squeezed coherent states and oscillator eigenstates live in
:mod:`gaussian`, :mod:`capacity` and :mod:`oscillator`; sampled wavefunctions
are handled by :mod:`phase_space`.
"""

from .capacity import (
    CapacityReport,
    PhaseSpaceEllipsoid,
    QuantumBlob,
    capacity_bounds_report,
    ellipsoid_capacity,
    fermi_capacity,
    fermi_ellipsoid,
    quantum_blob_inside,
)
from .errors import (
    DimensionError,
    EmptyWavefunction,
    FermiScopeError,
    GridError,
    NotPositiveDefinite,
    NumericalPairingError,
)
from .gaussian import (
    SqueezedState,
    evaluate_state,
    fermi_factorization,
    fermi_quadric,
    fermi_value,
    wigner_fermi_identity_residual,
    wigner_matrix,
    wigner_value,
)
from .oscillator import (
    OscillatorEigenstate,
    eigenfunction_value,
    fermi_ball,
    hermite_polynomial,
    oscillator_fermi_value,
)
from .symplectic import (
    is_symplectic,
    spd_sqrt,
    standard_symplectic,
    symplectic_eigenvalues,
)

__version__ = "0.1.0"
