import warnings

import numpy as np
import pytest

from fermi_scope.errors import EmptyWavefunction, GridError
from fermi_scope.gaussian import SqueezedState, fermi_value
from fermi_scope.oscillator import OscillatorEigenstate, eigenfunction_value, oscillator_fermi_value
from fermi_scope.phase_space import (
    GridWavefunction,
    fermi_field,
    fermi_operator_residual,
    polar_decompose,
    quantum_potential_term,
    trivial_residual,
)
from fermi_scope.phase_space.grid import PolarFields

from conftest import sample_oscillator, sample_squeezed, state_1d


def test_grid_validation():
    with pytest.raises(GridError):
        GridWavefunction(0.0, 0.1, np.ones(8))
    with pytest.raises(GridError):
        GridWavefunction(0.0, -0.1, np.ones(32))
    with pytest.raises(EmptyWavefunction):
        GridWavefunction(0.0, 0.1, np.zeros(32))
    with pytest.warns(RuntimeWarning, match="decayed"):
        GridWavefunction(0.0, 0.1, np.ones(32))


def test_grid_axis():
    psi = sample_squeezed(SqueezedState.fiducial(), 64, 6.0)
    assert psi.x[0] == -6.0 and psi.x[-1] == pytest.approx(6.0)
    assert psi.x_max == pytest.approx(6.0)
    assert psi.norm_squared() == pytest.approx(1.0, rel=1e-10)


def test_polar_fiducial():
    f = polar_decompose(sample_squeezed(SqueezedState.fiducial(), 256, 6.0))
    x = np.linspace(-6, 6, 256)
    # only the far tails fall below the relative node threshold
    assert not f.node_mask[np.abs(x) < 5].any()
    np.testing.assert_array_equal(f.phi, 0.0)
    np.testing.assert_allclose(f.r, np.pi ** -0.25 * np.exp(-x**2 / 2), rtol=1e-13)


def test_polar_recovers_quadratic_phase():
    psi = sample_squeezed(state_1d(1.0, 1.0), 512, 6.0)
    f = polar_decompose(psi)
    ok = ~f.node_mask
    x = psi.x
    # phase is fixed only up to a multiple of 2 pi hbar
    offset = f.phi[ok] + 0.5 * x[ok] ** 2
    turns = offset[0] / (2 * np.pi * psi.hbar)
    assert turns == pytest.approx(round(turns), abs=1e-9)
    np.testing.assert_allclose(offset, offset[0], atol=1e-10)
    recon = f.r * np.exp(1j * f.phi / psi.hbar)
    np.testing.assert_allclose(recon[ok], psi.samples[ok], rtol=1e-12, atol=0)


def test_polar_signed_hermite():
    st = OscillatorEigenstate((1,))
    # an odd point count puts a sample exactly on the node at the origin
    psi = sample_oscillator(st, 257, 8.0)
    f = polar_decompose(psi, mode="signed")
    x = psi.x
    np.testing.assert_allclose(f.r, eigenfunction_value(st, x[:, None]), rtol=0, atol=0)
    assert f.r[100] < 0 < f.r[150]
    assert f.node_mask[128]
    assert polar_decompose(psi, mode="auto").r[100] < 0
    with pytest.raises(ValueError):
        polar_decompose(sample_squeezed(state_1d(1.0, 1.0), 64, 6.0), mode="signed")
    with pytest.raises(ValueError):
        polar_decompose(psi, mode="polar")


def test_quantum_potential_fiducial():
    hbar = 0.5
    psi = sample_squeezed(SqueezedState.fiducial(hbar=hbar), 1024, 8 * np.sqrt(hbar))
    f = polar_decompose(psi)
    q = quantum_potential_term(f, psi.dx, hbar)
    ok = np.isfinite(q)
    x = psi.x
    dev = np.abs(q - (-hbar + x**2))[ok & (np.abs(x) < 3)]
    assert dev.max() < 20 * psi.dx**2


def test_quantum_potential_constant_amplitude():
    f = PolarFields(np.ones(64), np.zeros(64), np.zeros(64, bool))
    np.testing.assert_allclose(quantum_potential_term(f, 0.1, 1.0), 0.0, atol=1e-10)


def test_quantum_potential_squeezed_second_order():
    errs = []
    for count in (512, 1024, 2048):
        psi = sample_squeezed(state_1d(2.0, 0.0), count, 8.0)
        q = quantum_potential_term(polar_decompose(psi), psi.dx, 1.0)
        x = psi.x
        sel = np.abs(x) < 2
        errs.append(np.max(np.abs(q - (-2.0 + 4 * x**2))[sel]))
    assert errs[0] < 1e-2
    assert 3.2 < errs[0] / errs[1] < 4.8 and 3.2 < errs[1] / errs[2] < 4.8


def test_quantum_potential_masks_nodes():
    psi = sample_oscillator(OscillatorEigenstate((1,)), 257, 8.0)
    q = quantum_potential_term(polar_decompose(psi, mode="signed"), psi.dx, 1.0)
    assert np.isnan(q[128])
    assert np.isnan(q[0]) and np.isnan(q[-1])


def _closed_form_check(psi, field, exact, window):
    x, p = np.meshgrid(field.x_axis, field.p_axis, indexing="ij")
    sel = ~field.masked & (np.abs(x) < window)
    return np.max(np.abs(field.values - exact(np.stack([x, p], -1)))[sel])


def test_fermi_field_fiducial():
    psi = sample_squeezed(SqueezedState.fiducial(), 1024, 8.0)
    fld = fermi_field(psi, -5, 5, 64)
    assert fld.values.shape == (1024, 64)
    dev = _closed_form_check(psi, fld, lambda z: z[..., 0] ** 2 + z[..., 1] ** 2 - 1, 3.0)
    assert dev < 5 * psi.dx**2


def test_fermi_field_squeezed():
    s = state_1d(2.0, 1.0)
    devs = []
    for count in (512, 1024):
        psi = sample_squeezed(s, count, 8.0)
        fld = fermi_field(psi, -6, 6, 32)
        devs.append(_closed_form_check(psi, fld, lambda z: fermi_value(s, z), 2.0))
    assert devs[1] < 10 * (16 / 1023) ** 2
    assert 3.2 < devs[0] / devs[1] < 4.8


def test_fermi_field_hermite_away_from_nodes():
    st = OscillatorEigenstate((2,))
    psi = sample_oscillator(st, 1024, 8.0)
    fld = fermi_field(psi, -4, 4, 32, mode="signed")
    x = psi.x
    # stay clear of the nodes at +-1/sqrt(2)
    node_free = np.abs(np.abs(x) - 2 ** -0.5) > 0.1
    xx, pp = np.meshgrid(fld.x_axis, fld.p_axis, indexing="ij")
    sel = ~fld.masked & node_free[:, None] & (np.abs(xx) < 3)
    exact = oscillator_fermi_value(st, np.stack([xx, pp], -1))
    assert np.max(np.abs(fld.values - exact)[sel]) < 1e-2
    assert np.isfinite(fld.values[~fld.masked]).all()


def test_fermi_field_validation():
    psi = sample_squeezed(SqueezedState.fiducial(), 64, 6.0)
    with pytest.raises(GridError):
        fermi_field(psi, -1, 1, 8)
    with pytest.raises(GridError):
        fermi_field(psi, 1, -1, 32)


def test_mask_soundness_under_threshold_changes():
    psi = sample_oscillator(OscillatorEigenstate((3,)), 512, 8.0)
    coarse = fermi_field(psi, -3, 3, 16, mode="signed", node_threshold=1e-4)
    fine = fermi_field(psi, -3, 3, 16, mode="signed", node_threshold=1e-8)
    assert np.all(coarse.masked >= fine.masked)
    assert fine.masked.sum() < coarse.masked.sum()
    for f in (coarse, fine):
        assert np.isfinite(f.values[~f.masked]).all()


def test_residual_fiducial_small():
    psi = sample_squeezed(SqueezedState.fiducial(), 1024, 8.0)
    assert fermi_operator_residual(psi) <= 1e-3
    assert trivial_residual(psi) <= 1e-12


@pytest.mark.parametrize("x,y", [(2.0, 1.0), (0.5, -0.5)])
def test_residual_squeezed_second_order(x, y):
    s = state_1d(x, y)
    res = [fermi_operator_residual(sample_squeezed(s, k, 8.0)) for k in (1024, 2048, 4096)]
    assert res[0] <= 1e-3
    assert 3.2 < res[0] / res[1] < 4.8 and 3.2 < res[1] / res[2] < 4.8
    assert trivial_residual(sample_squeezed(s, 1024, 8.0)) <= 1e-12


def test_gauge_equivalence_real_positive():
    # both residuals go to zero; their gap shrinks at the dx^2 rate
    gaps = []
    for k in (1024, 2048):
        psi = sample_squeezed(state_1d(1.5, 0.0), k, 8.0)
        gaps.append(abs(fermi_operator_residual(psi) - trivial_residual(psi)))
    assert 3.2 < gaps[0] / gaps[1] < 4.8


def test_residual_hermite_signed_mode():
    psi = sample_oscillator(OscillatorEigenstate((2,)), 2048, 8.0)
    assert fermi_operator_residual(psi, mode="signed") < 1e-2
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        trivial_residual(psi, mode="signed")
