"""Acceptance criteria, each at its stated tolerance.

Every test records a single PASS/FAIL line (see the ``acceptance`` fixture);
the lines are repeated together at the end of the pytest run.
"""

import json
import math
import time

import numpy as np
import pytest

from fermi_scope import cli
from fermi_scope.capacity import (
    blob_containment_margin,
    capacity_bounds_report,
    ellipsoid_capacity,
    fermi_capacity,
    fermi_ellipsoid,
    quantum_blob_inside,
)
from fermi_scope.gaussian import (
    SqueezedState,
    fermi_factorization,
    fermi_quadric,
    fermi_value,
    random_squeezed_state,
    wigner_fermi_identity_residual,
    wigner_transform_point,
    wigner_value,
)
from fermi_scope.oscillator import OscillatorEigenstate, fermi_ball
from fermi_scope.phase_space import (
    compare_fermi_wigner,
    fermi_field,
    fermi_operator_residual,
    wigner_transform,
    zero_contour,
)
from fermi_scope.symplectic import is_symplectic, max_abs, standard_symplectic, symplectic_eigenvalues

from conftest import random_spd, sample_oscillator, sample_squeezed, state_1d

HBAR = 1.0
POPULATION = 1000
SEED = 20260101


@pytest.fixture(scope="module")
def population():
    rng = np.random.default_rng(SEED)
    dims = rng.integers(1, 7, size=POPULATION)
    return [random_squeezed_state(rng, int(n), HBAR) for n in dims]


def ball_samples(rng, count, dim, radius):
    g = rng.normal(size=(count, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * radius * rng.uniform(0, 1, size=(count, 1)) ** (1.0 / dim)


def test_criterion_01_factorization(population, acceptance):
    start = time.perf_counter()
    worst, all_symplectic = 0.0, True
    for st in population:
        fac = fermi_factorization(st)
        mf = fermi_quadric(st).mF
        worst = max(worst, max_abs(fac.s.T @ fac.d @ fac.s - mf) / max_abs(mf))
        all_symplectic &= is_symplectic(fac.s, 1e-10)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and all_symplectic and elapsed < 5.0
    acceptance(1, "factorization S^T D S = M_F", ok,
               f"max rel err {worst:.2e} (<= 1e-10), symplectic {all_symplectic}, {elapsed:.2f}s (< 5s)")
    assert ok


def test_criterion_02_wigner_fermi_identity(population, acceptance):
    rng = np.random.default_rng(SEED + 2)
    start = time.perf_counter()
    worst = pointwise = 0.0
    for st in population:
        z = ball_samples(rng, 100, 2 * st.n, 4 * math.sqrt(HBAR))
        worst = max(worst, wigner_fermi_identity_residual(st, z))
        # also relative to W itself, wherever W is a normal float
        w = wigner_value(st, z)
        form = ((math.pi * HBAR) ** -st.n * math.exp(-st.trace_x)
                * np.exp(-fermi_value(st, z @ wigner_transform_point(st).T) / HBAR))
        live = w > 1e-300
        if live.any():
            pointwise = max(pointwise, float(np.max(np.abs(w[live] - form[live]) / w[live])))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and pointwise <= 1e-10 and elapsed < 10.0
    acceptance(2, "Wigner-Fermi identity", ok,
               f"max residual {worst:.2e} of peak, {pointwise:.2e} pointwise (<= 1e-10), "
               f"{elapsed:.2f}s (< 10s)")
    assert ok


def test_criterion_03_capacity(population, acceptance):
    worst, in_bounds = 0.0, True
    for st in population:
        c = fermi_capacity(st)
        worst = max(worst, abs(c - ellipsoid_capacity(fermi_ellipsoid(st))) / c)
        in_bounds &= math.pi * HBAR - 1e-9 <= c <= st.n * math.pi * HBAR + 1e-9
        in_bounds &= capacity_bounds_report(st).within_bounds
    upper_eq = max(abs(fermi_capacity(SqueezedState.fiducial(n, HBAR)) - n * math.pi * HBAR)
                   for n in range(1, 7))
    rng = np.random.default_rng(SEED + 3)
    one_dim = [random_squeezed_state(rng, 1, HBAR) for _ in range(50)]
    both_eq = max(abs(fermi_capacity(st) - math.pi * HBAR) for st in one_dim)
    ok = worst <= 1e-9 and in_bounds and upper_eq <= 1e-9 and both_eq <= 1e-9
    acceptance(3, "capacity formula and bounds", ok,
               f"formula rel err {worst:.2e}, bounds hold {in_bounds}, "
               f"X=I err {upper_eq:.1e}, n=1 err {both_eq:.1e} (all <= 1e-9)")
    assert ok


def test_criterion_04_blob_containment(population, acceptance):
    worst_g, worst_cap = -math.inf, 0.0
    for st in population:
        blob = quantum_blob_inside(st)
        worst_g = max(worst_g, blob_containment_margin(st, blob, 1000))
        worst_cap = max(worst_cap, abs(blob.capacity() - math.pi * HBAR))
    ok = worst_g <= 1e-10 and worst_cap <= 1e-9
    acceptance(4, "quantum blob containment", ok,
               f"max g_F on blob boundary {worst_g:.3e} (<= 1e-10), capacity err {worst_cap:.1e} (<= 1e-9)")
    assert ok


def test_criterion_05_oscillator_geometry(acceptance):
    area_err = max(abs(ellipsoid_capacity(fermi_ball(OscillatorEigenstate((n,), HBAR)))
                       - (2 * n + 1) * math.pi * HBAR) for n in range(11))
    half = 10 * math.sqrt(HBAR)
    radial = []
    tol = None
    for n in range(4):
        st = OscillatorEigenstate((n,), HBAR)
        psi = sample_oscillator(st, 2048, half)
        fld = fermi_field(psi, -half, half, 2048, mode="signed")
        tol = 2 * fld.spacing
        pts = np.concatenate(zero_contour(fld, 0.0))
        r = np.hypot(pts[:, 0], pts[:, 1])
        radial.append(float(np.mean(np.abs(r - math.sqrt(st.energy)))))
    ok = area_err <= 1e-12 and max(radial) <= tol
    acceptance(5, "oscillator Fermi geometry", ok,
               f"ball area err {area_err:.1e}, contour radial err N=0..3 "
               f"{', '.join(f'{e:.1e}' for e in radial)} (<= {tol:.4f})")
    assert ok


RESIDUAL_STATES = {"fiducial": (1.0, 0.0), "X=2,Y=1": (2.0, 1.0), "X=0.5,Y=-0.5": (0.5, -0.5)}


def test_criterion_06_operator_residual(acceptance):
    half = 8 * math.sqrt(HBAR)
    details, ok = [], True
    for name, (x, y) in RESIDUAL_STATES.items():
        st = state_1d(x, y, HBAR)
        res = [fermi_operator_residual(sample_squeezed(st, k, half)) for k in (1024, 2048, 4096, 8192)]
        ratios = [a / b for a, b in zip(res, res[1:])]
        ok &= res[0] <= 1e-3 and all(3.2 <= q <= 4.8 for q in ratios)
        details.append(f"{name} {res[0]:.2e} ratios {'/'.join(f'{q:.2f}' for q in ratios)}")
    acceptance(6, "operator residual O(dx^2)", ok,
               "; ".join(details) + " (<= 1e-3, ratios in [3.2, 4.8])")
    assert ok


WIGNER_STATES = {"fiducial": (1.0, 0.0), "X=2,Y=0": (2.0, 0.0), "X=2,Y=1": (2.0, 1.0)}


def test_criterion_07_discrete_wigner(acceptance):
    start = time.perf_counter()
    half = 8 * math.sqrt(HBAR)
    limit = 1e-6 / (math.pi * HBAR)
    devs = {}
    for name, (x, y) in WIGNER_STATES.items():
        st = state_1d(x, y, HBAR)
        w = wigner_transform(sample_squeezed(st, 1024, half))
        rows = np.abs(w.x_axis) <= half / 2
        xx, pp = np.meshgrid(w.x_axis[rows], w.p_axis, indexing="ij")
        exact = wigner_value(st, np.stack([xx, pp], axis=-1))
        devs[name] = float(np.max(np.abs(w.values[rows] - exact)))
    elapsed = time.perf_counter() - start
    ok = max(devs.values()) <= limit and elapsed < 30.0
    acceptance(7, "discrete Wigner vs closed form", ok,
               ", ".join(f"{k} {v:.1e}" for k, v in devs.items())
               + f" (<= {limit:.2e}), {elapsed:.2f}s (< 30s)")
    assert ok


def test_criterion_08_level_set_coincidence(acceptance):
    # the measured W level on the Fermi contour is reported alongside;
    # see the project notes for why it is e^-1 rather than e^-TrX
    half = 8 * math.sqrt(HBAR)
    details, ok = [], True
    for name, (x, y) in WIGNER_STATES.items():
        st = state_1d(x, y, HBAR)
        rep = compare_fermi_wigner(sample_squeezed(st, 1024, half), [math.exp(-st.trace_x)])
        d = rep.levels[0].mean_radial_distance
        ok &= bool(d <= rep.tolerance)
        details.append(f"{name} {d:.3f} (W on Fermi contour {rep.contour_wigner_fraction:.3f} of peak)")
    acceptance(8, "Wigner level e^-TrX vs Fermi contour", ok,
               "; ".join(details) + f" (<= {rep.tolerance:.3f})")
    assert ok


def test_criterion_09_symplectic_eigenvalues(acceptance):
    rng = np.random.default_rng(SEED + 9)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        m = random_spd(rng, 2 * n)
        ev = np.linalg.eigvals(standard_symplectic(n) @ m)
        oracle = np.sort(np.abs(ev.imag))[::-1][0::2]
        worst = max(worst, float(np.max(np.abs(symplectic_eigenvalues(m) - oracle)) / max(1.0, oracle[0])))
    diag_err = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        x = random_spd(rng, n)
        got = symplectic_eigenvalues(np.block([[x, np.zeros((n, n))], [np.zeros((n, n)), x]]))
        diag_err = max(diag_err, float(np.max(np.abs(got - np.linalg.eigvalsh(x)[::-1]))))
    ok = worst <= 1e-8 and diag_err <= 1e-10
    acceptance(9, "symplectic eigenvalues vs eig(JM)", ok,
               f"max err {worst:.1e} (<= 1e-8), diag(X,X) err {diag_err:.1e} (<= 1e-10)")
    assert ok


def _cli(tmp_path, command, doc, out, capsys):
    cfg = tmp_path / f"{command}.json"
    cfg.write_text(json.dumps(doc), encoding="utf-8")
    code = cli.main([command, "--config", str(cfg), "--out-dir", str(tmp_path / out)])
    text = capsys.readouterr().out
    return code, json.loads(text) if code == 0 else None


def test_criterion_10_cli_contract(tmp_path, capsys, acceptance):
    import csv
    import xml.etree.ElementTree as ET

    fid = {"squeezed": {"n": 1, "X": [[1.0]], "Y": [[0.0]]}, "hbar": HBAR}
    checks = {}
    code, s = _cli(tmp_path, "capacity", fid, "a", capsys)
    checks["capacity"] = code == 0 and s["withinBounds"] is True and all(
        abs(s[k] - math.pi) <= 1e-9 for k in ("capacity", "lower", "upper"))
    code, s = _cli(tmp_path, "oscillator", {"oscillator": {"indices": [1]}, "hbar": HBAR}, "a", capsys)
    checks["oscillator"] = code == 0 and abs(s["fermiArea"] - 3 * math.pi) <= 1e-9

    code, _ = _cli(tmp_path, "compare", fid, "a", capsys)
    files_ok = code == 0
    for name in ("fermi_contour.csv", "wigner_contours.csv"):
        with open(tmp_path / "a" / name, newline="") as fh:
            rows = list(csv.reader(fh))
        files_ok &= rows[0] == ["contourId", "vertexIndex", "x", "p"] and len(rows) > 1
        files_ok &= all(len(r) == 4 for r in rows)
    files_ok &= ET.parse(tmp_path / "a" / "compare.svg").getroot().tag.endswith("svg")
    checks["compare files"] = files_ok

    _cli(tmp_path, "compare", fid, "b", capsys)
    names = sorted(p.name for p in (tmp_path / "a").iterdir() if p.suffix in (".csv", ".svg"))
    checks["byte-identical rerun"] = all(
        (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names)
    ok = all(checks.values())
    acceptance(10, "CLI contract", ok, ", ".join(f"{k} {'ok' if v else 'BAD'}" for k, v in checks.items()))
    assert ok
