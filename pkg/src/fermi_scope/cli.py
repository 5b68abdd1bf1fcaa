"""Command-line front end.

    fermi-scope <command> --config <path|-> [--out-dir DIR]

Commands: capacity, fermi, wigner, oscillator, residual, compare.  The config
is one JSON document; see README.md for the schema.  A one-line JSON summary
is printed to stdout and also written to ``summary.json``.

Exit status: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import output
from .capacity import (
    blob_containment_margin,
    capacity_bounds_report,
    ellipsoid_capacity,
    fermi_ellipsoid,
    quantum_blob_inside,
)
from .errors import FermiScopeError, NumericalPairingError
from .gaussian import SqueezedState, evaluate_state, fermi_quadric, fermi_value, wigner_value
from .oscillator import OscillatorEigenstate, eigenfunction_value, fermi_ball, oscillator_fermi_value
from .phase_space import (
    GridWavefunction,
    compare_fermi_wigner,
    fermi_field,
    fermi_operator_residual,
    polyline_area,
    trivial_residual,
    wigner_transform,
    zero_contour,
)
from .symplectic import symplectic_eigenvalues

COMMANDS = ("capacity", "fermi", "wigner", "oscillator", "residual", "compare")
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3
MIN_COUNT = 16

DEFAULT_OUTPUTS = {
    "summary": "summary.json",
    "fermiField": "fermi_field.csv",
    "fermiContour": "fermi_contour.csv",
    "wignerField": "wigner_field.csv",
    "wignerContours": "wigner_contours.csv",
    "svg": "compare.svg",
}


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class Grid:
    x_min: float
    x_max: float
    x_count: int
    p_min: float
    p_max: float
    p_count: int


@dataclass
class RunConfig:
    command: str
    hbar: float
    state: SqueezedState | OscillatorEigenstate | None
    grid_file: Path | None
    grid: Grid
    fractions: list[float]
    polar_mode: str = "auto"
    outputs: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_OUTPUTS))


def _number(raw, name: str, positive: bool = False) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not math.isfinite(raw):
        raise ConfigError(f"{name}: expected a finite number, got {raw!r}")
    if positive and raw <= 0:
        raise ConfigError(f"{name}: must be positive, got {raw!r}")
    return float(raw)


def _count(raw, name: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(f"{name}: expected an integer, got {raw!r}")
    if raw < MIN_COUNT:
        raise ConfigError(f"{name}: must be at least {MIN_COUNT}, got {raw}")
    return raw


def _matrix(raw, name: str) -> np.ndarray:
    try:
        m = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a nested array of numbers") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ConfigError(f"{name}: expected a square row-major matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ConfigError(f"{name}: entries must be finite")
    return m


def parse_config(doc, command: str, base_dir: Path = Path(".")) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    if command not in COMMANDS:
        raise ConfigError(f"command: unknown command {command!r}")
    if "command" in doc and doc["command"] != command:
        raise ConfigError(f"command: config says {doc['command']!r} but {command!r} was requested")
    hbar = _number(doc.get("hbar", 1.0), "hbar", positive=True)

    specs = [k for k in ("squeezed", "oscillator", "gridFile") if k in doc]
    if len(specs) != 1:
        raise ConfigError("state: exactly one of squeezed, oscillator, gridFile is required"
                          f" (found {', '.join(specs) or 'none'})")
    state = None
    grid_file = None
    kind = specs[0]
    if kind == "squeezed":
        sq = doc["squeezed"]
        if not isinstance(sq, dict) or "X" not in sq:
            raise ConfigError("squeezed.X: missing")
        x = _matrix(sq["X"], "squeezed.X")
        y = _matrix(sq.get("Y", np.zeros_like(x).tolist()), "squeezed.Y")
        if "n" in sq and sq["n"] != x.shape[0]:
            raise ConfigError(f"squeezed.n: {sq['n']} does not match X of size {x.shape[0]}")
        if y.shape != x.shape:
            raise ConfigError("squeezed.Y: must have the same shape as X")
        try:
            state = SqueezedState(x, y, hbar)
        except FermiScopeError as exc:
            raise ConfigError(f"squeezed.X: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"squeezed.Y: {exc}") from None
    elif kind == "oscillator":
        osc = doc["oscillator"]
        idx = osc.get("indices") if isinstance(osc, dict) else None
        if (not isinstance(idx, list) or not idx
                or any(isinstance(i, bool) or not isinstance(i, int) or i < 0 for i in idx)):
            raise ConfigError("oscillator.indices: expected a nonempty list of nonnegative integers")
        state = OscillatorEigenstate(tuple(idx), hbar)
    else:
        if not isinstance(doc["gridFile"], str):
            raise ConfigError("gridFile: expected a path string")
        grid_file = base_dir / doc["gridFile"]

    g = doc.get("grid", {})
    if not isinstance(g, dict):
        raise ConfigError("grid: expected an object")
    scale = 8.0 * math.sqrt(hbar)
    grid = Grid(
        _number(g.get("xMin", -scale), "grid.xMin"),
        _number(g.get("xMax", scale), "grid.xMax"),
        _count(g.get("xCount", 1024), "grid.xCount"),
        _number(g.get("pMin", -scale), "grid.pMin"),
        _number(g.get("pMax", scale), "grid.pMax"),
        _count(g.get("pCount", 512), "grid.pCount"),
    )
    if grid.x_max <= grid.x_min:
        raise ConfigError("grid.xMax: must exceed grid.xMin")
    if grid.p_max <= grid.p_min:
        raise ConfigError("grid.pMax: must exceed grid.pMin")

    fr = doc.get("wignerLevelFractions", [0.5, math.exp(-1), 0.1])
    if not isinstance(fr, list) or not fr:
        raise ConfigError("wignerLevelFractions: expected a nonempty list")
    fractions = [_number(f, "wignerLevelFractions") for f in fr]
    if any(not 0 < f < 1 for f in fractions):
        raise ConfigError("wignerLevelFractions: values must lie in (0, 1)")

    mode = doc.get("polarMode", "auto")
    if mode not in ("abs", "signed", "auto"):
        raise ConfigError(f"polarMode: expected abs, signed or auto, got {mode!r}")

    outputs = dict(DEFAULT_OUTPUTS)
    extra = doc.get("outputs", {})
    if not isinstance(extra, dict):
        raise ConfigError("outputs: expected an object")
    for key, value in extra.items():
        if key not in DEFAULT_OUTPUTS:
            raise ConfigError(f"outputs.{key}: unknown output")
        if not isinstance(value, str) or not value:
            raise ConfigError(f"outputs.{key}: expected a file name")
        outputs[key] = value
    return RunConfig(command, hbar, state, grid_file, grid, fractions, mode, outputs)


def _wavefunction(cfg: RunConfig) -> GridWavefunction:
    if cfg.grid_file is not None:
        try:
            return output.read_wavefunction_csv(cfg.grid_file, cfg.hbar)
        except OSError as exc:
            raise ConfigError(f"gridFile: cannot read {cfg.grid_file}: {exc.strerror}") from None
    st = cfg.state
    if st.n != 1:
        raise ConfigError(f"{cfg.command}: sampled wavefunctions need one degree of freedom, got n={st.n}")
    g = cfg.grid
    if isinstance(st, SqueezedState):
        f = lambda x: evaluate_state(st, x[:, None])  # noqa: E731
    else:
        f = lambda x: eigenfunction_value(st, x[:, None])  # noqa: E731
    return GridWavefunction.from_function(f, g.x_min, g.x_max, g.x_count, cfg.hbar)


def _closed_form_fermi(cfg: RunConfig):
    st = cfg.state
    if isinstance(st, SqueezedState) and st.n == 1:
        return lambda z: fermi_value(st, z)
    if isinstance(st, OscillatorEigenstate) and st.n == 1:
        return lambda z: oscillator_fermi_value(st, z)
    return None


def _require_squeezed(cfg: RunConfig) -> SqueezedState:
    if not isinstance(cfg.state, SqueezedState):
        raise ConfigError(f"{cfg.command}: requires a squeezed state")
    return cfg.state


def run_capacity(cfg: RunConfig, out: Path) -> dict:
    st = _require_squeezed(cfg)
    rep = capacity_bounds_report(st)
    blob = quantum_blob_inside(st)
    return {
        "command": "capacity",
        "n": st.n,
        "hbar": st.hbar,
        "capacity": rep.capacity,
        "lower": rep.lower,
        "upper": rep.upper,
        "withinBounds": rep.within_bounds,
        "ellipsoidCapacity": ellipsoid_capacity(fermi_ellipsoid(st)),
        "symplecticEigenvalues": symplectic_eigenvalues(fermi_quadric(st).mF).tolist(),
        "blobCapacity": blob.capacity(),
        "blobMaxFermiValue": blob_containment_margin(st, blob),
    }


def run_fermi(cfg: RunConfig, out: Path) -> dict:
    st = cfg.state
    if isinstance(st, SqueezedState) and st.n > 1:
        q = fermi_quadric(st)
        return {"command": "fermi", "n": st.n, "hbar": st.hbar,
                "mF": q.mF.tolist(), "constant": q.constant,
                "capacity": ellipsoid_capacity(fermi_ellipsoid(st))}
    psi = _wavefunction(cfg)
    g = cfg.grid
    fld = fermi_field(psi, g.p_min, g.p_max, g.p_count, mode=cfg.polar_mode)
    lines = zero_contour(fld, 0.0)
    output.atomic_write(out / cfg.outputs["fermiField"], output.field_csv(fld, "gF", with_mask=True))
    output.atomic_write(out / cfg.outputs["fermiContour"], output.contours_csv(lines))
    summary = {
        "command": "fermi",
        "hbar": psi.hbar,
        "fermiArea": float(sum(polyline_area(ln) for ln in lines)),
        "contours": len(lines),
        "maskedFraction": float(np.mean(fld.masked)),
        "closedFormMaxDeviation": None,
    }
    exact = _closed_form_fermi(cfg)
    if exact is not None:
        x, p = np.meshgrid(fld.x_axis, fld.p_axis, indexing="ij")
        dev = np.abs(fld.values - exact(np.stack([x, p], axis=-1)))[~fld.masked]
        summary["closedFormMaxDeviation"] = float(dev.max()) if dev.size else None
    return summary


def run_wigner(cfg: RunConfig, out: Path) -> dict:
    psi = _wavefunction(cfg)
    w = wigner_transform(psi)
    output.atomic_write(out / cfg.outputs["wignerField"], output.field_csv(w, "W", with_mask=False))
    summary = {
        "command": "wigner",
        "hbar": psi.hbar,
        "peak": float(w.values.max()),
        "minimum": float(w.values.min()),
        "normalization": float(w.values.sum() * w.dx * w.dp),
        "dp": w.dp,
        "closedFormMaxDeviation": None,
    }
    if isinstance(cfg.state, SqueezedState):
        x, p = np.meshgrid(w.x_axis, w.p_axis, indexing="ij")
        exact = wigner_value(cfg.state, np.stack([x, p], axis=-1))
        summary["closedFormMaxDeviation"] = float(np.max(np.abs(w.values - exact)))
    return summary


def run_oscillator(cfg: RunConfig, out: Path) -> dict:
    st = cfg.state
    if not isinstance(st, OscillatorEigenstate):
        raise ConfigError("oscillator: requires an oscillator state")
    ball = fermi_ball(st)
    return {
        "command": "oscillator",
        "indices": list(st.indices),
        "hbar": st.hbar,
        "radiusSquared": st.energy,
        "fermiArea": ellipsoid_capacity(ball),
        # (2 N + 1) hbar with N the total quantum number; agrees with radiusSquared only for n = 1
        "radiusSquaredTotalIndex": (2 * sum(st.indices) + 1) * st.hbar,
    }


def run_residual(cfg: RunConfig, out: Path) -> dict:
    psi = _wavefunction(cfg)
    return {
        "command": "residual",
        "hbar": psi.hbar,
        "xCount": psi.size,
        "dx": psi.dx,
        "residual": fermi_operator_residual(psi, mode=cfg.polar_mode),
        "trivialResidual": trivial_residual(psi, mode=cfg.polar_mode),
    }


def run_compare(cfg: RunConfig, out: Path) -> dict:
    psi = _wavefunction(cfg)
    rep = compare_fermi_wigner(psi, cfg.fractions, mode=cfg.polar_mode)
    output.atomic_write(out / cfg.outputs["fermiContour"], output.contours_csv(rep.fermi_contours))
    all_lines, ids, levels = [], [], []
    for lev in rep.levels:
        these = list(range(len(all_lines), len(all_lines) + len(lev.contours)))
        all_lines += lev.contours
        ids += these
        levels.append({
            "fraction": lev.fraction,
            "contourIds": these,
            "area": lev.area,
            "meanRadialDistance": lev.mean_radial_distance,
            "symmetricAreaDifference": lev.symmetric_area_difference,
        })
    output.atomic_write(out / cfg.outputs["wignerContours"], output.contours_csv(all_lines, ids))
    output.atomic_write(out / cfg.outputs["svg"], output.comparison_svg(
        rep.fermi_contours, [(lev.fraction, lev.contours) for lev in rep.levels]))
    co = rep.coincidence
    return {
        "command": "compare",
        "hbar": psi.hbar,
        "fermiArea": rep.fermi_area,
        "coincidenceFraction": rep.contour_wigner_fraction,
        "coincidenceSpread": rep.contour_wigner_spread,
        "coincidenceDistance": co.mean_radial_distance if co else None,
        "quantumPotentialFraction": rep.quantum_potential_fraction,
        "fermiIsWignerLevel": rep.fermi_is_wigner_level,
        "tolerance": rep.tolerance,
        "levels": levels,
    }


RUNNERS = {
    "capacity": run_capacity,
    "fermi": run_fermi,
    "wigner": run_wigner,
    "oscillator": run_oscillator,
    "residual": run_residual,
    "compare": run_compare,
}


def run(cfg: RunConfig, out_dir: Path) -> dict:
    out_dir = Path(out_dir)
    summary = RUNNERS[cfg.command](cfg, out_dir)
    output.atomic_write(out_dir / cfg.outputs["summary"], output.summary_json(summary) + "\n")
    return summary


def _load(source: str) -> tuple[dict, Path]:
    if source == "-":
        return json.loads(sys.stdin.read()), Path(".")
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config: cannot read {source}: {exc.strerror}") from None
    return json.loads(text), path.parent


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="fermi-scope", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON config file, or - for stdin")
    ap.add_argument("--out-dir", default=".", help="directory for output files (default: .)")
    args = ap.parse_args(argv)
    try:
        doc, base = _load(args.config)
        cfg = parse_config(doc, args.command, base)
        summary = run(cfg, Path(args.out_dir))
    except json.JSONDecodeError as exc:
        print(f"fermi-scope: config: invalid JSON ({exc})", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalPairingError, ArithmeticError) as exc:
        print(f"fermi-scope: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, FermiScopeError) as exc:
        print(f"fermi-scope: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(output.summary_json(summary))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
