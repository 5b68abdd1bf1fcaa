import numpy as np
import pytest

from fermi_scope import OscillatorEigenstate, SqueezedState, eigenfunction_value, evaluate_state
from fermi_scope.phase_space import GridWavefunction


def sample_squeezed(state: SqueezedState, count: int, half_width: float) -> GridWavefunction:
    return GridWavefunction.from_function(
        lambda x: evaluate_state(state, x[:, None]), -half_width, half_width, count, state.hbar)


def sample_oscillator(state: OscillatorEigenstate, count: int, half_width: float) -> GridWavefunction:
    return GridWavefunction.from_function(
        lambda x: eigenfunction_value(state, x[:, None]), -half_width, half_width, count, state.hbar)


def random_spd(rng: np.random.Generator, dim: int) -> np.ndarray:
    b = rng.uniform(-2, 2, size=(dim, dim))
    return b.T @ b + 0.1 * np.eye(dim)


def state_1d(x: float, y: float, hbar: float = 1.0) -> SqueezedState:
    return SqueezedState(np.array([[x]]), np.array([[y]]), hbar)


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


ACCEPTANCE_COUNT = 10
_acceptance_lines: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {title}: {detail}"
        _acceptance_lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, ACCEPTANCE_COUNT + 1):
        line = _acceptance_lines.get(number)
        if line is None:
            # only report missing criteria when the acceptance module ran
            if any(k for k in _acceptance_lines):
                line = f"FAIL  criterion {number:2d}  not run or raised before reporting"
        terminalreporter.write_line(line)
