import numpy as np
import pytest

from holosim.protocols import GateParams

KHZ = 2 * np.pi * 1e3

_acceptance_lines: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion."""
    def _report(number, passed, detail=""):
        _acceptance_lines.append(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed
    return _report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def sqrtx():
    return GateParams(np.pi / 2, 0.0, np.pi / 2, 47.1 * KHZ)


def random_params(rng, n):
    out = []
    for _ in range(n):
        out.append(GateParams(
            theta=rng.uniform(0, np.pi),
            phi=rng.uniform(0, 2 * np.pi),
            gamma=rng.uniform(0.05, 2 * np.pi - 0.05),
            omega=rng.uniform(10, 100) * KHZ,
        ))
    return out


def random_qubit_state(rng, pure=False):
    if pure:
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return np.outer(v, v.conj())
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = m @ m.conj().T
    return rho / np.trace(rho)
