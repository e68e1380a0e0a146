import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def matched_amplitude(E, V, a):
    """Transmission coefficient from direct spinor matching at both edges.

    Each region carries waves (1, +-r) exp(+-ipz) with p = sqrt((E-U)^2 - 1)
    and r = p/(E - U + 1); the two spinor components are continuous at
    z = 0 and z = a.  Unknowns: reflected R, inside A, B, transmitted t.
    Returns t exp(ika), the amplitude referred to z = a.
    """
    k = np.sqrt(E * E - 1.0)
    q = np.sqrt((E + V) ** 2 - 1.0)
    r0 = k / (E + 1.0)
    r1 = q / (E + V + 1.0)
    eqa, emqa, eka = np.exp(1j * q * a), np.exp(-1j * q * a), np.exp(1j * k * a)
    M = np.array(
        [
            [-1.0, 1.0, 1.0, 0.0],
            [r0, r1, -r1, 0.0],
            [0.0, eqa, emqa, -eka],
            [0.0, r1 * eqa, -r1 * emqa, -r0 * eka],
        ],
        dtype=complex,
    )
    rhs = np.array([1.0, r0, 0.0, 0.0], dtype=complex)
    R, A, B, t = np.linalg.solve(M, rhs)
    return t * eka


@pytest.fixture
def base_scenario():
    from diracwell import WellScenario

    return WellScenario(1.01, 0.4, 0.0)
