import numpy as np
import pytest
from hypothesis import strategies as st

from acstark.model import SystemParams

FIG3 = SystemParams(omega_p=0.37, omega_l=10.0, gamma_ca=1.0, gamma_cb=1.0)
FIG4 = SystemParams(omega_p=4.5, omega_l=10.0, gamma_ca=1.0, gamma_cb=1.0)
FIG5C = SystemParams(omega_p=0.1, omega_l=10.0, delta_p=-10.0, gamma_ca=1.0, gamma_cb=1.0)


@pytest.fixture
def fig3():
    return FIG3


@pytest.fixture
def fig4():
    return FIG4


@pytest.fixture
def fig5c():
    return FIG5C


finite = st.floats(-30, 30, allow_nan=False, allow_infinity=False)
rates = st.floats(0, 5, allow_nan=False, allow_infinity=False)
phases = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False, allow_infinity=False)

# Steady states are unique once both fields and gamma_cb are on.
driven_params = st.builds(
    SystemParams,
    omega_p=st.floats(0.05, 5),
    omega_l=st.floats(0.5, 15),
    phi_p=phases,
    phi_l=phases,
    delta_p=finite,
    delta_l=st.floats(-5, 5),
    gamma_ca=st.floats(0.1, 3),
    gamma_cb=st.floats(0.1, 3),
)

any_params = st.builds(
    SystemParams,
    omega_p=rates,
    omega_l=rates,
    phi_p=phases,
    phi_l=phases,
    delta_p=finite,
    delta_l=finite,
    gamma_ca=rates,
    gamma_cb=st.floats(0.01, 5),
)


def random_density_matrix(rng, dim=3):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = z @ z.conj().T
    return rho / np.trace(rho)


# One verdict line per acceptance criterion, repeated in the terminal summary.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
