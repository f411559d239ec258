import numpy as np
import pytest
from hypothesis import given, settings
from scipy.linalg import expm

from acstark.errors import NegativeRate, NonFiniteInput
from acstark.model import (
    A, B, C, SystemParams, basis_state, build_hamiltonian, build_liouvillian,
    commutator_superop, dissipator_superop, jump_operators, unvec, validate_params, vec,
)

from conftest import FIG3, any_params, random_density_matrix


def lindblad_rhs(params, rho):
    """Master equation evaluated directly on matrices (no vectorization)."""
    h = build_hamiltonian(params)
    out = -1j * (h @ rho - rho @ h)
    for rate, lower, upper in ((params.gamma_ca, A, C), (params.gamma_cb, B, C)):
        j = np.zeros((3, 3), dtype=complex)
        j[lower, upper] = 1.0
        jdj = j.conj().T @ j
        out += rate * (j @ rho @ j.conj().T - 0.5 * (jdj @ rho + rho @ jdj))
    return out


def test_zero_params_give_zero_hamiltonian():
    p = SystemParams(gamma_ca=0.0, gamma_cb=1.0)
    assert np.array_equal(build_hamiltonian(p), np.zeros((3, 3)))


def test_fig3_hamiltonian_entries():
    h = build_hamiltonian(FIG3)
    assert h[0, 1] == 10
    assert h[0, 2] == 0.37
    assert np.all(np.diag(h) == 0)


def test_probe_phase_factor():
    h = build_hamiltonian(SystemParams(omega_p=1.0, phi_p=np.pi / 2))
    assert h[0, 2] == pytest.approx(1j, abs=1e-15)
    assert h[2, 0] == pytest.approx(-1j, abs=1e-15)


def test_detunings_on_diagonal():
    h = build_hamiltonian(SystemParams(delta_p=3.0, delta_l=-2.0))
    assert h[B, B] == -2.0 and h[A, A] == 3.0 and h[C, C] == 0.0


def test_zero_fields_and_rates_give_zero_generator():
    # gamma_cb = 0 is rejected by validation, so assemble the pieces directly
    h = build_hamiltonian(SystemParams(gamma_ca=0.0))
    assert not commutator_superop(h).any()
    for _, jump in jump_operators(SystemParams()):
        assert not dissipator_superop(0.0, jump).any()


def test_upper_state_decays_at_total_rate():
    lv = build_liouvillian(SystemParams(gamma_ca=1.0, gamma_cb=1.0))
    for t in (0.1, 0.5, 1.0, 3.0):
        rho = unvec(expm(lv * t) @ vec(basis_state("c")))
        assert rho[C, C].real == pytest.approx(np.exp(-2 * t), rel=1e-12)
        assert rho[A, A].real == pytest.approx(rho[B, B].real, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(any_params)
def test_hamiltonian_hermitian_exactly(p):
    h = build_hamiltonian(p)
    assert np.array_equal(h, h.conj().T)


@settings(max_examples=60, deadline=None)
@given(any_params)
def test_liouvillian_matches_matrix_master_equation(p):
    rng = np.random.default_rng(0)
    rho = random_density_matrix(rng)
    direct = lindblad_rhs(p, rho)
    via_superop = unvec(build_liouvillian(p) @ vec(rho))
    assert np.allclose(via_superop, direct, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(any_params)
def test_trace_preserving(p):
    lv = build_liouvillian(p)
    # the trace functional annihilates every column
    assert np.max(np.abs(vec(np.eye(3)) @ lv)) <= 1e-12
    rng = np.random.default_rng(1)
    rho = random_density_matrix(rng)
    assert abs(np.trace(unvec(lv @ vec(rho)))) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(any_params)
def test_liouvillian_preserves_hermiticity(p):
    rho = random_density_matrix(np.random.default_rng(2))
    out = unvec(build_liouvillian(p) @ vec(rho))
    assert np.allclose(out, out.conj().T, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(any_params)
def test_no_growing_modes(p):
    assert np.linalg.eigvals(build_liouvillian(p)).real.max() <= 1e-10


def test_vec_is_column_major():
    m = np.arange(9).reshape(3, 3)
    assert list(vec(m).real) == [0, 3, 6, 1, 4, 7, 2, 5, 8]
    assert np.array_equal(unvec(vec(m)), m)


@pytest.mark.parametrize(
    "changes, error",
    [
        ({"gamma_ca": -1.0}, NegativeRate),
        ({"omega_p": -0.1}, NegativeRate),
        ({"omega_l": -2.0}, NegativeRate),
        ({"gamma_cb": 0.0}, NegativeRate),
        ({"delta_p": float("nan")}, NonFiniteInput),
        ({"phi_l": float("inf")}, NonFiniteInput),
    ],
)
def test_validate_rejects(changes, error):
    with pytest.raises(error):
        validate_params(FIG3.replace(**changes))


def test_validate_accepts_fig3():
    assert validate_params(FIG3) is FIG3


def test_delta_phi():
    p = SystemParams(phi_p=1.0, phi_l=0.25)
    assert p.delta_phi == 0.75
    assert p.with_delta_phi(2.0).phi_p == 2.25
