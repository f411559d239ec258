"""Driven three-level Lambda system: parameters, Hamiltonian and Liouvillian.

Basis ordering is fixed throughout the package::

    index 0 -> |c>   (upper state)
    index 1 -> |b>   (lower state, coupled to |c> by the drive)
    index 2 -> |a>   (lower state, coupled to |c> by the probe)

All frequencies and rates are in units of the |c> -> |b> decay rate
``gamma_cb`` and hbar = 1.  Density matrices are vectorized column-major
(``vec(rho)[i + 3*j] == rho[i, j]``), so ``vec(A @ rho @ B) ==
kron(B.T, A) @ vec(rho)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from functools import lru_cache

import numpy as np

from .errors import NegativeRate, NonFiniteInput

C, B, A = 0, 1, 2
DIM = 3

_EYE = np.eye(DIM, dtype=complex)


@dataclass(frozen=True)
class SystemParams:
    """Physical inputs of the driven Lambda system (units of gamma_cb)."""

    omega_p: float = 0.0
    omega_l: float = 0.0
    phi_p: float = 0.0
    phi_l: float = 0.0
    delta_p: float = 0.0
    delta_l: float = 0.0
    gamma_ca: float = 1.0
    gamma_cb: float = 1.0

    @property
    def delta_phi(self) -> float:
        """Relative phase between probe and drive, phi_p - phi_l."""
        return self.phi_p - self.phi_l

    def with_delta_phi(self, delta_phi: float) -> "SystemParams":
        """Copy with the probe phase set so that phi_p - phi_l == delta_phi."""
        return replace(self, phi_p=self.phi_l + delta_phi)

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


_FIELDS = fields(SystemParams)


def validate_params(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged if valid, else raise.

    Raises NonFiniteInput for NaN/inf fields and NegativeRate for negative
    Rabi frequencies or decay rates (``gamma_cb`` must be strictly positive).
    """
    for f in _FIELDS:
        value = getattr(params, f.name)
        if not math.isfinite(value):
            raise NonFiniteInput(f"{f.name} must be finite, got {value!r}")
    for name in ("omega_p", "omega_l", "gamma_ca"):
        if getattr(params, name) < 0:
            raise NegativeRate(f"{name} must be >= 0, got {getattr(params, name)!r}")
    if params.gamma_cb <= 0:
        raise NegativeRate(f"gamma_cb must be > 0, got {params.gamma_cb!r}")
    return params


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Interaction-picture RWA Hamiltonian, couplings without a factor 1/2."""
    validate_params(params)
    h = np.zeros((DIM, DIM), dtype=complex)
    h[C, B] = params.omega_l * np.exp(1j * params.phi_l)
    h[C, A] = params.omega_p * np.exp(1j * params.phi_p)
    h[B, C] = np.conj(h[C, B])
    h[A, C] = np.conj(h[C, A])
    h[B, B] = params.delta_l
    h[A, A] = params.delta_p
    return h


def jump_operators(params: SystemParams) -> list[tuple[float, np.ndarray]]:
    """(rate, operator) pairs: |a><c| at gamma_ca and |b><c| at gamma_cb."""
    j_ca = np.zeros((DIM, DIM), dtype=complex)
    j_ca[A, C] = 1.0
    j_cb = np.zeros((DIM, DIM), dtype=complex)
    j_cb[B, C] = 1.0
    return [(params.gamma_ca, j_ca), (params.gamma_cb, j_cb)]


def _kron(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # np.kron for 3x3 operands without its generic-shape overhead.
    return (x[:, None, :, None] * y[None, :, None, :]).reshape(DIM * DIM, DIM * DIM)


def commutator_superop(h: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> -i[h, rho]."""
    return -1j * (_kron(_EYE, h) - _kron(h.T, _EYE))


def dissipator_superop(rate: float, jump: np.ndarray) -> np.ndarray:
    """Superoperator of rate * (J rho J^+ - {J^+ J, rho}/2)."""
    jdj = jump.conj().T @ jump
    return rate * (
        _kron(jump.conj(), jump)
        - 0.5 * _kron(_EYE, jdj)
        - 0.5 * _kron(jdj.T, _EYE)
    )


@lru_cache(maxsize=64)
def _dissipator(gamma_ca: float, gamma_cb: float) -> np.ndarray:
    total = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    rates = SystemParams(gamma_ca=gamma_ca, gamma_cb=gamma_cb)
    for rate, jump in jump_operators(rates):
        if rate:
            total += dissipator_superop(rate, jump)
    total.setflags(write=False)
    return total


def build_liouvillian(params: SystemParams) -> np.ndarray:
    """9x9 generator with d vec(rho)/dt = L @ vec(rho)."""
    return commutator_superop(build_hamiltonian(params)) + _dissipator(
        params.gamma_ca, params.gamma_cb
    )


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(DIM * DIM, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(DIM, DIM, order="F")


def basis_state(label: str) -> np.ndarray:
    """Projector |x><x| for ``label`` in {"a", "b", "c"}."""
    index = {"c": C, "b": B, "a": A}[label]
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[index, index] = 1.0
    return rho
