"""Closed-form weak-probe results for the driven Lambda system.

These formulas are the independent oracle for the numerical solvers in
:mod:`acstark.steady` and :mod:`acstark.dynamics`.  Coherences are returned
as plain complex numbers with the gain convention used everywhere in the
package: ``Im(rho) > 0`` is gain, ``Im(rho) < 0`` is absorption, and the
real part is the dispersion.

Dressed-resonance branches are labelled by the sign in
``delta_l - delta_p = +/- omega_l``; with a resonant drive the ``"+"``
branch sits at ``delta_p = -omega_l``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, ZeroField
from .model import A, B, C, DIM, SystemParams, validate_params

DENOMINATOR_TOL = 1e-14

_BRANCH_SIGN = {"+": 1, "-": -1}


def _sign(branch: str) -> int:
    try:
        return _BRANCH_SIGN[branch]
    except KeyError:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}") from None


@dataclass(frozen=True)
class DressedPair:
    plus: np.ndarray
    minus: np.ndarray
    r: float


def generalized_rabi(omega_p: float, omega_l: float) -> float:
    return math.hypot(omega_p, omega_l)


def dressed_detuning(params: SystemParams, branch: str) -> float:
    """Probe detuning satisfying the dressed two-photon resonance of ``branch``."""
    return params.delta_l - _sign(branch) * params.omega_l


def dressed_states(params: SystemParams) -> DressedPair:
    """Semiclassical dressed states |+/->, valid for a resonant drive.

    Vectors are returned in the package basis ordering (c, b, a).  Nothing is
    refused when ``delta_l != 0``; the states are simply no longer
    eigenvectors there.
    """
    validate_params(params)
    r = generalized_rabi(params.omega_p, params.omega_l)
    if r == 0.0:
        raise ZeroField("dressed states need omega_p or omega_l > 0")
    base = np.zeros(DIM, dtype=complex)
    base[A] = params.omega_p / r
    base[B] = cmath.exp(1j * params.delta_phi) * params.omega_l / r
    c_part = np.zeros(DIM, dtype=complex)
    c_part[C] = cmath.exp(-1j * params.phi_p)
    s = 1.0 / math.sqrt(2.0)
    return DressedPair(plus=s * (base + c_part), minus=s * (base - c_part), r=r)


def _checked(denominator: complex) -> complex:
    if abs(denominator) < DENOMINATOR_TOL:
        raise DegenerateDenominator(f"|denominator| = {abs(denominator):.3g}")
    return denominator


def rho_ac_weak(params: SystemParams) -> complex:
    """Weak-probe probe-transition coherence in its reference closed form.

    Note: compared with the exact steady state (``steady.coherence(..,
    "ac")``) the imaginary part agrees to second order in
    omega_p/omega_l, but the sign of the real part is reversed away from
    the resonances; :func:`rho_ab_weak` has no such discrepancy.
    """
    validate_params(params)
    x = params.delta_l - params.delta_p
    gamma = params.gamma_ca + params.gamma_cb
    den = gamma * x + 2j * (params.delta_p * x + params.omega_l**2)
    num = -2j * x * params.omega_p * cmath.exp(1j * params.phi_p)
    return num / _checked(den)


def rho_ab_weak(params: SystemParams) -> complex:
    """Weak-probe coherence on the ac-Stark-allowed a-b transition."""
    validate_params(params)
    x = params.delta_l - params.delta_p
    gamma = params.gamma_ca + params.gamma_cb
    den = gamma * x - 2j * (params.delta_p * x + params.omega_l**2)
    num = 2j * params.omega_p * params.omega_l * cmath.exp(1j * params.delta_phi)
    return num / _checked(den)


def rho_ac_bare(params: SystemParams) -> complex:
    """Probe coherence at bare two-photon resonance: zero (dark state)."""
    validate_params(params)
    return 0j


def rho_ab_bare(params: SystemParams) -> complex:
    """a-b coherence at bare two-photon resonance, -(omega_p/omega_l) e^{i dphi}."""
    validate_params(params)
    if params.omega_l == 0.0:
        raise DegenerateDenominator("bare-resonance limit needs omega_l > 0")
    return -(params.omega_p / params.omega_l) * cmath.exp(1j * params.delta_phi)


def rho_ac_dressed(params: SystemParams, branch: str) -> complex:
    # Identical on both branches; branch only validated for symmetry with rho_ab_dressed.
    _sign(branch)
    validate_params(params)
    gamma = params.gamma_ca + params.gamma_cb
    return (
        -2j * params.omega_p * cmath.exp(1j * params.phi_p)
        / (gamma + 2j * params.delta_l)
    )


def rho_ab_dressed(params: SystemParams, branch: str) -> complex:
    sign = _sign(branch)
    validate_params(params)
    gamma = params.gamma_ca + params.gamma_cb
    return (
        sign * 2j * params.omega_p * cmath.exp(1j * params.delta_phi)
        / (gamma - 2j * params.delta_l)
    )
