"""Exact steady state of the Liouvillian and coherence extraction."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPhysicalState, NonUniqueSteadyState, SolverFailure
from .model import A, B, C, DIM, unvec, vec

NULL_TOL = 1e-10
COND_LIMIT = 1e14
RESIDUAL_TOL = 1e-10

# Row of L holding d(rho_cc)/dt; redundant because the diagonal rows sum to zero.
_TRACE_ROW = 0
_TRACE_VEC = vec(np.eye(DIM))

# Physics labels rho_xy denote the matrix element <y|rho|x>: this is the
# element carrying e^{i(phi_p - phi_l)} for "ab" and e^{i phi_p} for "ac".
PAIRS = {"ab": (B, A), "ac": (C, A), "bc": (C, B)}
POPULATIONS = {"aa": A, "bb": B, "cc": C}


@dataclass(frozen=True)
class SteadyStateResult:
    rho: np.ndarray
    residual: float
    method: str = "trace-row-replacement"


def residual(liouvillian: np.ndarray, rho: np.ndarray) -> float:
    """Euclidean norm of L @ vec(rho)."""
    return float(np.linalg.norm(liouvillian @ vec(rho)))


def coherence(rho: np.ndarray, pair: str) -> complex:
    """Coherence ``rho_ab``, ``rho_ac`` or ``rho_bc`` (gain: Im > 0)."""
    try:
        i, j = PAIRS[pair]
    except KeyError:
        raise ValueError(f"pair must be one of {sorted(PAIRS)}, got {pair!r}") from None
    return complex(rho[i, j])


def populations(rho: np.ndarray) -> dict[str, float]:
    return {name: float(rho[i, i].real) for name, i in POPULATIONS.items()}


def physicality_errors(rho: np.ndarray) -> tuple[float, float, float]:
    """(hermiticity error, |trace - 1|, most negative eigenvalue clipped at 0)."""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho) - 1.0))
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    return herm, trace, max(0.0, -min_eig)


def check_physical(rho: np.ndarray, herm_tol: float, trace_tol: float, eig_tol: float) -> None:
    herm, trace, neg = physicality_errors(rho)
    if herm > herm_tol or trace > trace_tol or neg > eig_tol:
        raise NonPhysicalState(
            f"hermiticity {herm:.3g}, trace error {trace:.3g}, negative eigenvalue {neg:.3g}"
        )


def steady_state(liouvillian: np.ndarray) -> SteadyStateResult:
    """Unique trace-one null vector of ``liouvillian``.

    The d(rho_cc)/dt row is replaced by the trace constraint and the 9x9
    system is solved directly.  Raises NonUniqueSteadyState when more than
    one singular value of L is below 1e-10 and SolverFailure when the
    bordered system is ill conditioned or the solution fails the residual
    or positivity checks.
    """
    lv = np.asarray(liouvillian, dtype=complex)
    sv = np.linalg.svd(lv, compute_uv=False)
    if np.count_nonzero(sv <= NULL_TOL) > 1:
        raise NonUniqueSteadyState(
            f"null space dimension {np.count_nonzero(sv <= NULL_TOL)}"
        )
    bordered = lv.copy()
    bordered[_TRACE_ROW, :] = _TRACE_VEC
    rhs = np.zeros(DIM * DIM, dtype=complex)
    rhs[_TRACE_ROW] = 1.0
    cond = np.linalg.cond(bordered)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SolverFailure(f"condition number {cond:.3g} exceeds {COND_LIMIT:.0e}")
    rho = unvec(np.linalg.solve(bordered, rhs))
    res = residual(lv, rho)
    if res > RESIDUAL_TOL:
        raise SolverFailure(f"residual {res:.3g} exceeds {RESIDUAL_TOL:.0e}")
    try:
        check_physical(rho, 1e-12, 1e-12, 1e-10)
    except NonPhysicalState as exc:
        raise SolverFailure(f"steady state is not a density matrix: {exc}") from None
    return SteadyStateResult(rho=rho, residual=res)
