"""Steady-state sweeps over probe detuning and relative phase."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import AcStarkError
from .model import SystemParams, build_liouvillian, validate_params
from .steady import coherence, populations, steady_state

WORKERS_ENV = "ACSTARK_WORKERS"
# Below this many points a process pool costs more than it saves.
PARALLEL_THRESHOLD = 2000

RECORD_COLUMNS = (
    "re_rho_ab",
    "im_rho_ab",
    "re_rho_ac",
    "im_rho_ac",
    "rho_aa",
    "rho_bb",
    "rho_cc",
    "residual",
)

STRONG_PROBE_PHASES = {"0": 0.0, "pi/2": math.pi / 2, "pi": math.pi, "-pi/2": -math.pi / 2}


@dataclass(frozen=True)
class Grid1D:
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.points}")
        if not self.start < self.stop:
            raise ValueError(f"grid start {self.start} must be below stop {self.stop}")

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.points - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


DEFAULT_DP_GRID = Grid1D(-20.0, 20.0, 401)
DEFAULT_PHI_GRID = Grid1D(0.0, 2 * math.pi, 201)


@dataclass
class ScanTable:
    """Gridded steady-state records.

    ``axes`` maps axis names (``delta_p``, ``delta_phi``) to their grids in
    row-major order, first axis outermost; ``columns`` holds one flat array
    per record field and ``status`` is ``"ok"`` or the error class name.
    """

    axes: dict[str, np.ndarray]
    columns: dict[str, np.ndarray]
    status: list[str]
    params: SystemParams
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.status)

    def axis_columns(self) -> dict[str, np.ndarray]:
        """Axis coordinates expanded to one value per record."""
        names = list(self.axes)
        mesh = np.meshgrid(*(self.axes[n] for n in names), indexing="ij")
        return {n: m.ravel() for n, m in zip(names, mesh)}

    def column(self, name: str) -> np.ndarray:
        """A record field reshaped onto the grid."""
        shape = tuple(len(v) for v in self.axes.values())
        return self.columns[name].reshape(shape)

    def rho_ab(self) -> np.ndarray:
        return self.column("re_rho_ab") + 1j * self.column("im_rho_ab")

    def rho_ac(self) -> np.ndarray:
        return self.column("re_rho_ac") + 1j * self.column("im_rho_ac")

    @property
    def n_failed(self) -> int:
        return sum(s != "ok" for s in self.status)


def solve_point(params: SystemParams) -> tuple[tuple[float, ...], str]:
    """One steady-state record; failures become NaNs plus an error tag."""
    try:
        result = steady_state(build_liouvillian(params))
    except AcStarkError as exc:
        return (math.nan,) * len(RECORD_COLUMNS), type(exc).__name__
    ab = coherence(result.rho, "ab")
    ac = coherence(result.rho, "ac")
    pops = populations(result.rho)
    record = (
        ab.real, ab.imag, ac.real, ac.imag,
        pops["aa"], pops["bb"], pops["cc"], result.residual,
    )
    return record, "ok"


def _solve_chunk(points: list[SystemParams]):
    return [solve_point(p) for p in points]


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def evaluate(points: list[SystemParams], workers: int | None = None) -> list:
    """Solve every point; result order always follows ``points``."""
    workers = worker_count() if workers is None else max(1, workers)
    if workers == 1 or len(points) < PARALLEL_THRESHOLD:
        return _solve_chunk(points)
    n_chunks = min(len(points), 4 * workers)
    bounds = np.linspace(0, len(points), n_chunks + 1).astype(int)
    chunks = [points[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [rec for part in pool.map(_solve_chunk, chunks) for rec in part]


def _table(axes, points, params, workers, meta) -> ScanTable:
    results = evaluate(points, workers)
    data = np.array([rec for rec, _ in results], dtype=float).reshape(-1, len(RECORD_COLUMNS))
    columns = {name: data[:, i].copy() for i, name in enumerate(RECORD_COLUMNS)}
    return ScanTable(
        axes=axes,
        columns=columns,
        status=[s for _, s in results],
        params=params,
        meta=meta,
    )


def sweep_detuning(
    params: SystemParams, grid: Grid1D = DEFAULT_DP_GRID, workers: int | None = None
) -> ScanTable:
    validate_params(params)
    dps = grid.values()
    points = [params.replace(delta_p=float(dp)) for dp in dps]
    return _table({"delta_p": dps}, points, params, workers, {"kind": "sweep"})


def map_phase_detuning(
    params: SystemParams,
    grid_dp: Grid1D = DEFAULT_DP_GRID,
    grid_phi: Grid1D = DEFAULT_PHI_GRID,
    workers: int | None = None,
) -> ScanTable:
    """Steady states over (delta_p, delta_phi), delta_p outermost.

    The drive phase is held at ``params.phi_l``; the probe phase is set to
    ``phi_l + delta_phi``.
    """
    validate_params(params)
    dps = grid_dp.values()
    phis = grid_phi.values()
    points = [
        params.replace(delta_p=float(dp)).with_delta_phi(float(phi))
        for dp in dps
        for phi in phis
    ]
    return _table(
        {"delta_p": dps, "delta_phi": phis}, points, params, workers, {"kind": "map"}
    )


def strong_probe_suite(
    params: SystemParams | None = None,
    grid_dp: Grid1D = DEFAULT_DP_GRID,
    grid_phi: Grid1D = DEFAULT_PHI_GRID,
    workers: int | None = None,
) -> dict[str, ScanTable]:
    """Detuning sweeps at the four characteristic phases plus the full map.

    Keys are ``"0"``, ``"pi/2"``, ``"pi"``, ``"-pi/2"`` and ``"map"``.
    """
    if params is None:
        params = SystemParams(omega_p=4.5, omega_l=10.0)
    out = {
        key: sweep_detuning(params.with_delta_phi(phi), grid_dp, workers)
        for key, phi in STRONG_PROBE_PHASES.items()
    }
    out["map"] = map_phase_detuning(params, grid_dp, grid_phi, workers)
    return out


def extrema(values: np.ndarray, axis: np.ndarray) -> dict[str, float]:
    """Location and value of the maximum and minimum of a 1D profile."""
    imax = int(np.nanargmax(values))
    imin = int(np.nanargmin(values))
    return {
        "argmax": float(axis[imax]),
        "max": float(values[imax]),
        "argmin": float(axis[imin]),
        "min": float(values[imin]),
    }


def longest_positive_run(values: np.ndarray, axis: np.ndarray) -> tuple[float, float]:
    """Endpoints of the longest contiguous stretch where ``values > 0``."""
    best = (math.nan, math.nan)
    best_len = -1
    start = None
    for i, positive in enumerate(np.append(values > 0, False)):
        if positive and start is None:
            start = i
        elif not positive and start is not None:
            if i - start > best_len:
                best_len = i - start
                best = (float(axis[start]), float(axis[i - 1]))
            start = None
    return best
