"""Command-line entry point: ``acstark <mode> [options]`` and ``acstark preset <id>``.

Exit codes: 0 success, 2 configuration error, 3 solver error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analytic, dynamics, scan
from .config import (
    DYNAMICS_KEYS,
    GRID_KEYS,
    MODES,
    PARAM_KEYS,
    PRESET_QUANTITY,
    PRESETS,
    RunConfig,
    build_config,
    config_items,
    parse_text,
    preset,
)
from .errors import ConfigError, ParameterError, SolverError
from .model import build_liouvillian
from .output import UNITS_NOTE, csv_text, table_columns, write_csv, write_json
from .steady import coherence, populations, steady_state

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4


def _peak_dict(p: dynamics.Peak) -> dict:
    return {"nu_center": p.nu_center, "height": p.height, "fwhm": p.fwhm}


def _steady_row(cfg: RunConfig) -> tuple[dict, str, dict]:
    result = steady_state(build_liouvillian(cfg.params))
    row: dict[str, list] = {"delta_p": [cfg.params.delta_p]}
    for pair in ("ab", "ac", "bc"):
        value = coherence(result.rho, pair)
        row[f"re_rho_{pair}"] = [value.real]
        row[f"im_rho_{pair}"] = [value.imag]
    for name, value in populations(result.rho).items():
        row[f"rho_{name}"] = [value]
    row["residual"] = [result.residual]
    summary = (
        f"rho_ab = {row['re_rho_ab'][0]:.6g}{row['im_rho_ab'][0]:+.6g}i, "
        f"rho_ac = {row['re_rho_ac'][0]:.6g}{row['im_rho_ac'][0]:+.6g}i, "
        f"residual {result.residual:.2e}"
    )
    return row, summary, {"solver": {"residual": result.residual, "method": result.method}}


def _dressed_rows(cfg: RunConfig) -> tuple[dict, str, dict]:
    p = cfg.params
    pair = analytic.dressed_states(p)
    labels, values = ["generalized_rabi"], [complex(pair.r)]
    for name, state in (("plus", pair.plus), ("minus", pair.minus)):
        for basis, index in (("c", 0), ("b", 1), ("a", 2)):
            labels.append(f"{name}_{basis}")
            values.append(complex(state[index]))
    for branch in "+-":
        labels += [f"rho_ab_dressed{branch}", f"rho_ac_dressed{branch}", f"delta_p_dressed{branch}"]
        values += [
            analytic.rho_ab_dressed(p, branch),
            analytic.rho_ac_dressed(p, branch),
            complex(analytic.dressed_detuning(p, branch)),
        ]
    for name, fn in (("rho_ab_weak", analytic.rho_ab_weak), ("rho_ac_weak", analytic.rho_ac_weak)):
        try:
            values.append(fn(p))
        except ArithmeticError:
            values.append(complex(math.nan, math.nan))
        labels.append(name)
    rows = {
        "quantity": labels,
        "re": [v.real for v in values],
        "im": [v.imag for v in values],
    }
    return rows, f"generalized Rabi frequency R = {pair.r:.6g}", {}


def _sweep_summary(table: scan.ScanTable) -> str:
    ext = scan.extrema(table.columns["im_rho_ab"], table.axes["delta_p"])
    return (
        f"Im rho_ab max {ext['max']:.6g} at delta_p = {ext['argmax']:g}; "
        f"min {ext['min']:.6g} at delta_p = {ext['argmin']:g}; "
        f"{table.n_failed} failed point(s)"
    )


def _map_summary(table: scan.ScanTable, quantity: str = "rho_ab") -> str:
    values = (table.rho_ac() if quantity == "rho_ac" else table.rho_ab()).imag
    dps, phis = table.axes["delta_p"], table.axes["delta_phi"]
    imax = np.unravel_index(np.nanargmax(values), values.shape)
    imin = np.unravel_index(np.nanargmin(values), values.shape)
    return (
        f"Im {quantity} max {values[imax]:.6g} at (delta_p, delta_phi) = "
        f"({dps[imax[0]]:g}, {phis[imax[1]]:.4g}); min {values[imin]:.6g} at "
        f"({dps[imin[0]]:g}, {phis[imin[1]]:.4g}); {table.n_failed} failed point(s)"
    )


def _spectrum(cfg: RunConfig):
    traj = dynamics.evolve(cfg.params, cfg.initial_state, cfg.t_final, cfg.tol, cfg.dt)
    spec = dynamics.spectrum(traj, window=cfg.window, subtract_steady=cfg.subtract_steady)
    lines = dynamics.spectral_lines(traj)
    shown = lines["carrier"][:1] + lines["transient"][:2]
    summary = "peaks: " + "; ".join(
        f"nu = {p.nu_center:.4f} (height {p.height:.4g}, fwhm {p.fwhm:.3g})" for p in shown
    )
    meta = {
        "spectrum": {
            "resolution": spec.resolution,
            "window": spec.window,
            "steady_subtracted": spec.steady_subtracted,
            "carrier": spec.carrier,
            "samples": spec.meta["samples"],
            "axis": spec.meta["axis"],
        },
        "peaks": {k: [_peak_dict(p) for p in v] for k, v in lines.items()},
    }
    return spec, summary, meta


def execute(cfg: RunConfig, quantity: str = "rho_ab") -> list[tuple[str, object, str, dict]]:
    """Run ``cfg``; returns ``(suffix, result, summary, metadata)`` per output table."""
    if cfg.mode == "steady":
        return [("", *_steady_row(cfg))]
    if cfg.mode == "dressed":
        return [("", *_dressed_rows(cfg))]
    if cfg.mode == "sweep":
        table = scan.sweep_detuning(cfg.params, cfg.grid_dp)
        return [("", table, _sweep_summary(table), {})]
    if cfg.mode == "map":
        table = scan.map_phase_detuning(cfg.params, cfg.grid_dp, cfg.grid_phi)
        return [("", table, _map_summary(table, quantity), {})]
    if cfg.mode == "spectrum":
        return [("", *_spectrum(cfg))]
    if cfg.mode == "strong-probe":
        suite = scan.strong_probe_suite(cfg.params, cfg.grid_dp, cfg.grid_phi)
        out = []
        for key, table in suite.items():
            suffix = "_map" if key == "map" else "_dphi_" + key.replace("/", "_").replace("-", "m")
            summary = _map_summary(table) if key == "map" else _sweep_summary(table)
            out.append((suffix, table, f"[{key}] {summary}", {"delta_phi": key}))
        return out
    raise ConfigError(f"unknown mode {cfg.mode!r}")


def _output_path(base: Path, suffix: str) -> Path:
    return base.with_name(base.stem + suffix + base.suffix) if suffix else base


def run_config(cfg: RunConfig, preset_id: str | None = None, stream=None) -> list[Path]:
    """Execute ``cfg`` and write its outputs; returns the written data paths."""
    stream = sys.stdout if stream is None else stream
    quantity = PRESET_QUANTITY.get(preset_id, "rho_ab")
    results = execute(cfg, quantity)
    written = []
    if cfg.output is None and len(results) == 1:
        _, result, summary, _ = results[0]
        columns = result if isinstance(result, dict) else table_columns(result)
        stream.write(csv_text(columns))
        print(summary, file=sys.stderr)
        return written

    base = Path(cfg.output or f"{cfg.mode.replace('-', '_')}.{cfg.format}")
    if not base.parent.is_dir():
        raise OSError(f"output directory {str(base.parent)!r} does not exist")
    for suffix, result, summary, meta in results:
        path = _output_path(base, suffix)
        metadata = {
            "config": {k: v for k, v in config_items(cfg).items()},
            "preset": preset_id,
            **meta,
        }
        writer = write_json if cfg.format == "json" else write_csv
        written.append(writer(result, path, metadata))
        label = f"{preset_id}: " if preset_id else ""
        print(f"{label}{summary} -> {path}", file=stream)
    return written


def run_preset(preset_id: str, output: str | None = None, fmt: str = "csv", stream=None) -> list[Path]:
    cfg = preset(preset_id)
    cfg = replace(cfg, output=output or f"{preset_id}.{fmt}", format=fmt)
    return run_config(cfg, preset_id=preset_id, stream=stream)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    phys = parser.add_argument_group("physical parameters (units of gamma_cb)")
    for key in PARAM_KEYS + ("delta_phi",):
        phys.add_argument("--" + key.replace("_", "-"), dest=key, metavar="X")
    grids = parser.add_argument_group("grids")
    for key in GRID_KEYS["grid_dp"] + GRID_KEYS["grid_phi"]:
        grids.add_argument("--" + key.replace("_", "-"), dest=key, metavar="X")
    dyn = parser.add_argument_group("dynamics / spectrum")
    for key in DYNAMICS_KEYS:
        if key == "subtract_steady":
            dyn.add_argument("--subtract-steady", dest=key, action="store_const", const="true")
        else:
            dyn.add_argument("--" + key.replace("_", "-"), dest=key, metavar="X")
    parser.add_argument("--config", help="key = value or JSON configuration file")
    parser.add_argument("--output", "-o", help="output path (default: CSV on stdout)")
    parser.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acstark",
        description=(
            "Steady states, sweeps, maps and spectra of the ac-Stark-allowed "
            "transition in a driven Lambda system. " + UNITS_NOTE + "."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for mode in MODES:
        _add_run_options(sub.add_parser(mode, help=f"run in {mode} mode"))
    pre = sub.add_parser("preset", help="reproduce a figure panel")
    pre.add_argument("preset_id", choices=list(PRESETS))
    pre.add_argument("--output", "-o")
    pre.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            run_preset(args.preset_id, args.output, args.format)
            return EXIT_OK
        raw: dict[str, object] = {}
        if args.config:
            raw.update(parse_text(Path(args.config).read_text()))
        raw["mode"] = args.command
        for key, value in vars(args).items():
            if key in ("command", "config") or value is None:
                continue
            raw[key] = value
        cfg = build_config(raw)
        run_config(cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"configuration error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
