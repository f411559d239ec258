"""Run configuration: flat ``key = value`` / JSON parsing and figure presets.

Configuration text is either one ``key = value`` pair per line (``#``
starts a comment) or a single JSON object with the same keys.  Unknown
keys are rejected so that a typo in a physics parameter cannot silently
fall back to a default.  Phases accept plain numbers or multiples of
``pi`` such as ``pi/2``, ``-pi/2`` or ``1.5*pi``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, fields, replace

from .errors import MissingRequired, ParseError, UnknownKey
from .model import SystemParams, validate_params
from .scan import DEFAULT_DP_GRID, DEFAULT_PHI_GRID, Grid1D

MODES = ("steady", "sweep", "map", "spectrum", "dressed", "strong-probe")
FORMATS = ("csv", "json")
WINDOWS = ("rect", "hann")
INITIAL_STATES = ("a", "b", "c")

PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
GRID_KEYS = {
    "grid_dp": ("dp_start", "dp_stop", "dp_points"),
    "grid_phi": ("phi_start", "phi_stop", "phi_points"),
}
DYNAMICS_KEYS = ("t_final", "dt", "tol", "window", "initial_state", "subtract_steady")
OUTPUT_KEYS = ("output", "format")
REQUIRED_KEYS = ("mode", "omega_p", "omega_l")
KNOWN_KEYS = (
    ("mode",)
    + PARAM_KEYS
    + ("delta_phi",)
    + GRID_KEYS["grid_dp"]
    + GRID_KEYS["grid_phi"]
    + DYNAMICS_KEYS
    + OUTPUT_KEYS
)

_GRIDS_FOR_MODE = {
    "sweep": ("grid_dp",),
    "map": ("grid_dp", "grid_phi"),
    "strong-probe": ("grid_dp", "grid_phi"),
}
_DEFAULT_GRIDS = {"grid_dp": DEFAULT_DP_GRID, "grid_phi": DEFAULT_PHI_GRID}
_PI_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi(?:\s*/\s*(\d+\.?\d*))?$")


@dataclass(frozen=True)
class RunConfig:
    mode: str
    params: SystemParams
    grid_dp: Grid1D | None = None
    grid_phi: Grid1D | None = None
    t_final: float = 200.0
    dt: float = 0.05
    tol: float = 1e-10
    window: str = "rect"
    initial_state: str = "a"
    subtract_steady: bool = False
    output: str | None = None
    format: str = "csv"


def _float(key: str, raw, where: str = "") -> float:
    if isinstance(raw, bool):
        raise ParseError(f"{where}{key}: expected a number, got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    text = str(raw).strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text)
    if m:
        coeff = m.group(1)
        factor = {"": 1.0, "+": 1.0, "-": -1.0}.get(coeff)
        factor = float(coeff) if factor is None else factor
        div = float(m.group(2)) if m.group(2) else 1.0
        return factor * math.pi / div
    raise ParseError(f"{where}{key}: cannot parse {text!r} as a number")


def _int(key: str, raw, where: str = "") -> int:
    value = _float(key, raw, where)
    if not value.is_integer():
        raise ParseError(f"{where}{key}: expected an integer, got {raw!r}")
    return int(value)


def _bool(key: str, raw, where: str = "") -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("true", "yes", "1", "on"):
        return True
    if text in ("false", "no", "0", "off"):
        return False
    raise ParseError(f"{where}{key}: expected a boolean, got {raw!r}")


def _choice(key: str, raw, options, where: str = "") -> str:
    text = str(raw).strip()
    if text not in options:
        raise ParseError(f"{where}{key}: {text!r} is not one of {', '.join(options)}")
    return text


def parse_text(text: str) -> dict[str, object]:
    """Split configuration text into raw ``{key: value}`` pairs."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ParseError("JSON configuration must be an object")
        return {str(k): v for k, v in data.items()}

    raw: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ParseError(f"line {lineno}: empty key")
        if key in raw:
            raise ParseError(f"line {lineno}: duplicate key {key!r} (first on line {lines[key]})")
        raw[key] = value
        lines[key] = lineno
    return raw


def build_config(raw: dict[str, object]) -> RunConfig:
    """Validate raw key/value pairs into a :class:`RunConfig`."""
    unknown = sorted(set(raw) - set(KNOWN_KEYS))
    if unknown:
        raise UnknownKey(f"unknown key(s): {', '.join(unknown)}")
    for key in REQUIRED_KEYS:
        if key not in raw or raw[key] in (None, ""):
            raise MissingRequired(key)

    mode = _choice("mode", raw["mode"], MODES)
    values = {k: _float(k, raw[k]) for k in PARAM_KEYS if k in raw}
    if "delta_phi" in raw:
        if "phi_p" in raw:
            raise ParseError("give either phi_p or delta_phi, not both")
        values["phi_p"] = values.get("phi_l", 0.0) + _float("delta_phi", raw["delta_phi"])
    params = validate_params(SystemParams(**values))

    grids = {}
    for name, (k_start, k_stop, k_points) in GRID_KEYS.items():
        given = [k in raw for k in (k_start, k_stop, k_points)]
        if any(given):
            default = _DEFAULT_GRIDS[name]
            try:
                grids[name] = Grid1D(
                    _float(k_start, raw[k_start]) if given[0] else default.start,
                    _float(k_stop, raw[k_stop]) if given[1] else default.stop,
                    _int(k_points, raw[k_points]) if given[2] else default.points,
                )
            except ValueError as exc:
                raise ParseError(f"{name}: {exc}") from None
        elif name in _GRIDS_FOR_MODE.get(mode, ()):
            grids[name] = _DEFAULT_GRIDS[name]

    cfg = RunConfig(mode=mode, params=params, **grids)
    updates: dict[str, object] = {}
    for key in ("t_final", "dt", "tol"):
        if key in raw:
            updates[key] = _float(key, raw[key])
    if "window" in raw:
        updates["window"] = _choice("window", raw["window"], WINDOWS)
    if "initial_state" in raw:
        updates["initial_state"] = _choice("initial_state", raw["initial_state"], INITIAL_STATES)
    if "subtract_steady" in raw:
        updates["subtract_steady"] = _bool("subtract_steady", raw["subtract_steady"])
    if raw.get("output") not in (None, ""):
        updates["output"] = str(raw["output"]).strip()
    if "format" in raw:
        updates["format"] = _choice("format", raw["format"], FORMATS)
    cfg = replace(cfg, **updates)

    if cfg.t_final <= 0 or cfg.dt <= 0:
        raise ParseError("t_final and dt must be positive")
    if not 1e-12 <= cfg.tol <= 1e-4:
        raise ParseError(f"tol must lie in [1e-12, 1e-4], got {cfg.tol!r}")
    return cfg


def parse_config(text: str) -> RunConfig:
    return build_config(parse_text(text))


def config_items(cfg: RunConfig) -> dict[str, object]:
    """Flat key/value view of ``cfg`` (the inverse of :func:`build_config`)."""
    items: dict[str, object] = {"mode": cfg.mode}
    items.update(cfg.params.as_dict())
    for name, keys in GRID_KEYS.items():
        grid = getattr(cfg, name)
        if grid is not None:
            items.update(zip(keys, (grid.start, grid.stop, grid.points)))
    for key in DYNAMICS_KEYS:
        items[key] = getattr(cfg, key)
    if cfg.output is not None:
        items["output"] = cfg.output
    items["format"] = cfg.format
    return items


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for key, value in config_items(cfg).items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


# Figure presets: reference parameter values, units of gamma_cb.
_FIG3 = SystemParams(omega_p=0.37, omega_l=10.0, gamma_ca=1.0, gamma_cb=1.0)
_FIG4 = SystemParams(omega_p=4.5, omega_l=10.0, gamma_ca=1.0, gamma_cb=1.0)
_FIG5 = SystemParams(omega_p=0.1, omega_l=10.0, delta_l=0.0, gamma_ca=1.0, gamma_cb=1.0)

PRESETS: dict[str, RunConfig] = {
    "fig3a": RunConfig("sweep", _FIG3.with_delta_phi(0.0), DEFAULT_DP_GRID),
    "fig3b": RunConfig("sweep", _FIG3.with_delta_phi(math.pi / 2), DEFAULT_DP_GRID),
    "fig3c": RunConfig("sweep", _FIG3.with_delta_phi(math.pi), DEFAULT_DP_GRID),
    "fig3d": RunConfig("sweep", _FIG3.with_delta_phi(3 * math.pi / 2), DEFAULT_DP_GRID),
    "fig3e": RunConfig("map", _FIG3, DEFAULT_DP_GRID, DEFAULT_PHI_GRID),
    "fig3f": RunConfig("map", _FIG3, DEFAULT_DP_GRID, DEFAULT_PHI_GRID),
    "fig4a": RunConfig("sweep", _FIG4.with_delta_phi(0.0), DEFAULT_DP_GRID),
    "fig4b": RunConfig("sweep", _FIG4.with_delta_phi(math.pi / 2), DEFAULT_DP_GRID),
    "fig4c": RunConfig("sweep", _FIG4.with_delta_phi(math.pi), DEFAULT_DP_GRID),
    "fig4d": RunConfig("sweep", _FIG4.with_delta_phi(-math.pi / 2), DEFAULT_DP_GRID),
    "fig4e": RunConfig("map", _FIG4, DEFAULT_DP_GRID, DEFAULT_PHI_GRID),
    "fig5a": RunConfig("spectrum", _FIG5.replace(delta_p=-20.0)),
    "fig5b": RunConfig("spectrum", _FIG5.replace(delta_p=-15.0)),
    "fig5c": RunConfig("spectrum", _FIG5.replace(delta_p=-10.0)),
    "fig5d": RunConfig("spectrum", _FIG5.replace(delta_p=0.0)),
}

# Which coherence each map preset displays.
PRESET_QUANTITY = {"fig3e": "rho_ac", "fig3f": "rho_ab", "fig4e": "rho_ab"}


def preset(preset_id: str) -> RunConfig:
    try:
        return PRESETS[preset_id]
    except KeyError:
        raise UnknownKey(
            f"unknown preset {preset_id!r}; choose from {', '.join(PRESETS)}"
        ) from None
