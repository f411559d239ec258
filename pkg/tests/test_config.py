import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acstark.config import (
    KNOWN_KEYS,
    PRESETS,
    RunConfig,
    build_config,
    parse_config,
    parse_text,
    preset,
    serialize_config,
)
from acstark.errors import MissingRequired, NegativeRate, ParseError, UnknownKey
from acstark.model import SystemParams
from acstark.scan import DEFAULT_DP_GRID, DEFAULT_PHI_GRID, Grid1D

from conftest import FIG3


def test_steady_example_gives_fig3_params():
    cfg = parse_config("mode = steady\nomega_l = 10\nomega_p = 0.37\n")
    assert cfg.mode == "steady"
    assert cfg.params == FIG3
    assert cfg.grid_dp is None and cfg.grid_phi is None


def test_empty_input_missing_mode():
    with pytest.raises(MissingRequired, match="mode"):
        parse_config("")


def test_missing_field_strength():
    with pytest.raises(MissingRequired, match="omega_l"):
        parse_config("mode = steady\nomega_p = 0.37\n")


def test_non_numeric_value():
    with pytest.raises(ParseError, match="omega_l"):
        parse_config("mode = steady\nomega_p = 0.37\nomega_l = ten\n")


def test_typo_key_rejected():
    with pytest.raises(UnknownKey, match="omega_pp"):
        parse_config("mode = steady\nomega_l = 10\nomega_p = 0.37\nomega_pp = 1\n")


def test_parse_error_reports_line():
    with pytest.raises(ParseError, match="line 2"):
        parse_text("mode = steady\nthis has no equals sign\n")
    with pytest.raises(ParseError, match="line 3.*first on line 1"):
        parse_text("omega_l = 1\nomega_p = 2\nomega_l = 3\n")


def test_comments_and_blank_lines():
    raw = parse_text("# header\n\nmode = sweep   # trailing\n  omega_p=1\n")
    assert raw == {"mode": "sweep", "omega_p": "1"}


def test_json_form_matches_key_value_form():
    text = "mode = map\nomega_p = 4.5\nomega_l = 10\ndp_points = 11\nphi_points = 5\n"
    payload = json.dumps(
        {"mode": "map", "omega_p": 4.5, "omega_l": 10, "dp_points": 11, "phi_points": 5}
    )
    assert parse_config(text) == parse_config(payload)


def test_bad_json_is_parse_error():
    with pytest.raises(ParseError):
        parse_config("{not json")


def test_negative_rate_propagates():
    with pytest.raises(NegativeRate):
        parse_config("mode = steady\nomega_p = -1\nomega_l = 10\n")


@pytest.mark.parametrize(
    "text, expected",
    [("pi", math.pi), ("pi/2", math.pi / 2), ("-pi/2", -math.pi / 2), ("1.5*pi", 1.5 * math.pi),
     ("2pi", 2 * math.pi), ("0.25", 0.25)],
)
def test_phase_expressions(text, expected):
    cfg = parse_config(f"mode = steady\nomega_p = 1\nomega_l = 1\ndelta_phi = {text}\n")
    assert cfg.params.delta_phi == pytest.approx(expected, abs=1e-15)


def test_delta_phi_conflicts_with_phi_p():
    with pytest.raises(ParseError):
        parse_config("mode = steady\nomega_p = 1\nomega_l = 1\nphi_p = 1\ndelta_phi = 1\n")


def test_mode_grids_filled_from_defaults():
    cfg = parse_config("mode = map\nomega_p = 1\nomega_l = 1\ndp_points = 41\n")
    assert cfg.grid_dp == Grid1D(DEFAULT_DP_GRID.start, DEFAULT_DP_GRID.stop, 41)
    assert cfg.grid_phi == DEFAULT_PHI_GRID


def test_bad_grid_is_parse_error():
    with pytest.raises(ParseError, match="grid_dp"):
        parse_config("mode = sweep\nomega_p = 1\nomega_l = 1\ndp_points = 1\n")
    with pytest.raises(ParseError):
        parse_config("mode = sweep\nomega_p = 1\nomega_l = 1\ndp_points = 2.5\n")


@pytest.mark.parametrize(
    "line", ["tol = 1", "t_final = 0", "dt = -1", "window = blackman", "initial_state = d",
             "subtract_steady = maybe", "format = xml", "mode = plot"],
)
def test_invalid_options(line):
    with pytest.raises(ParseError):
        parse_config(f"mode = spectrum\nomega_p = 1\nomega_l = 1\n{line}\n")


# Hard-coded reference table: (omega_p, omega_l, delta_phi, delta_l, delta_p or None).
REFERENCE = {
    "fig3a": (0.37, 10.0, 0.0, 0.0, None),
    "fig3b": (0.37, 10.0, math.pi / 2, 0.0, None),
    "fig3c": (0.37, 10.0, math.pi, 0.0, None),
    "fig3d": (0.37, 10.0, 3 * math.pi / 2, 0.0, None),
    "fig3e": (0.37, 10.0, 0.0, 0.0, None),
    "fig3f": (0.37, 10.0, 0.0, 0.0, None),
    "fig4a": (4.5, 10.0, 0.0, 0.0, None),
    "fig4b": (4.5, 10.0, math.pi / 2, 0.0, None),
    "fig4c": (4.5, 10.0, math.pi, 0.0, None),
    "fig4d": (4.5, 10.0, -math.pi / 2, 0.0, None),
    "fig4e": (4.5, 10.0, 0.0, 0.0, None),
    "fig5a": (0.1, 10.0, 0.0, 0.0, -20.0),
    "fig5b": (0.1, 10.0, 0.0, 0.0, -15.0),
    "fig5c": (0.1, 10.0, 0.0, 0.0, -10.0),
    "fig5d": (0.1, 10.0, 0.0, 0.0, 0.0),
}
MODES = {"a": "sweep", "b": "sweep", "c": "sweep", "d": "sweep", "e": "map", "f": "map"}


def test_every_preset_listed():
    assert set(PRESETS) == set(REFERENCE)


@pytest.mark.parametrize("pid", sorted(REFERENCE))
def test_preset_fidelity(pid):
    omega_p, omega_l, dphi, delta_l, delta_p = REFERENCE[pid]
    cfg = preset(pid)
    p = cfg.params
    assert (p.omega_p, p.omega_l, p.delta_l) == (omega_p, omega_l, delta_l)
    assert (p.gamma_ca, p.gamma_cb) == (1.0, 1.0)
    assert p.delta_phi == dphi
    if pid.startswith("fig5"):
        assert cfg.mode == "spectrum"
        assert p.delta_p == delta_p
    else:
        assert cfg.mode == MODES[pid[-1]]
        assert cfg.grid_dp == DEFAULT_DP_GRID
        if cfg.mode == "map":
            assert cfg.grid_phi == DEFAULT_PHI_GRID


def test_unknown_preset():
    with pytest.raises(UnknownKey):
        preset("fig6a")


numbers = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
positive = st.floats(0, 50, allow_nan=False, allow_infinity=False)
params_strategy = st.builds(
    SystemParams,
    omega_p=positive,
    omega_l=positive,
    phi_p=numbers,
    phi_l=numbers,
    delta_p=numbers,
    delta_l=numbers,
    gamma_ca=positive,
    gamma_cb=st.floats(1e-3, 50),
)


@st.composite
def grids(draw):
    start = draw(st.floats(-100, 99, allow_nan=False))
    stop = draw(st.floats(start + 0.5, 100, allow_nan=False))
    return Grid1D(start, stop, draw(st.integers(2, 5000)))


configs = st.builds(
    RunConfig,
    mode=st.sampled_from(["steady", "sweep", "map", "spectrum", "dressed", "strong-probe"]),
    params=params_strategy,
    grid_dp=st.none() | grids(),
    grid_phi=st.none() | grids(),
    t_final=st.floats(1e-3, 1e4),
    dt=st.floats(1e-4, 1.0),
    tol=st.floats(1e-12, 1e-4),
    window=st.sampled_from(["rect", "hann"]),
    initial_state=st.sampled_from(["a", "b", "c"]),
    subtract_steady=st.booleans(),
    output=st.none() | st.from_regex(r"[A-Za-z0-9_./-]{1,20}", fullmatch=True),
    format=st.sampled_from(["csv", "json"]),
)


@settings(max_examples=200)
@given(configs)
def test_round_trip(cfg):
    # A mode that needs grids always has them once parsed; give them up front.
    if cfg.mode in ("sweep", "map", "strong-probe") and cfg.grid_dp is None:
        cfg = RunConfig(**{**cfg.__dict__, "grid_dp": DEFAULT_DP_GRID})
    if cfg.mode in ("map", "strong-probe") and cfg.grid_phi is None:
        cfg = RunConfig(**{**cfg.__dict__, "grid_phi": DEFAULT_PHI_GRID})
    text = serialize_config(cfg)
    assert set(parse_text(text)) <= set(KNOWN_KEYS)
    assert parse_config(text) == cfg
