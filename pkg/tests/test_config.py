import pytest
from pydantic import ValidationError

from entlinks.exceptions import ConfigError
from entlinks.models.common import BlockKind, Boundary, InitialKind, QuenchKind
from entlinks.models.experiment import ExperimentConfig
from entlinks.services import config_service

DIMER = """\
name = dimer-small
N = 16
boundary = periodic

[initial_state]
kind = dimer
delta = 0.5

[times]
start = 0
stop = 6
count = 4

[blocks]
kind = lateral
sizes = 2, 4, 8
"""


def _messages(info) -> list[str]:
    return [str(issue) for issue in info.value.issues]


def test_minimal_dimer_config():
    cfg = config_service.parse_config(DIMER)
    assert cfg.name == "dimer-small"
    assert cfg.N == 16
    assert cfg.boundary == Boundary.PERIODIC
    assert cfg.initial_state.kind == InitialKind.DIMER
    assert cfg.initial_state.delta == 0.5
    assert cfg.quench.kind == QuenchKind.H0
    assert cfg.times.times == (0.0, 2.0, 4.0, 6.0)
    assert cfg.blocks.sizes == (2, 4, 8)


def test_defaults():
    cfg = config_service.parse_config("N = 8\n[initial_state]\nkind = bridge\n")
    assert cfg.boundary == Boundary.OPEN
    assert cfg.times.times == (0.0,)
    assert cfg.blocks.kind == BlockKind.ALL_CONTIGUOUS
    assert not cfg.outputs.entropy_table


def test_odd_rainbow_is_rejected():
    text = "N = 127\n[initial_state]\nkind = rainbow\nh = 0.7\n[blocks]\nsizes = 4\n"
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(text)
    (issue,) = info.value.issues
    assert issue.line == 1
    assert "even" in issue.message


def test_duplicate_key_names_both_lines():
    text = DIMER.replace("delta = 0.5\n", "delta = 0.5\ndelta = 0.25\n")
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(text)
    assert _messages(info) == ["line 8: initial_state.delta -> duplicate key (lines 7 and 8)"]


def test_unknown_key_and_section():
    text = DIMER.replace("delta = 0.5\n", "delta = 0.5\ncolour = red\n")
    text += "\n[plots]\nstyle = dark\n"
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(text)
    messages = _messages(info)
    assert "line 8: initial_state.colour -> unknown key" in messages
    assert any("plots -> unknown section" in message for message in messages)


def test_every_problem_is_reported():
    text = """\
N = many
boundary = twisted

[initial_state]
kind = dimer
delta = 0.5
delta = 0.7

[blocks]
kind = explicit
blocks = 0:4, 3-9
"""
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(text)
    lines = [issue.line for issue in info.value.issues]
    assert {1, 2, 7, 11} <= set(lines)
    assert lines == sorted(lines)


def test_malformed_lines():
    with pytest.raises(ConfigError) as info:
        config_service.parse_config("N = 8\njust words\nname =\n[initial_state]\nkind = bridge\n")
    messages = _messages(info)
    assert "line 2: just words -> expected 'key = value'" in messages
    assert "line 3: name -> missing value" in messages


def test_block_size_checks():
    bad_size = DIMER.replace("sizes = 2, 4, 8", "sizes = 2, 40")
    with pytest.raises(ConfigError):
        config_service.parse_config(bad_size)
    off_centre = DIMER.replace("kind = lateral", "kind = central").replace("2, 4, 8", "3")
    with pytest.raises(ConfigError):
        config_service.parse_config(off_centre)


def test_explicit_blocks():
    text = DIMER.replace("kind = lateral\nsizes = 2, 4, 8", "kind = explicit\nblocks = 0:8, 2:4+10:12")
    cfg = config_service.parse_config(text)
    assert cfg.blocks.blocks == (((0, 8),), ((2, 4), (10, 12)))


def test_overrides():
    cfg = config_service.parse_config(DIMER, ["N=32", "initial_state.delta = 0.25", "outputs.entropy_table=true"])
    assert cfg.N == 32
    assert cfg.initial_state.delta == 0.25
    assert cfg.outputs.entropy_table


def test_bad_overrides():
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(DIMER, ["N", "plots.style=dark"])
    messages = _messages(info)
    assert "N -> override must be key=value" in messages
    assert "plots.style -> unknown section" in messages


def test_custom_quench_length():
    text = DIMER + "\n[quench]\nkind = custom\nvalues = 1, 1, 1\n"
    with pytest.raises(ConfigError):
        config_service.parse_config(text)


def test_wave_resolution_below_chain_length():
    with pytest.raises(ConfigError):
        config_service.parse_config(DIMER + "\n[wave]\nresolution = 8\n")


def test_format_round_trip():
    text = DIMER.replace("kind = lateral\nsizes = 2, 4, 8", "kind = explicit\nblocks = 0:8, 2:4+10:12")
    text += "\n[outputs]\nentropy_table = true\n\n[wave]\nresolution = 32\n"
    cfg = config_service.parse_config(text)
    assert config_service.parse_config(config_service.format_config(cfg)) == cfg


def test_block_kind_follows_the_given_key():
    lateral = config_service.parse_config("N = 8\n[initial_state]\nkind = bridge\n[blocks]\nsizes = 2, 4\n")
    assert lateral.blocks.kind == BlockKind.LATERAL
    explicit = config_service.parse_config("N = 8\n[initial_state]\nkind = bridge\n[blocks]\nblocks = 0:2+4:6\n")
    assert explicit.blocks.kind == BlockKind.EXPLICIT


RAINBOW = """\
N = {N}
boundary = open

[initial_state]
kind = rainbow
h = 0.7

[blocks]
kind = lateral
sizes = 4, 400

[wave]
resolution = 16
"""


def test_cross_field_problems_are_reported_together():
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(RAINBOW.format(N=127))
    messages = _messages(info)
    assert messages == [
        "line 1: N -> rainbow couplings need an even number of sites, got N=127",
        "line 10: blocks.sizes -> block size 400 outside 1..127",
        "line 13: wave.resolution -> wave resolution 16 is below N=127",
    ]


def test_cross_field_problem_points_at_its_key():
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(RAINBOW.format(N=128).replace("h = 0.7", "h = -1"))
    lines = {issue.line: issue.message for issue in info.value.issues}
    assert set(lines) == {6, 10, 13}
    assert lines[6].startswith("rainbow h must be")
    assert not any("Value error" in message for message in lines.values())


def test_direct_construction_still_checks_consistency():
    with pytest.raises(ValidationError):
        ExperimentConfig(N=127, initial_state={"kind": "rainbow", "h": 0.7})
