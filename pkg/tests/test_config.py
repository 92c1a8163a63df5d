from __future__ import annotations

import json
from pathlib import Path

import pytest

from cli.config import CONFIG_ENV, parse_and_validate, split_file_config
from common.errors import ConfigValidationError
from netmodel.params import Mode

MINIMAL = {
    "lambda": 1,
    "eta": 0.1,
    "nu": 0.25,
    "alpha": 4,
    "delta1": 1,
    "delta2": 1,
    "delta": 0.1,
    "theta": 1,
    "seed": 42,
}


@pytest.fixture
def minimal_file(tmp_path: Path) -> Path:
    path = tmp_path / "minimal.json"
    path.write_text(json.dumps(MINIMAL), encoding="utf-8")
    return path


def test_minimal_json_config(minimal_file):
    run = parse_and_validate(["theory", "--config", str(minimal_file)], environ={})
    assert run.params.k == pytest.approx(10.0)
    assert run.mode is Mode.CENTER
    assert run.n_trials == 10_000
    assert run.threads == 1
    assert run.format == "csv"
    assert run.params.rings == 3


def test_flags_override_file(minimal_file):
    run = parse_and_validate(["outage", "--config", str(minimal_file), "--nu", "0.5", "--lambda", "2"], environ={})
    assert run.params.nu == 0.5
    assert run.params.lam == 2.0


def test_config_from_environment(minimal_file):
    run = parse_and_validate(["theory"], environ={CONFIG_ENV: str(minimal_file), "CLUSTERCOOP_LOG_LEVEL": "debug"})
    assert run.params.seed == 42
    assert run.log_level == "DEBUG"


def test_alpha_two_is_rejected_with_key(minimal_file):
    with pytest.raises(ConfigValidationError) as info:
        parse_and_validate(["theory", "--config", str(minimal_file), "--alpha", "2"], environ={})
    assert info.value.key == "alpha"
    assert info.value.message == "path-loss exponent must exceed 2 (far-field interference diverges)"


@pytest.mark.parametrize(
    "flags, key",
    [
        (["--nu", "0"], "nu"),
        (["--delta1", "5"], "delta2"),
        (["--eta", "-1"], "eta"),
        (["--n-trials", "0"], "n_trials"),
    ],
)
def test_named_validation_errors(minimal_file, flags, key):
    with pytest.raises(ConfigValidationError) as info:
        parse_and_validate(["outage", "--config", str(minimal_file), *flags], environ={})
    assert info.value.key == key


def test_missing_parameter_is_named():
    with pytest.raises(ConfigValidationError) as info:
        parse_and_validate(["theory", "--eta", "0.1"], environ={})
    assert info.value.key in {"lambda", "nu", "alpha", "delta1", "delta2", "delta", "theta"}


def test_yaml_with_params_block(tmp_path):
    path = tmp_path / "sweep.yaml"
    path.write_text(
        "params:\n  lambda: 1.0\n  eta: 0.1\n  nu: 0.25\n  alpha: 4\n  delta1: 1\n  delta2: 2\n"
        "  delta: 0.1\n  theta: 70\nmode: TYPICAL\nk_values: [4, 6, 8]\nhold: eta\n",
        encoding="utf-8",
    )
    run = parse_and_validate(["sweep", "--config", str(path)], environ={})
    assert run.mode is Mode.TYPICAL
    assert run.k_values == [4.0, 6.0, 8.0]
    assert run.hold == "eta"


def test_command_options_are_required(minimal_file):
    with pytest.raises(ConfigValidationError) as info:
        parse_and_validate(["sweep", "--config", str(minimal_file)], environ={})
    assert info.value.key == "k_values"
    with pytest.raises(ConfigValidationError) as info:
        parse_and_validate(["tail", "--config", str(minimal_file), "--x-grid", "1", "--tail-kind", "shot"], environ={})
    assert info.value.key == "r"


def test_unknown_keys_and_bad_files(tmp_path, minimal_file):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({**MINIMAL, "bogus": 1}), encoding="utf-8")
    with pytest.raises(ConfigValidationError) as info:
        parse_and_validate(["theory", "--config", str(path)], environ={})
    assert info.value.key == "bogus"
    with pytest.raises(ConfigValidationError):
        parse_and_validate(["theory", "--config", str(tmp_path / "missing.json")], environ={})
    with pytest.raises(ConfigValidationError):
        parse_and_validate(["nonsense", "--config", str(minimal_file)], environ={})


def test_echo_reproduces_run(minimal_file):
    run = parse_and_validate(["outage", "--config", str(minimal_file), "--mode", "typical"], environ={})
    echoed = run.echo()
    assert echoed["params"]["lambda"] == 1.0
    assert echoed["mode"] == "typical"
    params, options = split_file_config(echoed)
    assert params["seed"] == 42
    assert options["command"] == "outage"
