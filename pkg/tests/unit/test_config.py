"""Unit tests for config module."""

import json
from pathlib import Path

import pytest

from coarsequot import constants
from coarsequot.config import ExperimentConfig
from coarsequot.errors import ConfigError
from coarsequot.groups.presentation import PresentationKind


def test_defaults__documented_values() -> None:
    """Test defaults come from the constants module."""
    config = ExperimentConfig()
    assert config.seed == constants.DEFAULT_SEED
    assert config.epsilon == constants.EPSILON
    assert config.match_q == constants.MATCH_Q
    assert config.presentation.kind is PresentationKind.FREE
    assert config.presentation.rank == 2
    assert config.budget is None
    assert config.hhs is False


@pytest.mark.parametrize(
    "overrides",
    [
        {"epsilon": 0.0},
        {"epsilon": 1.0},
        {"aas_fraction": 0.0},
        {"walks": 0},
        {"trials": 1},
        {"budget": -1},
        {"seed": -3},
        {"ball_radius": 0},
        {"min_overlap": -1},
    ],
)
def test_validation__rejects_out_of_range(overrides: dict[str, object]) -> None:
    """Test out-of-range values raise ConfigError."""
    with pytest.raises(ConfigError):
        ExperimentConfig(**overrides)  # type: ignore[arg-type]


def test_from_dict__inline_presentation() -> None:
    """Test an inline presentation is parsed."""
    config = ExperimentConfig.from_dict({"presentation": {"rank": 3}, "walk_length": 40})
    assert config.presentation.rank == 3
    assert config.walk_length == 40


def test_from_dict__unknown_keys() -> None:
    """Test unknown keys are named in the error."""
    with pytest.raises(ConfigError, match="colour"):
        ExperimentConfig.from_dict({"colour": "red"})


def test_from_dict__bad_presentation() -> None:
    """Test a malformed presentation becomes a ConfigError."""
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"presentation": {"relators": ["ab"]}})


def test_load__file_then_overrides(tmp_path: Path) -> None:
    """Test file values apply first and non-None overrides win."""
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 11, "walks": 2}))
    config = ExperimentConfig.load(path, seed=13, walks=None)
    assert config.seed == 13
    assert config.walks == 2


def test_load__presentation_file(tmp_path: Path) -> None:
    """Test a presentation given as a path is read from disk."""
    pres = tmp_path / "surface.json"
    pres.write_text(json.dumps({"rank": 4, "relators": ["abABcdCD"]}))
    config = ExperimentConfig.load(presentation=str(pres))
    assert config.presentation.kind is PresentationKind.SMALL_CANCELLATION


def test_load__invalid_files(tmp_path: Path) -> None:
    """Test missing files, broken JSON and non-objects raise ConfigError."""
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ConfigError, match="line 1"):
        ExperimentConfig.load(broken)
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(listed)


def test_derived_seed__distinct_and_stable() -> None:
    """Test derived seeds differ by offset and depend only on the seed."""
    config = ExperimentConfig(seed=2)
    seeds = [config.derived_seed(i) for i in range(5)]
    assert len(set(seeds)) == 5
    assert seeds == [ExperimentConfig(seed=2).derived_seed(i) for i in range(5)]
    assert ExperimentConfig(seed=3).derived_seed(0) not in seeds


def test_to_dict__embeds_presentation() -> None:
    """Test the report form carries the presentation as a mapping."""
    payload = ExperimentConfig(seed=4).to_dict()
    assert payload["seed"] == 4
    assert isinstance(payload["presentation"], dict)
    assert ExperimentConfig.from_dict(payload) == ExperimentConfig(seed=4)
