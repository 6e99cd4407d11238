"""Unit tests for core module."""

import importlib
import json
import logging
from pathlib import Path

import pytest

from coarsequot import constants
from coarsequot.config import ExperimentConfig
from coarsequot.core import ExperimentBase, row_of
from coarsequot.errors import InvalidGraphError, StageError


class MockExperiment(ExperimentBase):
    """Mock experiment for testing ExperimentBase.

    Attributes:
        fail_check: Whether execute records a failing hard check.
    """

    command = "mock"
    fail_check = False

    def execute(self) -> None:
        """Mock execute implementation.

        Records one check and one CSV row.
        """
        with self.stage("measure"):
            self.payload["value"] = 3
        self.record("measure", not self.fail_check)
        self.record("optional", None)
        self.figures["value"] = 3
        self.rows = [row_of(self.config.seed, self.figures)]


@pytest.fixture
def experiment(tmp_path: Path) -> MockExperiment:
    """Create a mock experiment writing into a temporary directory.

    Returns:
        MockExperiment: Mock experiment instance.
    """
    return MockExperiment(ExperimentConfig(seed=5), out_dir=tmp_path)


def test_experiment_initialization__sets_attributes(experiment: MockExperiment) -> None:
    """Test experiment initializes with empty results."""
    assert experiment.config.seed == 5
    assert experiment.payload == {}
    assert experiment.rows == []
    assert experiment.violations == []
    assert experiment.passed


def test_stem__command_and_seed(experiment: MockExperiment) -> None:
    """Test the report stem carries the command and the seed."""
    assert experiment.stem == "mock-seed5"


def test_setup_logging__sets_debug_level_when_verbose(tmp_path: Path) -> None:
    """Test logging setup uses DEBUG level when verbose."""
    logging.getLogger().handlers.clear()
    logging.getLogger().setLevel(logging.WARNING)
    MockExperiment(ExperimentConfig(), out_dir=tmp_path, verbose=True)
    assert logging.getLogger().level == logging.DEBUG


def test_stage__wraps_library_errors(experiment: MockExperiment) -> None:
    """Test a library error inside a stage is tagged with the stage name."""
    with pytest.raises(StageError) as info:
        with experiment.stage("load"):
            raise InvalidGraphError("bad edge")
    assert info.value.stage == "load"
    assert isinstance(info.value.cause, InvalidGraphError)


def test_stage__leaves_other_errors(experiment: MockExperiment) -> None:
    """Test non-library errors pass through untouched."""
    with pytest.raises(RuntimeError):
        with experiment.stage("load"):
            raise RuntimeError("boom")


def test_record__only_false_is_a_violation(experiment: MockExperiment) -> None:
    """Test a check that does not apply is not a failure."""
    experiment.record("skipped", None)
    experiment.record("ok", True)
    assert experiment.passed
    experiment.record("broken", False)
    assert experiment.violations == ["broken"]
    assert not experiment.passed


def test_record__warns_on_module_logger(
    experiment: MockExperiment, caplog: pytest.LogCaptureFixture
) -> None:
    """Test a failed check is logged under the module name, not the root logger."""
    with caplog.at_level(logging.WARNING, logger="coarsequot.core"):
        experiment.record("broken", False)
    assert [record.name for record in caplog.records] == ["coarsequot.core"]
    assert "broken" in caplog.text


@pytest.mark.parametrize(
    "module",
    [
        "coarsequot.coning.runner",
        "coarsequot.graphs.runner",
        "coarsequot.hhs.runner",
        "coarsequot.ledger.runner",
        "coarsequot.projcomplex.runner",
        "coarsequot.randwalk.runner",
        "coarsequot.spinning.runner",
    ],
)
def test_runners__log_under_their_module(module: str) -> None:
    """Test every command runner owns a logger named after its module."""
    assert importlib.import_module(module).logger.name == module


def test_run__writes_report_and_rows(experiment: MockExperiment, tmp_path: Path) -> None:
    """Test a passing run writes a versioned report and a CSV."""
    experiment.run()
    report = json.loads((tmp_path / "mock-seed5.json").read_text())
    assert report["schema"] == constants.SCHEMA
    assert report["command"] == "mock"
    assert report["seed"] == 5
    assert report["passed"] is True
    assert report["summary"] == {"value": 3, "passed": True}
    assert (tmp_path / "mock-seed5.csv").read_text().splitlines() == ["seed,value", "5,3"]


def test_run__reports_are_byte_identical(tmp_path: Path) -> None:
    """Test two runs with one seed write identical reports."""
    first, second = tmp_path / "first", tmp_path / "second"
    MockExperiment(ExperimentConfig(seed=5), out_dir=first).run()
    MockExperiment(ExperimentConfig(seed=5), out_dir=second).run()
    assert (first / "mock-seed5.json").read_bytes() == (second / "mock-seed5.json").read_bytes()


def test_run__exits_nonzero_on_violation(experiment: MockExperiment, tmp_path: Path) -> None:
    """Test a failing hard check still writes the report, then exits."""
    experiment.fail_check = True
    with pytest.raises(SystemExit):
        experiment.run()
    report = json.loads((tmp_path / "mock-seed5.json").read_text())
    assert report["violations"] == ["measure"]


def test_run__handles_stage_error(tmp_path: Path) -> None:
    """Test a stage error exits with an error message."""

    class FailingExperiment(ExperimentBase):
        """Experiment that always fails."""

        def execute(self) -> None:
            with self.stage("build"):
                raise InvalidGraphError("self-loop")

    with pytest.raises(SystemExit):
        FailingExperiment(ExperimentConfig(), out_dir=tmp_path).run()


def test_save_results__without_out_dir() -> None:
    """Test results print as a table without an output directory."""
    experiment = MockExperiment(ExperimentConfig())
    experiment.execute()
    experiment.save_results()


def test_save_results__handles_write_error(tmp_path: Path) -> None:
    """Test an unwritable output directory exits."""
    blocker = tmp_path / "file"
    blocker.write_text("")
    experiment = MockExperiment(ExperimentConfig(), out_dir=blocker / "out")
    with pytest.raises(SystemExit):
        experiment.save_results()


def test_summary__defaults_to_first_row(experiment: MockExperiment) -> None:
    """Test the summary falls back to the first row without its seed."""
    experiment.rows = [{"seed": 5, "tau": 2}]
    assert experiment.summary() == {"tau": 2, "passed": True}


def test_execute__base_is_abstract(tmp_path: Path) -> None:
    """Test the base class refuses to execute."""
    with pytest.raises(NotImplementedError):
        ExperimentBase(ExperimentConfig(), out_dir=tmp_path).execute()


def test_error_exit__exits_with_error_message(experiment: MockExperiment) -> None:
    """Test error_exit exits with error message."""
    with pytest.raises(SystemExit):
        experiment.error_exit("Test error")
