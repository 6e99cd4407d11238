"""End-to-end tests for the constants and plot-data commands."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from coarsequot.cli import cli

FIXTURES = Path(__file__).parent.parent / "fixtures"


class TestConstantsCommand:
    """Test cases for the constants command."""

    @pytest.fixture
    def runner(self) -> CliRunner:
        """Create a CLI runner for testing.

        Returns:
            CliRunner: Click test runner instance.
        """
        return CliRunner()

    def test_constants_zero_base(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test the all-zero base gives the hand-evaluated ledger and τ(1000) = 46."""
        result = runner.invoke(cli, ["constants", "-L", "1000", "-o", str(tmp_path)])
        assert result.exit_code == 0
        report = json.loads((tmp_path / "constants-seed7.json").read_text())
        assert report["summary"]["C"] == "44"
        assert report["summary"]["theta"] == "30"
        assert report["summary"]["tau"] == "46"
        assert report["failing_identities"] == []

    def test_constants_markdown_table(self, runner: CliRunner) -> None:
        """Test the markdown ledger lists the derived constants."""
        result = runner.invoke(cli, ["constants", "-t"])
        assert result.exit_code == 0
        assert "|" in result.output

    def test_constants_base_file_and_sweep(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test a base file with an M₀ sweep keeps the affine constants affine."""
        base = str(FIXTURES / "ledger" / "base.json")
        args = ["constants", "-b", base, "-m", "0", "-m", "10", "-m", "20", "-o", str(tmp_path)]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0
        report = json.loads((tmp_path / "constants-seed7.json").read_text())
        assert report["base"]["K"] == "3/2"
        assert report["m0_sweep"]["samples"] == ["0", "10", "20"]

    def test_constants_rejects_bad_base(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test unknown base keys exit nonzero."""
        base = tmp_path / "base.json"
        base.write_text('{"gamma": 1}')
        result = runner.invoke(cli, ["constants", "-b", str(base)])
        assert result.exit_code != 0

    def test_constants_same_seed_same_bytes(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test reports are byte-identical across runs."""
        for name in ("first", "second"):
            result = runner.invoke(cli, ["constants", "-L", "500", "-o", str(tmp_path / name)])
            assert result.exit_code == 0
        first = (tmp_path / "first" / "constants-seed7.json").read_bytes()
        assert first == (tmp_path / "second" / "constants-seed7.json").read_bytes()


class TestPlotDataCommand:
    """Test cases for the plot-data command."""

    @pytest.fixture
    def runner(self) -> CliRunner:
        """Create a CLI runner for testing.

        Returns:
            CliRunner: Click test runner instance.
        """
        return CliRunner()

    def test_plot_data_collects_seed_sweep(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test reports from three seeds become one CSV sorted by seed."""
        for seed in ("3", "1", "2"):
            args = ["constants", "-L", "1000", "-s", seed, "-o", str(tmp_path)]
            assert runner.invoke(cli, args).exit_code == 0
        output = tmp_path / "series.csv"
        reports = sorted(str(p) for p in tmp_path.glob("constants-seed*.json"))
        result = runner.invoke(cli, ["plot-data", *reports, "-o", str(output)])
        assert result.exit_code == 0
        lines = output.read_text().splitlines()
        assert lines[0].startswith("command,seed,")
        assert [line.split(",")[1] for line in lines[1:]] == ["1", "2", "3"]

    def test_plot_data_rejects_foreign_json(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test a file that is not a report exits nonzero."""
        foreign = tmp_path / "foreign.json"
        foreign.write_text("{}")
        result = runner.invoke(cli, ["plot-data", str(foreign)])
        assert result.exit_code == 1
