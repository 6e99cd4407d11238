"""End-to-end tests for the analyze, coneoff and projcplx commands."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from coarsequot.cli import cli

FIXTURES = Path(__file__).parent.parent / "fixtures"
TREE = str(FIXTURES / "graphs" / "tree.edges")
TREE_FAMILY = str(FIXTURES / "graphs" / "tree_family.json")


def load_report(directory: Path, stem: str) -> dict[str, object]:
    """Read a written report.

    Returns:
        dict[str, object]: The report payload.
    """
    return json.loads((directory / f"{stem}.json").read_text())


class TestAnalyzeCommand:
    """Test cases for the analyze command."""

    @pytest.fixture
    def runner(self) -> CliRunner:
        """Create a CLI runner for testing.

        Returns:
            CliRunner: Click test runner instance.
        """
        return CliRunner()

    def test_analyze_help_displays_help(self, runner: CliRunner) -> None:
        """Test analyze displays help text with examples."""
        result = runner.invoke(cli, ["analyze", "--help"])
        assert result.exit_code == 0
        assert "Usage:" in result.output
        assert "Examples:" in result.output

    def test_analyze_tree_with_family(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test a tree measures zero slimness, keeps both members and passes every lemma."""
        result = runner.invoke(cli, ["analyze", TREE, "-f", TREE_FAMILY, "-o", str(tmp_path)])
        assert result.exit_code == 0
        report = load_report(tmp_path, "analyze-seed7")
        assert report["summary"]["delta"] == "0"
        assert report["summary"]["members"] == 2
        names = {lemma["name"] for lemma in report["lemmas"]}
        assert {"neighborhood_quasiconvex", "separation_propagation"} <= names
        assert all(lemma["holds"] for lemma in report["lemmas"])
        assert (tmp_path / "analyze-seed7.csv").exists()

    def test_analyze_writes_dot(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test the DOT export is written next to the summary."""
        dot = tmp_path / "tree.dot"
        cycle = str(FIXTURES / "graphs" / "cycle6.edges")
        result = runner.invoke(cli, ["analyze", cycle, "-d", str(dot)])
        assert result.exit_code == 0
        assert dot.read_text().startswith("graph")

    def test_analyze_rejects_malformed_edges(self, runner: CliRunner) -> None:
        """Test a malformed edge list exits nonzero."""
        result = runner.invoke(cli, ["analyze", str(FIXTURES / "graphs" / "malformed.edges")])
        assert result.exit_code != 0
        assert "line 3" in result.output

    def test_analyze_rejects_missing_file(self, runner: CliRunner) -> None:
        """Test a missing graph file is a usage error."""
        result = runner.invoke(cli, ["analyze", "/nonexistent.edges"])
        assert result.exit_code != 0


class TestConeOffCommand:
    """Test cases for the coneoff command."""

    @pytest.fixture
    def runner(self) -> CliRunner:
        """Create a CLI runner for testing.

        Returns:
            CliRunner: Click test runner instance.
        """
        return CliRunner()

    def test_coneoff_tree(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test coning both subtrees off passes every check."""
        result = runner.invoke(cli, ["coneoff", TREE, TREE_FAMILY, "-o", str(tmp_path)])
        assert result.exit_code == 0
        report = load_report(tmp_path, "coneoff-seed7")
        assert report["cones"] == 2
        assert report["passed"] is True

    def test_coneoff_rejects_negative_radius(self, runner: CliRunner) -> None:
        """Test a negative closeness radius aborts."""
        result = runner.invoke(cli, ["coneoff", TREE, TREE_FAMILY, "-t", "-1"])
        assert result.exit_code != 0


class TestProjComplexCommand:
    """Test cases for the projcplx command."""

    @pytest.fixture
    def runner(self) -> CliRunner:
        """Create a CLI runner for testing.

        Returns:
            CliRunner: Click test runner instance.
        """
        return CliRunner()

    def test_projcplx_explicit_family(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test the explicit family passes at θ = 10."""
        table = str(FIXTURES / "families" / "explicit.json")
        result = runner.invoke(cli, ["projcplx", "-e", table, "--theta", "10", "-o", str(tmp_path)])
        assert result.exit_code == 0
        report = load_report(tmp_path, "projcplx-seed7")
        assert report["family"]["axioms"]["passed"] is True

    def test_projcplx_explicit_family_fails_below_threshold(
        self, runner: CliRunner, tmp_path: Path
    ) -> None:
        """Test the Behrstock inequality fails at θ = 5 and the run exits nonzero."""
        table = str(FIXTURES / "families" / "explicit.json")
        result = runner.invoke(cli, ["projcplx", "-e", table, "--theta", "5", "-o", str(tmp_path)])
        assert result.exit_code == 1
        assert load_report(tmp_path, "projcplx-seed7")["passed"] is False

    def test_projcplx_explicit_family_needs_theta(self, runner: CliRunner) -> None:
        """Test an explicit family without a θ exits nonzero."""
        table = str(FIXTURES / "families" / "explicit.json")
        result = runner.invoke(cli, ["projcplx", "-e", table])
        assert result.exit_code != 0

    def test_projcplx_rejects_both_inputs(self, runner: CliRunner) -> None:
        """Test a graph and an explicit table together abort."""
        table = str(FIXTURES / "families" / "explicit.json")
        result = runner.invoke(cli, ["projcplx", "-g", TREE, "-f", TREE_FAMILY, "-e", table])
        assert result.exit_code != 0

    def test_projcplx_rejects_bad_theta(self, runner: CliRunner) -> None:
        """Test a non-numeric θ is a usage error."""
        table = str(FIXTURES / "families" / "explicit.json")
        result = runner.invoke(cli, ["projcplx", "-e", table, "--theta", "big"])
        assert result.exit_code == 2

    def test_projcplx_geometric_tree(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test the coned tree family checks out at ledger constants."""
        args = ["projcplx", "-g", TREE, "-f", TREE_FAMILY, "-o", str(tmp_path)]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0
        report = load_report(tmp_path, "projcplx-seed7")
        assert report["geometric"]["size"] == 2
