"""Unit tests for collecting report rows."""

from pathlib import Path

import pytest

from coarsequot.errors import ParseError
from coarsequot.reports import PlotData, collect_rows, report_row
from coarsequot.results import render_report


def write_report(directory: Path, command: str, seed: int, **summary: object) -> Path:
    """Write a minimal report.

    Returns:
        Path: The report file.
    """
    path = directory / f"{command}-seed{seed}.json"
    path.write_text(render_report(command, {"seed": seed, "summary": summary}))
    return path


def test_report_row__flattens_summary(tmp_path: Path) -> None:
    """Test command and seed lead the row."""
    path = write_report(tmp_path, "walk", 3, drift=0.5, passed=True)
    assert report_row(path) == {"command": "walk", "seed": 3, "drift": 0.5, "passed": True}


def test_report_row__missing_summary(tmp_path: Path) -> None:
    """Test a report without a summary raises."""
    path = tmp_path / "empty.json"
    path.write_text(render_report("walk", {"seed": 1}))
    with pytest.raises(ParseError):
        report_row(path)


def test_collect_rows__sorted_by_seed_then_command(tmp_path: Path) -> None:
    """Test rows come out ordered regardless of the order given."""
    paths = [
        write_report(tmp_path, "walk", 2),
        write_report(tmp_path, "quotient", 1),
        write_report(tmp_path, "analyze", 2),
    ]
    rows = collect_rows(paths)
    assert [(r["seed"], r["command"]) for r in rows] == [
        (1, "quotient"),
        (2, "analyze"),
        (2, "walk"),
    ]


def test_collect_rows__needs_reports() -> None:
    """Test an empty selection raises."""
    with pytest.raises(ParseError):
        collect_rows([])


def test_plot_data__writes_csv(tmp_path: Path) -> None:
    """Test the CSV output has one line per report plus a header."""
    paths = [write_report(tmp_path, "walk", s, tau=s) for s in (2, 1)]
    output = tmp_path / "series.csv"
    rows = PlotData(paths, output_file=output).run()
    assert len(rows) == 2
    assert output.read_text().splitlines() == ["command,seed,tau", "walk,1,1", "walk,2,2"]


def test_plot_data__prints_table(tmp_path: Path) -> None:
    """Test the table output runs without a file."""
    paths = [write_report(tmp_path, "walk", 1, tau=1)]
    assert PlotData(paths, no_table=True).run() == [{"command": "walk", "seed": 1, "tau": 1}]
