"""Unit tests for formatting module."""

from io import StringIO

import pytest
from rich.console import Console

from coarsequot import formatting


@pytest.mark.parametrize("command", ["analyze", "walk", "hhs-verify"])
def test_print_ascii_art__highlights_command(command: str) -> None:
    """Test ASCII art prints for each command."""
    formatting.print_ascii_art(command)


def test_print_error__displays_message() -> None:
    """Test error message is printed correctly."""
    formatting.print_error("Test error message")


def test_print_success__displays_message() -> None:
    """Test success message is printed correctly."""
    formatting.print_success("Test success message")


def test_print_status__displays_message() -> None:
    """Test status message is printed correctly."""
    formatting.print_status("Test status message")


def test_create_results_table__one_column_per_header() -> None:
    """Test table creation keeps every header."""
    table = formatting.create_results_table(["Quantity", "Value"], "walk")
    assert len(table.columns) == 2
    assert table.columns[0].justify == "left"
    assert table.columns[1].justify == "right"


def test_format_verdict__styled_words() -> None:
    """Test verdicts render as PASS and FAIL."""
    assert "PASS" in formatting.format_verdict(True)
    assert "FAIL" in formatting.format_verdict(False)


def test_summary_lines__sorted_with_header() -> None:
    """Test summary keys are sorted below a header and flags become verdicts."""
    lines = formatting.summary_lines({"tau": 3, "drift": 0.5, "passed": True})
    assert lines[0] == ("Quantity", "Value")
    assert [key for key, _ in lines[1:]] == ["drift", "passed", "tau"]
    assert "PASS" in lines[2][1]
    assert lines[3] == ("tau", "3")


def test_format_table__plain_text() -> None:
    """Test plain text output skips the header line."""
    buffer = StringIO()
    file_console = Console(file=buffer, force_terminal=False)
    formatting.format_table(
        [("Quantity", "Value"), ("tau", "3")], file_console=file_console, no_table=True
    )
    assert buffer.getvalue() == "tau\t3\n"


def test_format_table__to_file_console() -> None:
    """Test table formatting to file console."""
    buffer = StringIO()
    file_console = Console(file=buffer, force_terminal=True)
    formatting.format_table([("Quantity", "Value"), ("tau", "3")], "walk", file_console)
    assert "tau" in buffer.getvalue()


def test_format_table__empty_input() -> None:
    """Test nothing is printed for no lines."""
    buffer = StringIO()
    formatting.format_table([], file_console=Console(file=buffer))
    assert buffer.getvalue() == ""


def test_get_status_context__returns_status() -> None:
    """Test status context creation."""
    status = formatting.get_status_context("Processing...")
    assert status is not None
