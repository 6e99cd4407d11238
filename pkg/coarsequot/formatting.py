"""Terminal output formatting and styling for coarsequot."""

from collections.abc import Mapping, Sequence

from rich.console import Console
from rich.status import Status
from rich.table import Table

from coarsequot.constants import COMMANDS

# Initialize console
console: Console = Console()

# Color and style definitions
STYLES: dict[str, str] = {
    "ascii_art": "bold cyan",
    "active_command": "bold blue",
    "inactive_command": "dim",
    "error": "bold red",
    "success": "bold green",
    "warning": "bold yellow",
    "header": "bold magenta",
    "passed": "bold green",
    "failed": "bold red",
    "status": "bold green",
}

# Common ASCII art for all commands
ASCII_ART: str = """
╔═╗╔═╗╔═╗╦═╗╔═╗╔═╗╔═╗ ╦ ╦╔═╗╔╦╗
║  ║ ║╠═╣╠╦╝╚═╗║╣ ║═╬╗║ ║║ ║ ║
╚═╝╚═╝╩ ╩╩╚═╚═╝╚═╝╚═╝╚╚═╝╚═╝ ╩"""


def print_ascii_art(command: str = "analyze") -> None:
    """Print ASCII art banner with the active command highlighted."""
    console.print(ASCII_ART, style=STYLES["ascii_art"])

    formatted_commands: list[str] = []
    for cmd in COMMANDS:
        style = "active_command" if cmd.lower() == command.lower() else "inactive_command"
        formatted_commands.append(f"[{STYLES[style]}]{cmd}[/{STYLES[style]}]")

    command_line: str = " | ".join(formatted_commands)
    console.print(f"    {command_line}\n")


def print_error(message: str) -> None:
    """Print an error message."""
    console.print(f"Error: {message}", style=STYLES["error"])


def print_success(message: str) -> None:
    """Print a success message."""
    console.print(message, style=STYLES["success"])


def print_status(message: str) -> None:
    """Print a status message."""
    console.print(message, style=STYLES["warning"])


def create_results_table(columns: Sequence[str], title: str | None = None) -> Table:
    """Create and configure a results table.

    Args:
        columns: Column headers, the first one left-aligned and the rest right-aligned.
        title: Optional table title.

    Returns:
        Table: Configured results table.
    """
    table = Table(title=title, show_header=True, header_style=STYLES["header"], show_lines=True)
    for index, column in enumerate(columns):
        table.add_column(column, justify="left" if index == 0 else "right", overflow="fold")
    return table


def format_verdict(passed: bool) -> str:
    """Render a pass/fail flag as styled markup."""
    style = STYLES["passed"] if passed else STYLES["failed"]
    word = "PASS" if passed else "FAIL"
    return f"[{style}]{word}[/{style}]"


def format_table(
    data_lines: Sequence[tuple[str, ...]],
    title: str | None = None,
    file_console: Console | None = None,
    no_table: bool = False,
) -> None:
    """Format and print a table whose first line holds the headers."""
    output_console: Console = file_console if file_console else console
    if not data_lines:
        return

    if no_table:
        for line in data_lines[1:]:
            output_console.print("\t".join(line))
        return

    table: Table = create_results_table(data_lines[0], title)
    for line in data_lines[1:]:
        table.add_row(*line)
    output_console.print(table)


def summary_lines(summary: Mapping[str, object]) -> list[tuple[str, str]]:
    """Turn a flat summary mapping into table lines with a header row."""
    lines: list[tuple[str, str]] = [("Quantity", "Value")]
    for key in sorted(summary):
        value = summary[key]
        if isinstance(value, bool):
            lines.append((key, format_verdict(value)))
        else:
            lines.append((key, str(value)))
    return lines


def get_status_context(message: str) -> Status:
    """Get a status context for long-running operations.

    Args:
        message: Status message to display.

    Returns:
        Status: Rich status context object.
    """
    return console.status(f"[{STYLES['status']}]{message}[/{STYLES['status']}]", spinner="dots")
