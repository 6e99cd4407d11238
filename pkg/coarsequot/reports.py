"""Collect the summary rows of many reports into one tidy series."""

import logging
from collections.abc import Iterable
from pathlib import Path

from coarsequot import formatting
from coarsequot.errors import ParseError
from coarsequot.results import read_report, render_rows, to_jsonable

logger = logging.getLogger(__name__)


def report_row(path: str | Path) -> dict[str, object]:
    """The ``seed`` and ``summary`` of one report as a flat row.

    Raises:
        ParseError: If the report has no summary.
    """
    report = read_report(path)
    summary = report.get("summary")
    if not isinstance(summary, dict):
        raise ParseError(f"{path}: report has no summary")
    return {"command": report.get("command"), "seed": report.get("seed"), **summary}


def collect_rows(paths: Iterable[str | Path]) -> list[dict[str, object]]:
    """Rows of every report, sorted by seed and then by command.

    Raises:
        ParseError: If no paths are given or any report is unreadable.
    """
    rows = [report_row(path) for path in paths]
    if not rows:
        raise ParseError("no reports given")
    rows.sort(key=lambda row: (_seed_key(row.get("seed")), str(row.get("command"))))
    logger.debug(f"collected {len(rows)} rows")
    return rows


def _seed_key(seed: object) -> int:
    return seed if isinstance(seed, int) else -1


class PlotData:
    """The plot-data command: read reports, write or print their rows."""

    def __init__(
        self,
        report_paths: Iterable[str | Path],
        output_file: str | Path | None = None,
        no_table: bool = False,
        verbose: bool = False,
    ) -> None:
        """Initialize with the reports to collect."""
        self.report_paths = [Path(p) for p in report_paths]
        self.output_file = Path(output_file) if output_file is not None else None
        self.no_table = no_table
        self.verbose = verbose
        logging.basicConfig(
            level=logging.DEBUG if verbose else logging.INFO,
            format="%(asctime)s - %(message)s",
            datefmt="%H:%M:%S",
        )

    def run(self) -> list[dict[str, object]]:
        """Collect the rows and write them as CSV, or print them as a table.

        Raises:
            ParseError: If any report is unreadable.
        """
        rows = collect_rows(self.report_paths)
        text = render_rows(rows)
        if self.output_file is not None:
            self.output_file.write_text(text)
            formatting.print_success(f"{len(rows)} rows saved to {self.output_file}")
            return rows
        columns = list(dict.fromkeys(key for row in rows for key in row))
        lines = [tuple(columns)]
        lines.extend(tuple(_cell(row.get(c, "")) for c in columns) for row in rows)
        formatting.format_table(lines, "plot-data", no_table=self.no_table)
        return rows


def _cell(value: object) -> str:
    converted = to_jsonable(value)
    return "" if converted is None else str(converted)
