"""Core functionality shared by every experiment command."""

import contextlib
import logging
import sys
from collections.abc import Iterator, Mapping
from pathlib import Path

from coarsequot import formatting
from coarsequot.config import ExperimentConfig
from coarsequot.constants import REPORT_SUFFIX, ROWS_SUFFIX
from coarsequot.errors import CoarsequotError, StageError
from coarsequot.results import render_report, render_rows

logger = logging.getLogger(__name__)


class ExperimentBase:
    """Base class for one command run: stages, a report and an exit status."""

    command: str = "experiment"

    def __init__(
        self,
        config: ExperimentConfig,
        out_dir: str | Path | None = None,
        verbose: bool = False,
    ) -> None:
        """Initialize the experiment."""
        self.config = config
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.verbose = verbose
        self.payload: dict[str, object] = {}
        self.rows: list[dict[str, object]] = []
        self.figures: dict[str, object] = {}
        self.violations: list[str] = []
        self.setup_logging()

    def setup_logging(self) -> None:
        """Configure logging based on verbosity level."""
        log_level = logging.DEBUG if self.verbose else logging.INFO
        logging.basicConfig(level=log_level, format="%(asctime)s - %(message)s", datefmt="%H:%M:%S")

    def error_exit(self, message: str) -> None:
        """Exit the program with an error message."""
        formatting.print_error(message)
        sys.exit(1)

    @contextlib.contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Tag any library error raised inside the block with the stage name.

        Raises:
            StageError: Wrapping the library error.
        """
        logger.debug(f"stage {name}: started")
        try:
            yield
        except StageError:
            raise
        except CoarsequotError as e:
            raise StageError(name, e) from e
        logger.debug(f"stage {name}: done")

    def record(self, stage: str, passed: bool | None) -> None:
        """Note a hard check; ``None`` means the check did not apply."""
        if passed is False:
            logger.warning(f"hard check failed in stage {stage}")
            self.violations.append(stage)

    @property
    def passed(self) -> bool:
        """Whether every hard check passed."""
        return not self.violations

    @property
    def stem(self) -> str:
        """File name stem of the report."""
        return f"{self.command}-seed{self.config.seed}"

    def summary(self) -> Mapping[str, object]:
        """Flat key figures for the terminal table; defaults to the first CSV row."""
        values = self.figures
        if not values and self.rows:
            values = {k: v for k, v in self.rows[0].items() if k != "seed"}
        return {**values, "passed": self.passed}

    def save_results(self) -> None:
        """Write the JSON report and the CSV rows, or print a summary table."""
        body = {
            **self.payload,
            "seed": self.config.seed,
            "summary": self.summary(),
            "passed": self.passed,
            "violations": list(self.violations),
        }
        report = render_report(self.command, body)
        if self.out_dir is None:
            formatting.format_table(formatting.summary_lines(self.summary()), self.command)
            return
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            report_path = self.out_dir / f"{self.stem}{REPORT_SUFFIX}"
            report_path.write_text(report)
            if self.rows:
                (self.out_dir / f"{self.stem}{ROWS_SUFFIX}").write_text(render_rows(self.rows))
            formatting.print_success(f"Report saved to {report_path}")
        except OSError as e:
            self.error_exit(f"An error occurred while writing the report: {e}")

    def execute(self) -> None:
        """Run the stages. Must be implemented by subclasses."""
        raise NotImplementedError("Subclasses must implement execute()")

    def run(self) -> None:
        """Run the experiment, save its report and exit nonzero on any hard violation."""
        logger.debug(f"Starting {self.command} with seed {self.config.seed}")
        try:
            with formatting.get_status_context(f"Running {self.command}..."):
                self.execute()
        except StageError as e:
            self.error_exit(f"stage {e.stage}: {e.cause}")
        except CoarsequotError as e:
            self.error_exit(str(e))
        self.save_results()
        if not self.passed:
            self.error_exit(f"hard checks failed: {', '.join(self.violations)}")


def row_of(seed: int, values: Mapping[str, object]) -> dict[str, object]:
    """A CSV row whose first column is the seed."""
    return {"seed": seed, **values}
