"""Report payloads: axiom verdicts, JSON rendering and CSV rows."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np

from coarsequot.constants import SCHEMA
from coarsequot.errors import ParseError


@dataclass(frozen=True)
class AxiomResult:
    """Verdict for one axiom.

    Attributes:
        name: Axiom label such as ``"III"`` or ``"7"``.
        passed: Whether no violation was found.
        count: Number of violating tuples, or the reported statistic for informational axioms.
        witness: One violating tuple.
        constant: The constant the axiom was checked against, if any.
        informational: Reported only; does not affect the overall verdict.
    """

    name: str
    passed: bool
    count: int = 0
    witness: tuple[object, ...] = ()
    constant: Fraction | None = None
    informational: bool = False
    details: dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        payload: dict[str, object] = {
            "name": self.name,
            "passed": self.passed,
            "count": self.count,
            "witness": list(self.witness),
            "informational": self.informational,
            **self.details,
        }
        if self.constant is not None:
            payload["constant"] = str(self.constant)
        return payload


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts for one structure."""

    subject: str
    results: tuple[AxiomResult, ...]

    @property
    def passed(self) -> bool:
        """Whether every non-informational axiom passed."""
        return all(r.passed for r in self.results if not r.informational)

    def result(self, name: str) -> AxiomResult:
        """The verdict for the named axiom.

        Raises:
            KeyError: If no axiom of that name was checked.
        """
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[str]:
        """Names of the failing hard axioms."""
        return [r.name for r in self.results if not r.passed and not r.informational]

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "subject": self.subject,
            "passed": self.passed,
            "axioms": [r.to_dict() for r in self.results],
        }


def to_jsonable(value: object) -> object:
    """Convert report values to plain JSON types; rationals become exact strings."""
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())  # type: ignore[union-attr]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, float | np.floating):
        return round(float(value), 12)
    if isinstance(value, int):
        return value
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, frozenset | set):
        return sorted(to_jsonable(v) for v in value)  # type: ignore[type-var]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, Iterable):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def render_report(command: str, payload: Mapping[str, object]) -> str:
    """Render a versioned report with sorted keys and no timestamps."""
    body = {"schema": SCHEMA, "command": command, **payload}
    return json.dumps(to_jsonable(body), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_rows(rows: Sequence[Mapping[str, object]]) -> str:
    """Render flat rows as CSV; the columns are the union of keys in first-seen order."""
    columns: list[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: to_jsonable(row.get(k, "")) for k in columns})
    return buffer.getvalue()


def read_report(path: str | Path) -> dict[str, object]:
    """Load a report written by ``render_report``.

    Raises:
        ParseError: If the file is not valid JSON or has no schema tag.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e.msg}", e.lineno) from e
    if not isinstance(payload, dict) or payload.get("schema") != SCHEMA:
        raise ParseError(f"{path}: not a {SCHEMA} report")
    return payload
