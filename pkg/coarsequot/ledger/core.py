"""The constants ledger: base inputs, every derived constant, and linearity checks.

All arithmetic is exact over ``fractions.Fraction``, so each formula identity can be checked as
an equality rather than within a tolerance.
"""

from __future__ import annotations

import dataclasses
import json
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from coarsequot.errors import InsufficientSamplesError, NegativeInputError, ParseError

Number = int | Fraction | str

BASE_FIELDS: tuple[str, ...] = (
    "delta",
    "K",
    "M0",
    "R",
    "E",
    "D",
    "Phi",
    "Psi",
    "aleph",
    "Omega",
    "L1",
    "sha",
)

# Sandwich slack between projection distances and their modified versions, in units of θ.
WIDENING_FACTOR: int = 66


@dataclass(frozen=True)
class BaseConstants:
    """Base inputs of the ledger; missing values default to 0.

    Attributes:
        measured: Names of the fields that were measured on an instance rather than supplied.
    """

    delta: Fraction = Fraction(0)
    K: Fraction = Fraction(0)
    M0: Fraction = Fraction(0)
    R: Fraction = Fraction(0)
    E: Fraction = Fraction(0)
    D: Fraction = Fraction(0)
    Phi: Fraction = Fraction(0)
    Psi: Fraction = Fraction(0)
    aleph: Fraction = Fraction(0)
    Omega: Fraction = Fraction(0)
    L1: Fraction = Fraction(0)
    sha: Fraction = Fraction(0)
    measured: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for name in BASE_FIELDS:
            value = Fraction(getattr(self, name))
            if value < 0:
                raise NegativeInputError(f"base constant {name} = {value} is negative")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "measured", frozenset(self.measured))

    @classmethod
    def from_dict(cls, payload: Mapping[str, object]) -> BaseConstants:
        """Build from a JSON mapping; numbers may be ints or fraction strings.

        Raises:
            ParseError: On unknown keys or unparsable values.
        """
        unknown = set(payload) - set(BASE_FIELDS) - {"measured"}
        if unknown:
            raise ParseError(f"unknown base constants: {', '.join(sorted(unknown))}")
        try:
            values = {name: Fraction(str(payload[name])) for name in BASE_FIELDS if name in payload}
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"invalid base constant: {e}") from e
        return cls(**values, measured=frozenset(payload.get("measured", ())))  # type: ignore[arg-type]

    @classmethod
    def read(cls, path: str | Path) -> BaseConstants:
        """Read a base JSON file."""
        try:
            payload = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from e
        return cls.from_dict(payload)

    def replace(self, **changes: Number) -> BaseConstants:
        """A copy with some fields replaced."""
        return dataclasses.replace(self, **{k: Fraction(v) for k, v in changes.items()})

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form with exact fraction strings."""
        payload: dict[str, object] = {name: str(getattr(self, name)) for name in BASE_FIELDS}
        payload["measured"] = sorted(self.measured)
        return payload


@dataclass(frozen=True)
class DerivedConstants:
    """Every constant derived from a ``BaseConstants``."""

    base: BaseConstants
    J: Fraction
    B: Fraction
    script_R: Fraction
    C0: Fraction
    C: Fraction
    theta1: Fraction
    D0: Fraction
    theta: Fraction
    Theta: Fraction
    Theta_tilde: Fraction
    Zhe: Fraction
    C_e: Fraction
    C_p: Fraction
    C_g: Fraction
    m: Fraction
    L0: Fraction
    L_short: Fraction
    L_lift: Fraction
    L_hyp: Fraction
    L_min: Fraction
    L_min_widened: Fraction
    A: Fraction
    L_tilde: Fraction
    beth: Fraction
    c1: Fraction
    c2: Fraction

    def M(self, t: Number) -> Fraction:
        """``M(t) = M₀ + 2K + 2t + 4δ + 2``."""
        b = self.base
        return b.M0 + 2 * b.K + 2 * Fraction(t) + 4 * b.delta + 2

    def tau(self, L: Number) -> Fraction:
        """``τ(L) = (L/10 − 2(B + J·R)) / J``."""
        return (Fraction(L) / 10 - 2 * (self.B + self.J * self.base.R)) / self.J

    def c0(self, t: Number) -> Fraction:
        """Passing-up constant ``c₀(t) = t + 4ℵ + 20E + 2ℶ``."""
        b = self.base
        return Fraction(t) + 4 * b.aleph + 20 * b.E + 2 * self.beth

    def c3(self, t: Number) -> Fraction:
        """Passing-up constant ``c₃(t) = c₀(t) + c₂ + 12E + 2``."""
        return self.c0(t) + self.c2 + 12 * self.base.E + 2

    def to_dict(self, L: Number | None = None) -> dict[str, str]:
        """JSON-ready ledger; ``c0``/``c3`` are given at ``t = 0``, ``tau`` at ``L`` if given."""
        payload = {
            f.name: str(getattr(self, f.name)) for f in dataclasses.fields(self) if f.name != "base"
        }
        payload["c0"] = str(self.c0(0))
        payload["c3"] = str(self.c3(0))
        if L is not None:
            payload["tau"] = str(self.tau(L))
        return payload


DERIVED_NAMES: tuple[str, ...] = tuple(
    f.name for f in dataclasses.fields(DerivedConstants) if f.name != "base"
)


def derive(base: BaseConstants) -> DerivedConstants:
    """Evaluate every ledger formula on ``base``."""
    delta, K, M0, R, E, D = base.delta, base.K, base.M0, base.R, base.E, base.D

    def M(t: Fraction) -> Fraction:
        return M0 + 2 * K + 2 * t + 4 * delta + 2

    J = 2 * K + 10 * delta + 2
    B = M(2 * K + 7 * delta + 1)
    script_R = 2 * delta + 2 * K + D + 2
    C0 = 2 * J + (2 * script_R + 4) * max(B, J)
    C = C0 + 2 * B
    theta1 = 2 * B + J * (2 * delta + K + 1)
    D0 = 2 * K + 4 * delta + M(2 * K + 4 * delta) + 1
    theta = 3 * J * D0 + 2 * B + 2 * J * (3 * delta + 1)
    Theta = theta + 2 * (B + J * R) + J
    Theta_tilde = max(Theta, Fraction(2, 33) * (J * R + B + Theta))
    Zhe = 33 * Theta_tilde
    C_e = Zhe + 2 * Theta
    C_p = 11 * Theta_tilde + 2 * Theta
    C_g = 22 * Theta_tilde + 6 * Zhe + 2 * Theta
    m = 11 * C_e + 6 * C_g + 5 * C_p
    L0 = 4 * (m + Theta) + 1
    L_short = max(L0, 5 * m, 14 * Theta)
    L_lift = max(L_short, 40 * C_g)
    L_hyp = L_lift
    L_min = max(L_hyp, 30 * C, 10 * (2 * (B + J * R) + 2 * J + 1))
    A = max(K, 3 * E) + 4 * E + D
    L_tilde = max(base.L1, 100 * C + base.sha, 20 * (C + E * J) + base.sha)
    beth = 2 * base.aleph + 27 * E
    c1 = 2 * A + 3 * E + 2 * C + J * (K + D + 2 * E) + base.Psi
    return DerivedConstants(
        base=base,
        J=J,
        B=B,
        script_R=script_R,
        C0=C0,
        C=C,
        theta1=theta1,
        D0=D0,
        theta=theta,
        Theta=Theta,
        Theta_tilde=Theta_tilde,
        Zhe=Zhe,
        C_e=C_e,
        C_p=C_p,
        C_g=C_g,
        m=m,
        L0=L0,
        L_short=L_short,
        L_lift=L_lift,
        L_hyp=L_hyp,
        L_min=L_min,
        L_min_widened=L_min + WIDENING_FACTOR * theta,
        A=A,
        L_tilde=L_tilde,
        beth=beth,
        c1=c1,
        c2=2 * c1 + 2 * D + 2 * K,
    )


def _identities(d: DerivedConstants) -> dict[str, Callable[[], bool]]:
    b = d.base
    return {
        "J": lambda: d.J == 2 * b.K + 10 * b.delta + 2,
        "M": lambda: d.M(1) == b.M0 + 2 * b.K + 4 * b.delta + 4,
        "B": lambda: d.B == d.M(2 * b.K + 7 * b.delta + 1),
        "script_R": lambda: d.script_R == 2 * b.delta + 2 * b.K + b.D + 2,
        "C0": lambda: d.C0 == 2 * d.J + (2 * d.script_R + 4) * max(d.B, d.J),
        "C": lambda: d.C == d.C0 + 2 * d.B,
        "theta1": lambda: d.theta1 == 2 * d.B + d.J * (2 * b.delta + b.K + 1),
        "D0": lambda: d.D0 == 2 * b.K + 4 * b.delta + d.M(2 * b.K + 4 * b.delta) + 1,
        "theta": lambda: d.theta == 3 * d.J * d.D0 + 2 * d.B + 2 * d.J * (3 * b.delta + 1),
        "Theta": lambda: d.Theta == d.theta + 2 * (d.B + d.J * b.R) + d.J,
        "Theta_tilde": lambda: (
            d.Theta_tilde == max(d.Theta, 2 * (d.J * b.R + d.B + d.Theta) / 33)
        ),
        "Zhe": lambda: d.Zhe == 33 * d.Theta_tilde,
        "C_e": lambda: d.C_e == d.Zhe + 2 * d.Theta,
        "C_p": lambda: d.C_p == 11 * d.Theta_tilde + 2 * d.Theta,
        "C_g": lambda: d.C_g == 22 * d.Theta_tilde + 6 * d.Zhe + 2 * d.Theta,
        "m": lambda: d.m == 11 * d.C_e + 6 * d.C_g + 5 * d.C_p,
        "L0": lambda: d.L0 == 4 * (d.m + d.Theta) + 1,
        "L_short": lambda: d.L_short == max(d.L0, 5 * d.m, 14 * d.Theta),
        "L_lift": lambda: d.L_lift == max(d.L_short, 40 * d.C_g),
        "L_hyp": lambda: d.L_hyp == d.L_lift,
        "L_min": lambda: (
            d.L_min == max(d.L_hyp, 30 * d.C, 10 * (2 * (d.B + d.J * b.R) + 2 * d.J + 1))
        ),
        "L_min_widened": lambda: d.L_min_widened == d.L_min + 66 * d.theta,
        "tau": lambda: d.J * d.tau(d.L_min) == d.L_min / 10 - 2 * (d.B + d.J * b.R),
        "A": lambda: d.A == max(b.K, 3 * b.E) + 4 * b.E + b.D,
        "L_tilde": lambda: (
            d.L_tilde == max(b.L1, 100 * d.C + b.sha, 20 * (d.C + b.E * d.J) + b.sha)
        ),
        "beth": lambda: d.beth == 2 * b.aleph + 27 * b.E,
        "c0": lambda: d.c0(1) == 1 + 4 * b.aleph + 20 * b.E + 2 * d.beth,
        "c1": lambda: (
            d.c1 == 2 * d.A + 3 * b.E + 2 * d.C + d.J * (b.K + b.D + 2 * b.E) + b.Psi
        ),
        "c2": lambda: d.c2 == 2 * d.c1 + 2 * b.D + 2 * b.K,
        "c3": lambda: d.c3(1) == d.c0(1) + d.c2 + 12 * b.E + 2,
    }


IDENTITY_NAMES: tuple[str, ...] = tuple(_identities(derive(BaseConstants())))


def check_identities(derived: DerivedConstants) -> list[str]:
    """Recompute every formula identity from the other constants; return the failing names."""
    return [name for name, holds in _identities(derived).items() if not holds()]


@dataclass(frozen=True)
class Segment:
    """A maximal run of samples lying on one line."""

    start: Fraction
    end: Fraction
    slope: Fraction
    intercept: Fraction


@dataclass(frozen=True)
class LinearFit:
    """Least-squares fit of a constant against ``M₀``, with its exactly affine segments."""

    name: str
    slope: Fraction
    intercept: Fraction
    max_residual: Fraction
    segments: tuple[Segment, ...]

    @property
    def affine(self) -> bool:
        """Whether every sample lies on a single line."""
        return self.max_residual == 0

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "name": self.name,
            "slope": str(self.slope),
            "intercept": str(self.intercept),
            "max_residual": str(self.max_residual),
            "segments": [
                {k: str(v) for k, v in dataclasses.asdict(s).items()} for s in self.segments
            ],
        }


def _line(p: tuple[Fraction, Fraction], q: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    slope = (q[1] - p[1]) / (q[0] - p[0])
    return slope, p[1] - slope * p[0]


def _segments(points: Sequence[tuple[Fraction, Fraction]]) -> tuple[Segment, ...]:
    segments: list[Segment] = []
    i = 0
    while i < len(points) - 1:
        slope, intercept = _line(points[i], points[i + 1])
        j = i + 1
        while j + 1 < len(points) and points[j + 1][1] == slope * points[j + 1][0] + intercept:
            j += 1
        segments.append(Segment(points[i][0], points[j][0], slope, intercept))
        i = j
    return tuple(segments)


def check_linear_in_M0(base: BaseConstants, which: str, samples: Iterable[Number]) -> LinearFit:
    """Fit a derived constant against ``M₀`` with the other base fields fixed.

    Args:
        base: Base constants; its ``M0`` is replaced by each sample.
        which: A name from ``DERIVED_NAMES``.
        samples: At least three distinct ``M₀`` values.

    Returns:
        LinearFit: The exact least-squares line, its largest residual and the affine pieces.

    Raises:
        InsufficientSamplesError: If fewer than three distinct samples are given.
        KeyError: If ``which`` is not a derived constant name.
    """
    if which not in DERIVED_NAMES:
        raise KeyError(f"unknown derived constant {which!r}")
    xs = sorted({Fraction(s) for s in samples})
    if len(xs) < 3:
        raise InsufficientSamplesError(f"need at least 3 distinct M0 samples, got {len(xs)}")
    points = [(x, getattr(derive(base.replace(M0=x)), which)) for x in xs]
    mean_x = sum(xs, Fraction(0)) / len(xs)
    mean_y = sum((y for _, y in points), Fraction(0)) / len(xs)
    slope = sum(((x - mean_x) * (y - mean_y) for x, y in points), Fraction(0)) / sum(
        ((x - mean_x) ** 2 for x in xs), Fraction(0)
    )
    intercept = mean_y - slope * mean_x
    residual = max(abs(y - (slope * x + intercept)) for x, y in points)
    return LinearFit(which, slope, intercept, residual, _segments(points))


def ledger_table(derived: DerivedConstants) -> str:
    """Markdown table of the base and derived constants."""
    rows = ["| Constant | Value |", "| --- | --- |"]
    for name in BASE_FIELDS:
        marker = " (measured)" if name in derived.base.measured else ""
        rows.append(f"| {name} | {getattr(derived.base, name)}{marker} |")
    for name, value in derived.to_dict().items():
        rows.append(f"| {name} | {value} |")
    return "\n".join(rows) + "\n"
