"""Experiment configuration: documented defaults, a JSON file and command-line overrides."""

from __future__ import annotations

import dataclasses
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from coarsequot.constants import (
    AAS_FRACTION,
    DEFAULT_BALL_RADIUS,
    DEFAULT_MIN_OVERLAP,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_SEEDS,
    DEFAULT_TRANSLATE_RADIUS,
    DEFAULT_TRIALS,
    DEFAULT_TRIANGLES,
    DEFAULT_WALK_LENGTH,
    DEFAULT_WALKS,
    EPSILON,
    HHS_SAMPLES,
    MATCH_Q,
    MAX_RESAMPLES,
    STDERR_MARGIN,
)
from coarsequot.errors import ConfigError, ParseError
from coarsequot.groups.presentation import Presentation


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment needs besides its input files.

    Attributes:
        presentation: The group walks are taken in.
        walk_length: Walk length ``n``.
        walks: Number ``k`` of independent walks, one relator each.
        seed: Seed of the experiment; every random choice derives from it.
        seeds: Number of derived seeds for pass-fraction statistics.
        trials: Trials of the drift estimate.
        ball_radius: Radius of the Cayley ball standing in for ``X``.
        epsilon: The ``ε`` of ``M₀ = εΔn + 4K + 4E + 2Φ`` and of the ``(εΔn, Q)`` matches.
        match_q: The Hausdorff bound ``Q`` of a match.
        aas_fraction: Pass fraction standing in for an asymptotically-almost-sure claim.
        stderr_margin: Standard errors subtracted from the drift estimate.
        budget: Saturation budget; ``None`` picks ``(radius − |h|)/2``.
        translate_radius: Radius of the translators of each axis.
        min_overlap: Fewest ball vertices a family member must keep.
        triangles: Random quotient triangles lifted per seed.
        samples: Sample count for measurements too large to run exhaustively.
        hhs_samples: Sampled tuples per quotient bound.
        resamples: Walks redrawn at most when a relator fails C′(1/6).
        hhs: Whether the quotient run also builds and checks the quotient hierarchy structure.
    """

    presentation: Presentation = field(default_factory=lambda: Presentation.free(2))
    walk_length: int = DEFAULT_WALK_LENGTH
    walks: int = DEFAULT_WALKS
    seed: int = DEFAULT_SEED
    seeds: int = DEFAULT_SEEDS
    trials: int = DEFAULT_TRIALS
    ball_radius: int = DEFAULT_BALL_RADIUS
    epsilon: float = EPSILON
    match_q: int = MATCH_Q
    aas_fraction: float = AAS_FRACTION
    stderr_margin: int = STDERR_MARGIN
    budget: int | None = None
    translate_radius: int = DEFAULT_TRANSLATE_RADIUS
    min_overlap: int = DEFAULT_MIN_OVERLAP
    triangles: int = DEFAULT_TRIANGLES
    samples: int = DEFAULT_SAMPLES
    hhs_samples: int = HHS_SAMPLES
    resamples: int = MAX_RESAMPLES
    hhs: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise ConfigError(f"epsilon must lie strictly between 0 and 1, got {self.epsilon}")
        if not 0 < self.aas_fraction <= 1:
            raise ConfigError(f"aas_fraction must lie in (0, 1], got {self.aas_fraction}")
        if self.walks < 1:
            raise ConfigError(f"need at least one walk, got {self.walks}")
        if self.trials < 2:
            raise ConfigError(f"the drift estimate needs at least 2 trials, got {self.trials}")
        if self.budget is not None and self.budget < 0:
            raise ConfigError(f"budget must be non-negative, got {self.budget}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.stderr_margin < 0 or self.translate_radius < 0 or self.min_overlap < 0:
            raise ConfigError("margins and radii must be non-negative")
        positive = {
            "walk_length": self.walk_length,
            "seeds": self.seeds,
            "ball_radius": self.ball_radius,
            "match_q": self.match_q,
            "triangles": self.triangles,
            "samples": self.samples,
            "hhs_samples": self.hhs_samples,
            "resamples": self.resamples,
        }
        for name, value in positive.items():
            if value < 1:
                raise ConfigError(f"{name} must be positive, got {value}")

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> ExperimentConfig:
        """Build from a JSON mapping; ``presentation`` is an inline presentation or a file path.

        Raises:
            ConfigError: On unknown keys or values of the wrong type.
        """
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(payload) - names
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        values = dict(payload)
        raw = values.pop("presentation", None)
        if raw is not None:
            try:
                values["presentation"] = (
                    Presentation.read(raw) if isinstance(raw, str) else Presentation.from_dict(raw)
                )
            except (ParseError, OSError) as e:
                raise ConfigError(f"presentation: {e}") from e
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides: Any) -> ExperimentConfig:
        """Read an optional JSON file, then apply the overrides that are not ``None``.

        Raises:
            ConfigError: If the file is unreadable or a value is invalid.
        """
        payload: dict[str, Any] = {}
        if path is not None:
            try:
                payload = json.loads(Path(path).read_text())
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: line {e.lineno}: {e.msg}") from e
            except OSError as e:
                raise ConfigError(f"{path}: {e.strerror}") from e
            if not isinstance(payload, dict):
                raise ConfigError(f"{path}: expected a JSON object")
        payload.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(payload)

    def derived_seed(self, offset: int) -> int:
        """A seed for the ``offset``-th independent sub-experiment."""
        return self.seed * 1_000_003 + offset

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form, embedded in every report."""
        payload: dict[str, object] = {
            f.name: getattr(self, f.name)
            for f in dataclasses.fields(self)
            if f.name != "presentation"
        }
        payload["presentation"] = self.presentation.to_dict()
        return payload
