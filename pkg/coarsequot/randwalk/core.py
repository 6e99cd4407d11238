"""Measures, random walks, drift and translation length."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from coarsequot.errors import ElementaryMeasureError, InsufficientSamplesError, InvalidMeasureError
from coarsequot.groups.presentation import Presentation
from coarsequot.groups.words import GroupElement, primitive_root
from coarsequot.groups.words import translation_length as cyclic_length

logger = logging.getLogger(__name__)

# Tolerance on the total mass of floating-point measures.
MASS_TOLERANCE: float = 1e-9


@dataclass(frozen=True)
class Measure:
    """A finitely supported probability measure on a group."""

    support: tuple[GroupElement, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.support or len(self.support) != len(self.probabilities):
            raise InvalidMeasureError("support and probabilities must be non-empty and aligned")
        if len(set(self.support)) != len(self.support):
            raise InvalidMeasureError("support elements must be distinct")
        if any(p <= 0 for p in self.probabilities):
            raise InvalidMeasureError("probabilities must be positive")
        if abs(math.fsum(self.probabilities) - 1) > MASS_TOLERANCE:
            raise InvalidMeasureError(f"probabilities sum to {math.fsum(self.probabilities)}")

    @classmethod
    def uniform(cls, elements: Sequence[GroupElement]) -> Measure:
        """Equal mass on each element."""
        return cls(tuple(elements), tuple(1 / len(elements) for _ in elements))

    @classmethod
    def uniform_generators(cls, presentation: Presentation) -> Measure:
        """Equal mass on the generators and their inverses."""
        return cls.uniform(presentation.generators())

    @classmethod
    def point_mass(cls, element: GroupElement) -> Measure:
        """All mass on one element."""
        return cls((element,), (1.0,))

    @property
    def symmetric(self) -> bool:
        """Whether ``g`` and ``g⁻¹`` always carry the same mass."""
        mass = dict(zip(self.support, self.probabilities, strict=True))
        return all(
            abs(mass.get(~g, 0.0) - p) <= MASS_TOLERANCE for g, p in mass.items()
        )

    def generates_cyclic(self) -> bool:
        """Whether the support lies in one cyclic subgroup of a free group."""
        roots = set()
        for g in self.support:
            if g.is_identity:
                continue
            root, _ = primitive_root(g)
            roots.add(min(root, ~root, key=GroupElement.shortlex_key))
        return len(roots) <= 1

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "support": [str(g) for g in self.support],
            "probabilities": list(self.probabilities),
            "symmetric": self.symmetric,
        }


@dataclass(frozen=True)
class WalkSample:
    """One sampled walk: its increments and every prefix endpoint ``w_0 = 1, ..., w_n``."""

    seed: int
    increments: tuple[GroupElement, ...]
    prefix_endpoints: tuple[GroupElement, ...]

    @property
    def endpoint(self) -> GroupElement:
        """``w_n``."""
        return self.prefix_endpoints[-1]

    @property
    def length(self) -> int:
        """Number of steps."""
        return len(self.increments)


def _draw(measure: Measure, n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.choice(len(measure.support), size=n, p=np.asarray(measure.probabilities))


def _reduce_steps(measure: Measure, steps: np.ndarray) -> list[int]:
    stack: list[int] = []
    words = [g.word for g in measure.support]
    for step in steps:
        for letter in words[step]:
            if stack and stack[-1] == -letter:
                stack.pop()
            else:
                stack.append(letter)
    return stack


def sample_walk(measure: Measure, n: int, seed: int) -> WalkSample:
    """Sample ``n`` steps of the walk driven by ``measure``; reproducible from ``seed``."""
    steps = _draw(measure, n, np.random.default_rng(seed))
    increments = tuple(measure.support[s] for s in steps)
    stack: list[int] = []
    prefixes = [GroupElement.identity()]
    for g in increments:
        for letter in g.word:
            if stack and stack[-1] == -letter:
                stack.pop()
            else:
                stack.append(letter)
        prefixes.append(GroupElement(tuple(stack)))
    return WalkSample(seed, increments, tuple(prefixes))


def walk_endpoint(measure: Measure, n: int, rng: np.random.Generator) -> GroupElement:
    """Freely reduced endpoint of one walk, without keeping the prefixes."""
    return GroupElement(tuple(_reduce_steps(measure, _draw(measure, n, rng))))


@dataclass(frozen=True)
class DriftEstimate:
    """Monte-Carlo estimate of the drift ``Δ``.

    Attributes:
        mean: Sample mean of ``|w_n| / n``.
        stderr: Standard error of the mean.
        spread: Sample standard deviation of ``|w_n| / n``.
        samples: Per-trial values.
    """

    n: int
    trials: int
    mean: float
    stderr: float
    spread: float
    samples: tuple[float, ...]

    def conservative(self, margin: int) -> float:
        """``Δ̂ − margin · stderr``."""
        return self.mean - margin * self.stderr

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form without the per-trial values."""
        return {
            "n": self.n,
            "trials": self.trials,
            "drift": self.mean,
            "stderr": self.stderr,
            "spread": self.spread,
        }


def trial_generators(seed: int, trials: int) -> list[np.random.Generator]:
    """Independent generators derived from ``(seed, trial index)``."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(trials)]


def estimate_drift(
    presentation: Presentation, measure: Measure, n: int, trials: int, seed: int
) -> DriftEstimate:
    """Estimate the drift as the mean of ``|w_n| / n`` over independent trials.

    Raises:
        InsufficientSamplesError: If ``trials < 2`` or ``n < 1``.
        ElementaryMeasureError: If a symmetric measure's support generates a cyclic subgroup.
    """
    if trials < 2:
        raise InsufficientSamplesError(f"need at least 2 trials, got {trials}")
    if n < 1:
        raise InsufficientSamplesError("walk length must be positive")
    if measure.symmetric and measure.generates_cyclic():
        raise ElementaryMeasureError("the support generates a cyclic subgroup")
    values = np.array(
        [
            presentation.length(walk_endpoint(measure, n, rng)) / n
            for rng in trial_generators(seed, trials)
        ]
    )
    spread = float(values.std(ddof=1))
    estimate = DriftEstimate(
        n, trials, float(values.mean()), spread / math.sqrt(trials), spread, tuple(values.tolist())
    )
    logger.debug(f"drift {estimate.mean:.4f} ± {estimate.stderr:.4f} at n={n}")
    return estimate


def translation_length(presentation: Presentation, g: GroupElement, k_max: int) -> Fraction:
    """Translation length ``τ(g)``: exact for free groups, ``|g^k_max| / k_max`` otherwise.

    Raises:
        ValueError: If ``k_max < 2``.
    """
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    if presentation.is_free:
        return Fraction(cyclic_length(g))
    return Fraction(presentation.length(g**k_max), k_max)


@dataclass(frozen=True)
class TranslationStatistics:
    """Per-seed translation lengths ``τ(w_n)`` against ``(Δ − margin·σ)·n``.

    ``σ`` is the spread of ``|w_n| / n`` over the same seeds.
    """

    n: int
    threshold: float
    taus: tuple[float, ...]
    lengths: tuple[int, ...]

    @property
    def pass_fraction(self) -> float:
        """Fraction of seeds with ``τ(w_n)`` above the threshold."""
        return sum(tau > self.threshold for tau in self.taus) / len(self.taus)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "n": self.n,
            "threshold": self.threshold,
            "pass_fraction": self.pass_fraction,
            "tau_samples": list(self.taus),
        }


def translation_statistics(
    presentation: Presentation,
    measure: Measure,
    n: int,
    seeds: int,
    drift: float,
    seed: int,
    margin: int,
) -> TranslationStatistics:
    """Sample ``τ(w_n)`` once per derived seed.

    Raises:
        InsufficientSamplesError: If ``seeds < 2``.
    """
    if seeds < 2:
        raise InsufficientSamplesError(f"need at least 2 seeds, got {seeds}")
    endpoints = [walk_endpoint(measure, n, rng) for rng in trial_generators(seed, seeds)]
    lengths = [presentation.length(w) for w in endpoints]
    taus = [float(translation_length(presentation, w, 2)) for w in endpoints]
    spread = float(np.std(np.array(lengths) / n, ddof=1))
    threshold = (drift - margin * spread) * n
    logger.debug(f"translation threshold {threshold:.2f} at n={n}")
    return TranslationStatistics(n, threshold, tuple(taus), tuple(lengths))
