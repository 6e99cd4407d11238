"""``(A, B, g)``-matches between paths in free groups, and the walk matching statistics."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from coarsequot.constants import MATCH_WORK_CAP
from coarsequot.errors import BudgetExceededError, NotApplicableError
from coarsequot.graphs.measure import CheckReport
from coarsequot.groups.ball import cayley_ball
from coarsequot.groups.presentation import Presentation
from coarsequot.groups.words import GroupElement, distance_matrix, power_exponent, primitive_root
from coarsequot.randwalk.core import Measure, trial_generators, walk_endpoint

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchReport:
    """Subpaths ``p[i..j]`` and ``q[k..l]`` with ``d_Haus(g·p′, q′) ≤ B``.

    Attributes:
        p_range: Inclusive index range of ``p′``.
        q_range: Inclusive index range of ``q′``.
        g: The translating element.
        A: Smaller of the two subpath diameters.
        B: Achieved Hausdorff distance.
    """

    p_range: tuple[int, int]
    q_range: tuple[int, int]
    g: GroupElement
    A: int
    B: int

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "p_range": list(self.p_range),
            "q_range": list(self.q_range),
            "g": str(self.g),
            "A": self.A,
            "B": self.B,
        }


def _window_diameter(diam: np.ndarray, i: int, j: int) -> int:
    return int(diam[i : j + 1, i : j + 1].max())


def _minimal_windows(diam: np.ndarray, A: Fraction) -> list[tuple[int, int]]:
    """For each start ``i`` the shortest window ``[i, j]`` of diameter at least ``A``."""
    windows = []
    size = diam.shape[0]
    for i in range(size):
        spread = 0
        for j in range(i, size):
            spread = max(spread, int(diam[i : j + 1, j].max()))
            if spread >= A:
                windows.append((i, j))
                break
    return windows


def _runs(mask: np.ndarray) -> Iterator[tuple[int, int]]:
    """Maximal runs of ``True`` as inclusive ranges."""
    start = None
    for index, flag in enumerate(mask.tolist()):
        if flag and start is None:
            start = index
        elif not flag and start is not None:
            yield start, index - 1
            start = None
    if start is not None:
        yield start, len(mask) - 1


def _translators(presentation: Presentation, radius: int) -> list[GroupElement]:
    if radius < 1:
        return [GroupElement.identity()]
    return list(cayley_ball(presentation, radius).elements)


def iter_matches(
    presentation: Presentation,
    p: Sequence[GroupElement],
    q: Sequence[GroupElement],
    A: int | Fraction,
    B: int | Fraction,
    conj_radius: int,
    exclude_identity: bool = False,
) -> Iterator[MatchReport]:
    """Yield the first match found for each translator ``g``, in shortlex order of ``g``.

    Subpaths are scanned at diameter-``A`` granularity: every minimal window of ``p`` of
    diameter at least ``A`` is tried against the maximal runs of ``q`` lying within ``B`` of it.

    Raises:
        NotApplicableError: If the presentation is not free or a free product.
        BudgetExceededError: If the scan would exceed ``MATCH_WORK_CAP`` distance entries.
        ValueError: If ``A`` or ``B`` is negative.
    """
    if not presentation.is_free:
        raise NotApplicableError("match search needs the exact free word metric")
    A, B = Fraction(A), Fraction(B)
    if A < 0 or B < 0:
        raise ValueError("A and B must be non-negative")
    translators = _translators(presentation, conj_radius)
    work = len(translators) * len(p) * len(q)
    if work > MATCH_WORK_CAP:
        raise BudgetExceededError(f"match scan needs {work} distance entries")
    p_diam = distance_matrix(p, p)
    q_diam = distance_matrix(q, q)
    windows = _minimal_windows(p_diam, A)
    for g in translators:
        if exclude_identity and g.is_identity:
            continue
        D = distance_matrix([g * x for x in p], q)
        close = D <= B
        row_ok = close.any(axis=1)
        if not row_ok.any():
            continue
        for i, j in windows:
            if not row_ok[i : j + 1].all():
                continue
            block = close[i : j + 1]
            for k, last in _runs(block.any(axis=0)):
                if not block[:, k : last + 1].any(axis=1).all():
                    continue
                q_spread = _window_diameter(q_diam, k, last)
                if q_spread < A:
                    continue
                sub = D[i : j + 1, k : last + 1]
                hausdorff = int(max(sub.min(axis=1).max(), sub.min(axis=0).max()))
                spread = min(_window_diameter(p_diam, i, j), q_spread)
                yield MatchReport((i, j), (k, last), g, spread, hausdorff)
                break
            else:
                continue
            break


def find_match(
    presentation: Presentation,
    p: Sequence[GroupElement],
    q: Sequence[GroupElement],
    A: int | Fraction,
    B: int | Fraction,
    conj_radius: int,
    exclude_identity: bool = False,
) -> MatchReport | None:
    """The first ``(A, B, g)``-match with ``|g| ≤ conj_radius``, or ``None`` after a full scan."""
    return next(iter_matches(presentation, p, q, A, B, conj_radius, exclude_identity), None)


def self_match_audit(
    presentation: Presentation,
    w: GroupElement,
    A: int | Fraction,
    B: int | Fraction,
    conj_radius: int,
) -> CheckReport:
    """Self-matches of the geodesic ``[1, w]`` must translate by a power of ``w``'s root."""
    gamma = presentation.normal_form(w).prefixes()
    root, _ = primitive_root(w)
    violations = []
    elements = []
    examined = 0
    for match in iter_matches(presentation, gamma, gamma, A, B, conj_radius, True):
        examined += 1
        if power_exponent(match.g, root) is None:
            violations.append((*match.p_range, *match.q_range))
            elements.append(str(match.g))
    return CheckReport("self_match", examined, tuple(violations), {"translators": elements})


@dataclass(frozen=True)
class MatchStatistics:
    """Seeds whose two independent walk geodesics admit an ``(A, Q)``-match."""

    n: int
    A: float
    Q: int
    matched: tuple[bool, ...]

    @property
    def clean_fraction(self) -> float:
        """Fraction of seeds without a match."""
        return 1 - sum(self.matched) / len(self.matched)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "n": self.n,
            "A": self.A,
            "Q": self.Q,
            "seeds": len(self.matched),
            "clean_fraction": self.clean_fraction,
        }


def match_statistics(
    presentation: Presentation,
    measure: Measure,
    n: int,
    seeds: int,
    A: float,
    Q: int,
    conj_radius: int,
    seed: int,
) -> MatchStatistics:
    """Scan pairs of independent walk geodesics, one pair per derived seed."""
    rngs = trial_generators(seed, 2 * seeds)
    matched = []
    for index in range(seeds):
        first = walk_endpoint(measure, n, rngs[2 * index])
        second = walk_endpoint(measure, n, rngs[2 * index + 1])
        found = find_match(presentation, first.prefixes(), second.prefixes(), A, Q, conj_radius)
        matched.append(found is not None)
        if found is not None:
            logger.debug(f"seed {index}: match via {found.g}")
    return MatchStatistics(n, A, Q, tuple(matched))
