"""Measured constants and lemma checks on cone-offs."""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction

import networkx as nx
import numpy as np

from coarsequot.coning.core import ConeOff, de_electrify
from coarsequot.constants import PAIR_CAP
from coarsequot.errors import BudgetExceededError
from coarsequot.graphs.measure import (
    CheckReport,
    LemmaCheck,
    Measurement,
    Sampling,
    sample_pairs,
    slim_constant,
)

logger = logging.getLogger(__name__)


def _base_pairs(cone: ConeOff, sampling: Sampling) -> list[tuple[int, int]]:
    return list(sample_pairs(list(cone.base.vertices()), sampling))


def check_spriano(cone: ConeOff, sampling: Sampling | None = None) -> Measurement:
    """Measure ``D``: how far base geodesics stray from de-electrified cone-off geodesics.

    For each examined pair ``x, y`` the cone-off geodesic is de-electrified and the largest
    base distance from a vertex of the interval ``I(x, y)`` to it is recorded.

    Raises:
        BudgetExceededError: If exhaustive sampling would exceed the pair cap.
    """
    sampling = sampling or Sampling.auto(cone.base.vertex_count)
    best = 0
    witness: tuple[int, ...] = ()
    examined = 0
    for x, y in _base_pairs(cone, sampling):
        examined += 1
        lifted = de_electrify(cone, cone.graph.geodesic(x, y)).path()
        to_lift = cone.base.distances_to_set(lifted.vertices)
        spread = np.where(cone.base.interval(x, y), to_lift, -1)
        w = int(np.argmax(spread))
        if spread[w] > best:
            best, witness = int(spread[w]), (x, y, w)
    logger.debug(f"de-electrification defect {best} over {examined} pairs")
    return Measurement(best, sampling.exact, witness, examined)


def cone_slimness(cone: ConeOff, sampling: Sampling | None = None) -> Measurement:
    """Slimness ``δ̂`` of the cone-off graph."""
    return slim_constant(cone.graph, sampling or Sampling.auto(cone.graph.vertex_count))


def _avoids(cone: ConeOff, x: int, y: int, cone_vertex: int, length: int) -> bool:
    """Whether some geodesic from ``x`` to ``y`` misses ``cone_vertex``."""
    view = cone.graph.without([cone_vertex])
    reach = nx.single_source_shortest_path_length(view, x, cutoff=length)
    return y in reach


def _bgi_pairs(cone: ConeOff, sampling: Sampling) -> tuple[list[tuple[int, int]], int]:
    """Sampled base pairs, then each cone vertex against their ends and the other cone vertices.

    Returns:
        tuple: The pairs, and how many of them have a cone vertex as an end.
    """
    pairs = _base_pairs(cone, sampling)
    ends = sorted({v for pair in pairs for v in pair})
    apexes = [cone.cone_of(index) for index in range(len(cone.family))]
    with_apex = [(c, x) for c in apexes for x in ends]
    with_apex += list(itertools.combinations(apexes, 2))
    return pairs + with_apex, len(with_apex)


def strong_bgi_check(
    cone: ConeOff, C: int | Fraction, sampling: Sampling | None = None
) -> CheckReport:
    """Large projections force every cone-off geodesic through the cone vertex.

    For each examined ``(x, y, Y)`` with ``d^π_Y(x, y) > C``, a violation is recorded when some
    cone-off geodesic from ``x`` to ``y`` avoids ``v_Y``. Ends range over base vertices and
    cone vertices other than ``v_Y``; a cone vertex projects as the member it cones.

    Raises:
        BudgetExceededError: If exhaustive sampling would exceed the pair cap.
    """
    sampling = sampling or Sampling.auto(cone.base.vertex_count)
    bound = Fraction(C)
    pairs, apex_pairs = _bgi_pairs(cone, sampling)
    if sampling.exact and len(pairs) * len(cone.family) > PAIR_CAP * 10:
        raise BudgetExceededError(f"{len(pairs) * len(cone.family)} strong BGI tuples")
    violations = []
    triggered = 0
    examined = 0
    for x, y in pairs:
        if x == y:
            continue
        length = cone.graph.distance(x, y)
        first, second = cone.lift_set([x]), cone.lift_set([y])
        for index in range(len(cone.family)):
            apex = cone.cone_of(index)
            if apex in (x, y):
                continue
            examined += 1
            if cone.projector(index).dpi(first, second) <= bound:
                continue
            triggered += 1
            if _avoids(cone, x, y, apex, length):
                violations.append((x, y, index))
    return CheckReport(
        "strong_bgi",
        examined,
        tuple(violations),
        {"bound": str(bound), "triggered": triggered, "cone_pairs": apex_pairs},
    )


def close_in_x_check(
    cone: ConeOff,
    t: int,
    D: int | Fraction,
    K: int | Fraction,
    sampling: Sampling | None = None,
) -> LemmaCheck:
    """Base points near a base geodesic stay near the cone-off geodesic: ``≤ t + D + K + 1``."""
    sampling = sampling or Sampling.auto(cone.base.vertex_count)
    n = cone.base.vertex_count
    observed = 0
    witness: tuple[int, ...] = ()
    for x, y in _base_pairs(cone, sampling):
        hat_geodesic = cone.graph.geodesic(x, y)
        to_hat = cone.graph.distances_to_set(hat_geodesic.vertices)[:n]
        corridor = np.flatnonzero(cone.base.interval(x, y)).tolist()
        near = cone.base.distances_to_set(corridor) <= t
        spread = np.where(near, to_hat, -1)
        w = int(np.argmax(spread))
        if spread[w] > observed:
            observed, witness = int(spread[w]), (x, y, w)
    bound = Fraction(t) + Fraction(D) + Fraction(K) + 1
    return LemmaCheck("close_in_x", bound, observed, witness, {"t": t})


def de_electrification_length_audit(
    cone: ConeOff,
    sampling: Sampling | None = None,
    L: int | Fraction | None = None,
    C: int | Fraction | None = None,
) -> CheckReport:
    """De-electrified paths are at least as long as the base distance of their ends.

    With ``L`` and ``C`` given, pairs whose projections to every family member stay within
    ``L/20`` must also satisfy ``ℓ_X(γ̃) ≤ (L/20 + 2C)·ℓ_X̂(γ)``.
    """
    sampling = sampling or Sampling.auto(cone.base.vertex_count)
    violations = []
    examined = 0
    worst_ratio = Fraction(0)
    factor = None if L is None or C is None else Fraction(L) / 20 + 2 * Fraction(C)
    for x, y in _base_pairs(cone, sampling):
        if x == y:
            continue
        examined += 1
        hat_path = cone.graph.geodesic(x, y)
        length = de_electrify(cone, hat_path).base_length()
        if length < cone.base.distance(x, y):
            violations.append((x, y, length))
            continue
        ratio = Fraction(length, hat_path.length)
        worst_ratio = max(worst_ratio, ratio)
        if factor is None:
            continue
        bounded = all(
            cone.projector(i).dpi([x], [y]) <= Fraction(L) / 20 for i in range(len(cone.family))
        )
        if bounded and ratio > factor:
            violations.append((x, y, length))
    details: dict[str, object] = {"max_ratio": str(worst_ratio)}
    if factor is not None:
        details["ratio_bound"] = str(factor)
    return CheckReport("de_electrification_length", examined, tuple(violations), details)

