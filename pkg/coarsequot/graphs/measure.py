"""Hyperbolicity, quasiconvexity, projections and separation on metric graphs."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction

import numpy as np

from coarsequot.constants import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    EXHAUSTIVE_VERTEX_CAP,
    GEODESIC_ENUMERATION_CAP,
    PAIR_CAP,
    TRIPLE_CAP,
)
from coarsequot.errors import BudgetExceededError, EmptySubspaceError, FamilyTooSmallError
from coarsequot.graphs.core import MetricGraph, Path, ProjectionSet, Subspace

logger = logging.getLogger(__name__)


class SamplingMode(StrEnum):
    """How tuples are chosen by the measurement routines."""

    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"


@dataclass(frozen=True)
class Sampling:
    """Sampling plan: every tuple, or ``count`` tuples drawn with ``seed``."""

    mode: SamplingMode = SamplingMode.EXHAUSTIVE
    count: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED

    @classmethod
    def exhaustive(cls) -> Sampling:
        """Examine every tuple."""
        return cls(SamplingMode.EXHAUSTIVE)

    @classmethod
    def random(cls, count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> Sampling:
        """Examine ``count`` seeded random tuples."""
        return cls(SamplingMode.RANDOM, count, seed)

    @classmethod
    def auto(
        cls, vertex_count: int, count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
    ) -> Sampling:
        """Exhaustive for small graphs, random otherwise."""
        if vertex_count <= EXHAUSTIVE_VERTEX_CAP and vertex_count**3 <= TRIPLE_CAP:
            return cls.exhaustive()
        return cls.random(count, seed)

    @property
    def exact(self) -> bool:
        """Whether results are exact rather than lower bounds."""
        return self.mode is SamplingMode.EXHAUSTIVE

    def rng(self) -> np.random.Generator:
        """A fresh generator for this plan."""
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class Measurement:
    """A measured constant.

    Attributes:
        value: The measured value.
        exact: False when only a sample was examined, making ``value`` a lower bound.
        witness: A tuple realising ``value``.
        examined: Number of tuples examined.
    """

    value: int | Fraction
    exact: bool
    witness: tuple[int, ...] = ()
    examined: int = 0

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "value": str(self.value),
            "exact": self.exact,
            "witness": list(self.witness),
            "examined": self.examined,
        }


@dataclass(frozen=True)
class LemmaCheck:
    """Outcome of checking one quantitative inequality on an instance."""

    name: str
    bound: Fraction
    observed: int | Fraction
    witness: tuple[int, ...] = ()
    details: dict[str, object] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """Whether the observed value stays within the bound."""
        return self.observed <= self.bound

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "name": self.name,
            "bound": str(self.bound),
            "observed": str(self.observed),
            "holds": self.holds,
            "witness": list(self.witness),
            **self.details,
        }


# Geodesic-DAG bottleneck rows


def _bottleneck_row(graph: MetricGraph, a: int, b: int) -> np.ndarray:
    """For every vertex ``w``, the largest ``d(w, p)`` over geodesics ``p`` from ``a`` to ``b``."""
    da = graph.distances_from(a)
    mask = graph.interval(a, b)
    order = sorted(np.flatnonzero(mask).tolist(), key=lambda v: da[v])
    best: dict[int, np.ndarray] = {a: graph.distances_from(a)}
    for v in order:
        if v == a:
            continue
        predecessors = [p for p in graph.neighbors(v) if mask[p] and da[p] == da[v] - 1]
        reach = np.max(np.vstack([best[p] for p in predecessors]), axis=0)
        best[v] = np.minimum(graph.distances_from(v), reach)
    return best[b]


class _BottleneckCache:
    def __init__(self, graph: MetricGraph) -> None:
        self.graph = graph
        self.rows: dict[tuple[int, int], np.ndarray] = {}

    def __call__(self, a: int, b: int) -> np.ndarray:
        key = (a, b) if a <= b else (b, a)
        if key not in self.rows:
            self.rows[key] = _bottleneck_row(self.graph, *key)
        return self.rows[key]


def _triples(graph: MetricGraph, sampling: Sampling) -> Iterable[tuple[int, int, int]]:
    n = graph.vertex_count
    if sampling.exact:
        if n**3 > TRIPLE_CAP:
            raise BudgetExceededError(f"{n**3} triples exceed the cap of {TRIPLE_CAP}")
        for x, y in itertools.combinations(range(n), 2):
            for z in range(n):
                yield x, y, z
        return
    rng = sampling.rng()
    for _ in range(sampling.count):
        x, y, z = (int(v) for v in rng.integers(0, n, size=3))
        yield x, y, z


def slim_constant(graph: MetricGraph, sampling: Sampling | None = None) -> Measurement:
    """Least ``δ`` making every examined geodesic triangle ``δ``-slim.

    Every geodesic between the triangle's corners is considered, so under exhaustive
    sampling the result is the exact slimness constant of the graph.

    Args:
        graph: A connected graph.
        sampling: Tuple selection; defaults to ``Sampling.auto``.

    Returns:
        Measurement: The slimness constant with a witness ``(x, y, z, w)``.

    Raises:
        BudgetExceededError: If exhaustive sampling would exceed the triple cap.
    """
    sampling = sampling or Sampling.auto(graph.vertex_count)
    rows = _BottleneckCache(graph)
    delta = 0
    witness: tuple[int, ...] = (0, 0, 0, 0)
    examined = 0
    for x, y, z in _triples(graph, sampling):
        examined += 1
        mask = graph.interval(x, y)
        spread = np.minimum(rows(x, z), rows(z, y))
        spread = np.where(mask, spread, -1)
        w = int(np.argmax(spread))
        if spread[w] > delta:
            delta = int(spread[w])
            witness = (x, y, z, w)
    logger.debug(f"slimness {delta} over {examined} triples ({sampling.mode})")
    return Measurement(delta, sampling.exact, witness, examined)


def four_point_constant(graph: MetricGraph, sampling: Sampling | None = None) -> Measurement:
    """Gromov four-point constant: half the gap between the two largest pair sums."""
    sampling = sampling or Sampling.auto(graph.vertex_count)
    n = graph.vertex_count
    best = Fraction(0)
    witness: tuple[int, ...] = ()
    examined = 0
    if sampling.exact:
        if n**3 > TRIPLE_CAP:
            raise BudgetExceededError(f"{n**3} triples exceed the cap of {TRIPLE_CAP}")
        corners = itertools.combinations(range(n), 3)
    else:
        rng = sampling.rng()
        corners = (tuple(int(v) for v in rng.integers(0, n, size=3)) for _ in range(sampling.count))
    for x, y, z in corners:
        examined += 1
        dx, dy, dz = graph.distances_from(x), graph.distances_from(y), graph.distances_from(z)
        sums = np.sort(np.vstack([dx[y] + dz, dx[z] + dy, dy[z] + dx]), axis=0)
        gaps = sums[2] - sums[1]
        w = int(np.argmax(gaps))
        if Fraction(int(gaps[w]), 2) > best:
            best = Fraction(int(gaps[w]), 2)
            witness = (x, y, z, w)
    return Measurement(best, sampling.exact, witness, examined)


def sample_pairs(members: Sequence[int], sampling: Sampling) -> Iterable[tuple[int, int]]:
    """Unordered member pairs, all of them or ``sampling.count`` seeded draws.

    Raises:
        BudgetExceededError: If exhaustive sampling would exceed the pair cap.
    """
    if sampling.exact:
        pair_count = len(members) * (len(members) - 1) // 2
        if pair_count > PAIR_CAP:
            raise BudgetExceededError(f"{pair_count} pairs exceed the cap of {PAIR_CAP}")
        yield from itertools.combinations(members, 2)
        return
    rng = sampling.rng()
    for _ in range(sampling.count):
        i, j = rng.integers(0, len(members), size=2)
        yield members[int(i)], members[int(j)]


def quasiconvexity_constant(
    graph: MetricGraph, subspace: Subspace, sampling: Sampling | None = None
) -> Measurement:
    """Least ``K`` such that every examined geodesic between members stays in ``N_K(Y)``.

    Raises:
        BudgetExceededError: If exhaustive sampling would exceed the pair cap.
    """
    sampling = sampling or Sampling.exhaustive()
    members = subspace.sorted_members()
    to_set = graph.distances_to_set(members)
    best = 0
    witness: tuple[int, ...] = ()
    examined = 0
    for u, v in sample_pairs(members, sampling):
        examined += 1
        mask = graph.interval(u, v)
        spread = np.where(mask, to_set, -1)
        w = int(np.argmax(spread))
        if spread[w] > best:
            best = int(spread[w])
            witness = (u, v, w)
    return Measurement(best, sampling.exact, witness, examined)


# Closest-point projections


class Projector:
    """Closest-point projection onto a fixed subspace, with cached member distances."""

    def __init__(self, graph: MetricGraph, subspace: Subspace) -> None:
        """Precompute distances from the members to every vertex."""
        self.graph = graph
        self.subspace = subspace
        self.members = np.array(subspace.sorted_members(), dtype=np.int64)
        self.matrix = graph.distance_matrix(self.members.tolist(), graph.vertices())
        valid = np.where(self.matrix >= 0, self.matrix, np.iinfo(np.int64).max)
        self.base_distance = valid.min(axis=0)
        self.closest = valid == self.base_distance
        self.internal = self.matrix[:, self.members]

    def mask(self, vertices: Iterable[int]) -> np.ndarray:
        """Boolean mask over members: the union of projections of ``vertices``."""
        cols = list(vertices)
        if not cols:
            raise EmptySubspaceError("projection of an empty set")
        return self.closest[:, cols].any(axis=1)

    def project(self, z: int) -> ProjectionSet:
        """Projection of a single vertex."""
        self.graph.check_vertex(z)
        points = frozenset(self.members[self.closest[:, z]].tolist())
        return ProjectionSet(self.subspace, points, int(self.base_distance[z]))

    def project_set(self, vertices: Iterable[int]) -> frozenset[int]:
        """Union of the projections of ``vertices``."""
        return frozenset(self.members[self.mask(vertices)].tolist())

    def diameter_of_mask(self, mask: np.ndarray) -> int:
        """Diameter of the members selected by ``mask``."""
        if mask.sum() < 2:
            return 0
        return int(self.internal[np.ix_(mask, mask)].max())

    def dpi(self, first: Iterable[int], second: Iterable[int]) -> int:
        """``diam(π_Y(A) ∪ π_Y(B))``."""
        return self.diameter_of_mask(self.mask(first) | self.mask(second))


def closest_point_projection(graph: MetricGraph, subspace: Subspace, z: int) -> ProjectionSet:
    """The set of points of ``subspace`` realising the distance from ``z``."""
    return Projector(graph, subspace).project(z)


def proj_distance(
    graph: MetricGraph, subspace: Subspace, first: Iterable[int], second: Iterable[int]
) -> int:
    """Projection distance ``d^π_Y(A, B) = diam(π_Y(A) ∪ π_Y(B))``."""
    return Projector(graph, subspace).dpi(first, second)


# Separation and Hausdorff distance


def check_family(family: Sequence[Subspace]) -> None:
    """Raise ``FamilyTooSmallError`` unless the family has two or more distinct members."""
    if len(family) < 2:
        raise FamilyTooSmallError(f"family has {len(family)} members, need at least 2")
    seen: set[frozenset[int]] = set()
    for member in family:
        if member.members in seen:
            raise FamilyTooSmallError(f"family repeats the subspace {sorted(member.members)}")
        seen.add(member.members)


def fattened_overlap(graph: MetricGraph, family: Sequence[Subspace], t: int) -> Measurement:
    """Largest ``diam(N_t(Y′) ∩ Y)`` over ordered pairs of distinct family members.

    Raises:
        FamilyTooSmallError: If the family has fewer than two or repeated members.
    """
    check_family(family)
    best = 0
    witness: tuple[int, ...] = ()
    rows = [graph.distances_to_set(member.members) for member in family]
    for i, j in itertools.permutations(range(len(family)), 2):
        overlap = [v for v in family[i].members if 0 <= rows[j][v] <= t]
        diameter = graph.diameter_of(overlap)
        if diameter > best:
            best = diameter
            witness = (i, j)
    return Measurement(best, True, witness, len(family) * (len(family) - 1))


def separation_M0(
    graph: MetricGraph, family: Sequence[Subspace], delta: int | Fraction, K: int | Fraction
) -> int:
    """Geometric separation: max of ``diam(N_{2K+2δ}(Y′) ∩ Y)`` over distinct pairs.

    Empty intersections contribute diameter 0.

    Raises:
        FamilyTooSmallError: If the family has fewer than two or repeated members.
    """
    t = int(2 * Fraction(K) + 2 * Fraction(delta))
    return int(fattened_overlap(graph, family, t).value)


def covering_radius(graph: MetricGraph, family: Sequence[Subspace]) -> int:
    """Largest distance from a vertex to the nearest family member.

    Raises:
        EmptySubspaceError: If the family covers no vertex.
    """
    union = sorted(set().union(*(member.members for member in family)))
    if not union:
        raise EmptySubspaceError("the family has no vertices")
    return int(graph.distances_to_set(union).max())


def hausdorff_distance(graph: MetricGraph, first: Iterable[int], second: Iterable[int]) -> int:
    """Hausdorff distance between two non-empty vertex sets."""
    a, b = sorted(set(first)), sorted(set(second))
    if not a or not b:
        raise EmptySubspaceError("Hausdorff distance needs non-empty sets")
    to_b = graph.distances_to_set(b)
    to_a = graph.distances_to_set(a)
    return int(max(to_b[a].max(), to_a[b].max()))


def fellow_travel_constant(
    graph: MetricGraph, paths: Iterable[Path], cap: int = GEODESIC_ENUMERATION_CAP
) -> Measurement:
    """Largest Hausdorff distance between a path and any geodesic joining its endpoints.

    This is the measured Morse constant for the examined quasigeodesics.
    """
    best = 0
    witness: tuple[int, ...] = ()
    examined = 0
    for path in paths:
        for geodesic in graph.all_geodesics(path.start, path.end, cap):
            examined += 1
            gap = hausdorff_distance(graph, path.vertices, geodesic.vertices)
            if gap > best:
                best = gap
                witness = (path.start, path.end)
    return Measurement(best, True, witness, examined)


# Lemma checkers


def check_lipschitz_projection(
    graph: MetricGraph, family: Sequence[Subspace], delta: int | Fraction, K: int | Fraction
) -> LemmaCheck:
    """Adjacent vertices have projections at distance at most ``2K+10δ+2``."""
    bound = 2 * Fraction(K) + 10 * Fraction(delta) + 2
    observed = 0
    witness: tuple[int, ...] = ()
    for index, subspace in enumerate(family):
        projector = Projector(graph, subspace)
        for u, v in sorted(graph.edges):
            gap = projector.dpi([u], [v])
            if gap > observed:
                observed, witness = gap, (index, u, v)
    return LemmaCheck("lipschitz_projection", bound, observed, witness)


def check_neighborhood_quasiconvex(
    graph: MetricGraph, core: Subspace, radius: int, delta: int | Fraction
) -> LemmaCheck:
    """``N_A(Z)`` is ``(2δ + diam Z)``-quasiconvex."""
    diameter = graph.diameter_of(core.members)
    fattened = Subspace.of(graph, graph.neighborhood(core.members, radius), f"N_{radius}")
    measured = quasiconvexity_constant(graph, fattened, Sampling.auto(graph.vertex_count))
    bound = 2 * Fraction(delta) + diameter
    return LemmaCheck(
        "neighborhood_quasiconvex",
        bound,
        measured.value,
        measured.witness,
        {"radius": radius, "diameter": diameter},
    )


def separation_bound(
    M0: int | Fraction, K: int | Fraction, delta: int | Fraction, t: int | Fraction
) -> Fraction:
    """``M(t) = M₀ + 2K + 2t + 4δ + 2``."""
    return Fraction(M0) + 2 * Fraction(K) + 2 * Fraction(t) + 4 * Fraction(delta) + 2


def check_bounded_projections(
    graph: MetricGraph,
    family: Sequence[Subspace],
    delta: int | Fraction,
    K: int | Fraction,
    M0: int | Fraction,
) -> LemmaCheck:
    """``diam π_{Y′}(Y) ≤ B = M(2K+7δ+1)`` for distinct family members."""
    check_family(family)
    bound = separation_bound(M0, K, delta, 2 * Fraction(K) + 7 * Fraction(delta) + 1)
    observed = 0
    witness: tuple[int, ...] = ()
    for j, target in enumerate(family):
        projector = Projector(graph, target)
        for i, source in enumerate(family):
            if i == j:
                continue
            diameter = projector.diameter_of_mask(projector.mask(source.members))
            if diameter > observed:
                observed, witness = diameter, (i, j)
    return LemmaCheck("bounded_projections", bound, observed, witness)


def check_separation_propagation(
    graph: MetricGraph,
    family: Sequence[Subspace],
    delta: int | Fraction,
    K: int | Fraction,
    M0: int | Fraction,
    radii: Iterable[int],
) -> list[LemmaCheck]:
    """``diam(N_t(Y′) ∩ Y) ≤ M(t)`` for every requested ``t``."""
    checks = []
    for t in radii:
        measured = fattened_overlap(graph, family, t)
        checks.append(
            LemmaCheck(
                "separation_propagation",
                separation_bound(M0, K, delta, t),
                measured.value,
                measured.witness,
                {"t": t},
            )
        )
    return checks


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a report-producing check: examined tuples and the violating ones."""

    name: str
    examined: int
    violations: tuple[tuple[int, ...], ...] = ()
    details: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Whether no examined tuple violates the property."""
        return not self.violations

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "name": self.name,
            "examined": self.examined,
            "passed": self.passed,
            "violations": [list(v) for v in self.violations],
            **self.details,
        }
