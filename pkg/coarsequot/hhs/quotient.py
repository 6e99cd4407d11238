"""The hierarchy structure induced on ``G/N`` and the bounds it is built on.

Minimality is measured in the cone-off ``X̂`` of the spinning family: a point ``x`` and a domain
``U`` are at distance ``d_X̂(x, ρ^U_S)``, two domains at the distance between their ``ρ^·_S``
sets. A pair is minimal when it realises the least such distance over its two classes.
"""

from __future__ import annotations

import functools
import itertools
import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from coarsequot.constants import (
    HHS_DOMAIN_SAMPLES,
    HHS_SAMPLES,
    MAX_BAD_ENDINGS,
    MINIMAL_LIFT_STEPS,
    OUT_OF_BALL,
)
from coarsequot.errors import (
    NotApplicableError,
    RelationConflictError,
    SearchExhaustedError,
    UnknownVertexError,
)
from coarsequot.graphs.core import MetricGraph, Path
from coarsequot.graphs.measure import CheckReport, Measurement, Sampling, slim_constant
from coarsequot.groups.words import GroupElement
from coarsequot.hhs.core import (
    NO_ANCHOR,
    TOP,
    Domain,
    HHSStructure,
    Relation,
    anchor_image,
    cyclic_syllable_length,
)
from coarsequot.spinning.core import (
    SpinningInstance,
    bend,
    find_shortening_pair,
    normal_element,
)
from coarsequot.spinning.quotient import QuotientGraph, build_quotient, certify_minimal
from coarsequot.spinning.unionfind import PotentialUnionFind

logger = logging.getLogger(__name__)


class Minimality:
    """Distances in ``X̂`` between points and domains, and the minimal pairs they select."""

    def __init__(
        self,
        h: HHSStructure,
        inst: SpinningInstance,
        quotient: QuotientGraph,
        domain_classes: Sequence[Sequence[int]],
    ) -> None:
        """Bind the base structure, the cone-off and both class partitions."""
        self.h = h
        self.inst = inst
        self.quotient = quotient
        self.domain_classes = domain_classes
        self._rows: dict[int, np.ndarray] = {}

    def row(self, u: int) -> np.ndarray:
        """``d_X̂(·, ρ^U_S)`` over cone-off vertices."""
        if u not in self._rows:
            self._rows[u] = self.inst.cone.graph.distances_to_set(self.h.rho_of(u, TOP))
        return self._rows[u]

    def point_pairs(self, point_class: int, domain_class: int) -> list[tuple[int, int]]:
        """Minimal ``(x, U)`` with ``x`` in the point class and ``U`` in the domain class."""
        xs = np.array(self.quotient.classes[point_class], dtype=np.int64)
        best: int | None = None
        pairs: list[tuple[int, int]] = []
        for u in self.domain_classes[domain_class]:
            row = self.row(u)[xs]
            low = int(row.min())
            if best is None or low < best:
                best, pairs = low, []
            if low == best:
                pairs.extend((int(x), u) for x in xs[row == low])
        return pairs

    def domain_distance(self, u: int, v: int) -> int:
        """``d_X̂(ρ^U_S, ρ^V_S)``."""
        return int(self.row(u)[sorted(self.h.rho_of(v, TOP))].min())

    def domain_pairs(self, first: int, second: int) -> list[tuple[int, int]]:
        """Minimal ``(U, V)`` across two domain classes."""
        scored = [
            (self.domain_distance(u, v), u, v)
            for u in self.domain_classes[first]
            for v in self.domain_classes[second]
        ]
        low = min(d for d, _, _ in scored)
        return [(u, v) for d, u, v in scored if d == low]


@dataclass
class _DomainLinks:
    """Domain classes under the saturation elements, with the element joining two domains."""

    links: PotentialUnionFind
    classes: tuple[tuple[int, ...], ...]
    labels: np.ndarray

    def carry(self, u: int, v: int) -> GroupElement:
        element = self.links.carry(u, v)
        if element is None:
            raise UnknownVertexError(f"domains {u} and {v} lie in different classes")
        return element


def _domain_links(h: HHSStructure, saturation: Sequence[GroupElement]) -> _DomainLinks:
    links = PotentialUnionFind(h.domain_count)
    if h.domain_count > 1:
        for s in saturation:
            for u in range(1, h.domain_count):
                v = h.act_domain(s, u)
                if v not in (None, u, TOP):
                    links.union(u, v, s)
    classes = tuple(tuple(members) for members in links.groups())
    labels = np.empty(h.domain_count, dtype=np.int64)
    for index, members in enumerate(classes):
        labels[list(members)] = index
    return _DomainLinks(links, classes, labels)


def _transport(
    h: HHSStructure, links: _DomainLinks, source: int, rep: int, points: frozenset[int]
) -> frozenset[int]:
    """Carry local vertices of ``C source`` to ``C rep`` along the linking element."""
    if source == rep:
        return points
    back = ~links.carry(rep, source)
    moved = (anchor_image(h, back, source, rep, p) for p in points)
    return frozenset(p for p in moved if p is not None)


class _QuotientProjection:
    def __init__(self, h: HHSStructure, minimal: Minimality, links: _DomainLinks) -> None:
        self.h = h
        self.minimal = minimal
        self.links = links
        self._cached = functools.lru_cache(maxsize=1 << 18)(self._compute)

    def _compute(self, cu: int, point: int) -> frozenset[int]:
        if cu == TOP:
            return frozenset((point,))
        rep = self.links.classes[cu][0]
        pairs = self.minimal.point_pairs(point, cu)
        image = frozenset().union(
            *(_transport(self.h, self.links, u, rep, self.h.proj(u, x)) for x, u in pairs)
        )
        if image:
            return image
        members = np.array(self.minimal.quotient.classes[point], dtype=np.int64)
        closest = int(members[int(np.argmin(self.minimal.row(rep)[members]))])
        logger.debug(f"projection of class {point} to {cu} falls back to {closest}")
        return self.h.proj(rep, closest)

    def __call__(self, cu: int, point: int) -> frozenset[int]:
        return self._cached(cu, point)


class _QuotientRho(Mapping[tuple[int, int], frozenset[int]]):
    def __init__(
        self,
        h: HHSStructure,
        minimal: Minimality,
        links: _DomainLinks,
        relation: functools.partial[Relation],
    ) -> None:
        self.h = h
        self.minimal = minimal
        self.links = links
        self.relation = relation
        self._cache: dict[tuple[int, int], frozenset[int]] = {}

    def _defined(self, cu: int, cv: int) -> bool:
        count = len(self.links.classes)
        if not (0 < cu < count and 0 <= cv < count and cu != cv):
            return False
        return cv == TOP or self.relation(cu, cv) in (Relation.NESTED, Relation.TRANS)

    def __getitem__(self, key: tuple[int, int]) -> frozenset[int]:
        cu, cv = key
        if not self._defined(cu, cv):
            raise KeyError(key)
        if key not in self._cache:
            quotient = self.minimal.quotient
            if cv == TOP:
                rep = self.links.classes[cu][0]
                points = frozenset(quotient.class_of(v) for v in self.h.rho_of(rep, TOP))
            else:
                rep = self.links.classes[cv][0]
                points = frozenset().union(
                    *(
                        _transport(self.h, self.links, v, rep, self.h.rho_of(u, v))
                        for u, v in self.minimal.domain_pairs(cu, cv)
                    )
                )
            self._cache[key] = points
        return self._cache[key]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        count = len(self.links.classes)
        for cu, cv in itertools.product(range(1, count), range(count)):
            if self._defined(cu, cv):
                yield (cu, cv)

    def __len__(self) -> int:
        return sum(1 for _ in self)


def measure_aleph(
    h: HHSStructure, inst: SpinningInstance, sampling: Sampling | None = None
) -> Measurement:
    """Largest ``diam π_U(H_Y · y)`` over sampled members, their points and domains below ``S``.

    Orbits are cut to the ball.
    """
    sampling = sampling or Sampling.random(HHS_SAMPLES)
    rng = sampling.rng()
    domains = list(range(1, h.domain_count))
    if not domains:
        return Measurement(0, True, (), 0)
    if not sampling.exact and len(domains) > HHS_DOMAIN_SAMPLES:
        domains = sorted(int(u) for u in rng.choice(domains, HHS_DOMAIN_SAMPLES, replace=False))
    reach = 2 * inst.ball.radius
    best, witness, examined = 0, (), 0
    for j, member in enumerate(inst.members):
        points = member.subspace.sorted_members()
        if not sampling.exact and len(points) > 4:
            points = sorted(int(p) for p in rng.choice(points, 4, replace=False))
        for y in points:
            orbit = {inst.ball.act(member.stabilizer**k, y) for k in range(-reach, reach + 1)}
            orbit.discard(OUT_OF_BALL)
            for u in domains:
                examined += 1
                size = h.spread(u, *(h.proj(u, z) for z in orbit))
                if size > best:
                    best, witness = size, (j, y, u)
    return Measurement(best, sampling.exact, witness, examined)


@dataclass(frozen=True, eq=False)
class QuotientHHS:
    """The structure on ``G/N`` together with what it was built from.

    Attributes:
        base: The structure on ``G``.
        spinning: The spinning family generating ``N``.
        quotient: ``X̄``.
        structure: The quotient structure; its points are the ball classes of ``X̄``.
        domain_labels: Class of every base domain.
        aleph: Measured ``ℵ``.
        constants: Per-axiom constants; ``structure.E`` is their maximum.
        precondition: Whether ``L > L̃``, ``None`` without a ledger.
    """

    base: HHSStructure
    spinning: SpinningInstance = field(repr=False)
    quotient: QuotientGraph = field(repr=False)
    structure: HHSStructure = field(repr=False)
    domain_labels: np.ndarray = field(repr=False)
    minimal: Minimality = field(repr=False)
    aleph: Measurement
    constants: dict[str, Fraction]
    precondition: bool | None

    @property
    def beth(self) -> Fraction:
        """``ℶ = 2ℵ + 27E``."""
        return 2 * Fraction(self.aleph.value) + 27 * self.base.E

    @property
    def E_bar(self) -> Fraction:
        """Constant of the quotient structure."""
        return self.structure.E

    def domain_class(self, u: int) -> int:
        """Class of a base domain."""
        return int(self.domain_labels[u])

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "base": self.base.name,
            "domains": self.base.domain_count,
            "domain_classes": self.structure.domain_count,
            "points": self.structure.point_count,
            "aleph": self.aleph.to_dict(),
            "beth": str(self.beth),
            "E_bar": str(self.E_bar),
            "constants": {k: str(v) for k, v in self.constants.items()},
            "precondition": self.precondition,
        }


def _relation_table(
    h: HHSStructure, minimal: Minimality, labels: np.ndarray
) -> tuple[frozenset[tuple[int, int]], frozenset[tuple[int, int]]]:
    """Nesting and orthogonality between classes below ``S̄``, read off minimal pairs.

    Raises:
        RelationConflictError: If two minimal pairs of one class pair disagree.
    """
    nested: set[tuple[int, int]] = set()
    orthogonal: set[tuple[int, int]] = set()
    candidates = {(u, v) for u, v in h.nested if v != TOP} | set(h.orthogonal)
    for u, v in sorted(candidates):
        cu, cv = int(labels[u]), int(labels[v])
        if cu == cv:
            raise RelationConflictError(f"related domains {u} and {v} share a class")
        relations = {h.relation(a, b) for a, b in minimal.domain_pairs(cu, cv)}
        if len(relations) > 1:
            raise RelationConflictError(
                f"classes {cu} and {cv}: minimal pairs give {sorted(relations)}"
            )
        (relation,) = relations
        if relation is Relation.NESTED:
            nested.add((cu, cv))
        elif relation is Relation.CONTAINS:
            nested.add((cv, cu))
        elif relation is Relation.ORTH:
            orthogonal.add((cu, cv))
    return frozenset(nested), frozenset(orthogonal)


def _relation_of(
    nested: frozenset[tuple[int, int]], orthogonal: frozenset[tuple[int, int]], u: int, v: int
) -> Relation:
    if u == v:
        return Relation.EQUAL
    if (u, v) in nested:
        return Relation.NESTED
    if (v, u) in nested:
        return Relation.CONTAINS
    if (min(u, v), max(u, v)) in orthogonal:
        return Relation.ORTH
    return Relation.TRANS


def build_quotient_structure(
    h: HHSStructure,
    inst: SpinningInstance,
    quotient: QuotientGraph | None = None,
    sampling: Sampling | None = None,
) -> QuotientHHS:
    """Induce the hierarchy structure on ``G/N``.

    Domains are grouped by the saturation elements of ``N``; ``C S̄`` is ``X̄`` and every other
    class keeps the space of its smallest member. Relations, projections and relative
    projections come from minimal representatives.

    Raises:
        NotApplicableError: If the structure and the spinning family live on different balls.
        RelationConflictError: If minimal pairs disagree on a relation.
        BudgetExceededError: If building ``X̄`` exceeds a cap.
    """
    if h.point_count != inst.base_count:
        raise NotApplicableError(
            f"structure has {h.point_count} points but the ball has {inst.base_count}"
        )
    quotient = quotient or build_quotient(inst)
    links = _domain_links(h, quotient.saturation)
    minimal = Minimality(h, inst, quotient, links.classes)
    nested, orthogonal = _relation_table(h, minimal, links.labels)
    nested = nested | {(c, TOP) for c in range(1, len(links.classes))}
    relation = functools.partial(_relation_of, nested, orthogonal)

    point_count = quotient.base_class_count
    point_edges = {
        (min(a, b), max(a, b))
        for u, v in h.space.edges
        if (a := quotient.class_of(u)) != (b := quotient.class_of(v))
    }
    points = MetricGraph(
        point_count, point_edges, {i: quotient.graph.label(i) for i in range(point_count)}
    )
    top = Domain(
        "S",
        quotient.graph,
        tuple(i if i < point_count else NO_ANCHOR for i in quotient.graph.vertices()),
    )
    domains = [top]
    for members in links.classes[1:]:
        rep = h.domains[members[0]]
        anchors = tuple(a if a == NO_ANCHOR else quotient.class_of(a) for a in rep.anchors)
        domains.append(Domain(f"{rep.name}/N", rep.space, anchors))

    aleph = measure_aleph(h, inst, sampling)
    beth = 2 * Fraction(aleph.value) + 27 * h.E
    slimness = slim_constant(quotient.graph, sampling).value
    chain = h.E if h.domain_count > 1 else Fraction(1)
    constants = {
        "projections": beth,
        "nesting": beth,
        "complexity": chain,
        "transversality": beth,
        "consistency": beth + 2 * h.E,
        "hyperbolicity": Fraction(slimness),
        "bounded_geodesic_image": 3 * h.E + beth,
    }
    E_bar = max(h.E, *constants.values())
    precondition = None if inst.derived is None else inst.L > inst.derived.L_tilde
    if precondition is False:
        logger.warning(f"L = {inst.L} does not exceed L̃ = {inst.derived.L_tilde}")

    structure = HHSStructure(
        f"{h.name}/N",
        points,
        tuple(domains),
        nested,
        orthogonal,
        _QuotientProjection(h, minimal, links),
        _QuotientRho(h, minimal, links, relation),
        E_bar,
    )
    logger.info(
        f"quotient structure: {h.domain_count} domains in {len(links.classes)} classes, "
        f"{point_count} points, E = {E_bar}"
    )
    return QuotientHHS(
        h,
        inst,
        quotient,
        structure,
        links.labels,
        minimal,
        aleph,
        constants,
        precondition,
    )


# Bounds


@dataclass(frozen=True)
class BoundsReport:
    """Violations of each projection bound behind the quotient structure."""

    checks: tuple[CheckReport, ...]
    details: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Whether no check found a violation."""
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> CheckReport:
        """The check of the given name.

        Raises:
            KeyError: If no such check ran.
        """
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
            **self.details,
        }


def _draws(rng: np.random.Generator, count: int, *sizes: int) -> list[tuple[int, ...]]:
    if any(size == 0 for size in sizes):
        return []
    return [tuple(int(rng.integers(0, size)) for size in sizes) for _ in range(count)]


def _projection_diameters(q: QuotientHHS, draws: Sequence[tuple[int, ...]]) -> CheckReport:
    s = q.structure
    violations = []
    for point, cu in draws:
        size = s.domains[cu].diameter(s.proj(cu, point))
        if size > q.beth:
            violations.append((point, cu, size))
    return CheckReport("beth_diameter", len(draws), tuple(violations), {"bound": str(q.beth)})


def _near_domains(q: QuotientHHS, u: int) -> list[int]:
    h = q.base
    row = h.top_space.distances_to_set(h.rho_of(u, TOP))
    return [
        v
        for v in range(1, h.domain_count)
        if int(row[sorted(h.rho_of(v, TOP))].min()) <= 2 * h.E
    ]


def _lifts_close(q: QuotientHHS, draws: Sequence[tuple[int, ...]]) -> CheckReport:
    h = q.base
    bound = 2 * Fraction(q.aleph.value) + 9 * h.E
    near: dict[int, list[int]] = {}
    violations = []
    examined = 0
    for point, cu in draws:
        by_domain: dict[int, list[int]] = {}
        for x, u in q.minimal.point_pairs(point, cu):
            by_domain.setdefault(u, []).append(x)
        for u, xs in by_domain.items():
            if len(xs) < 2:
                continue
            if u not in near:
                near[u] = _near_domains(q, u)
            for x, y in itertools.combinations(xs, 2):
                for v in near[u]:
                    examined += 1
                    gap = h.distance(v, x, y)
                    if gap > bound:
                        violations.append((x, y, u, v, gap))
    return CheckReport("lifts_close", examined, tuple(violations), {"bound": str(bound)})


def _relative_projections(q: QuotientHHS, rng: np.random.Generator, count: int) -> CheckReport:
    h = q.base
    bound = 2 * Fraction(q.aleph.value) + 25 * h.E
    crowded = [c for c, members in enumerate(q.minimal.domain_classes) if c and len(members) > 1]
    violations = []
    examined = 0
    for v, index in _draws(rng, count, h.domain_count, len(crowded)):
        cu = crowded[index]
        if v == TOP or q.domain_class(v) == cu:
            continue
        scored = [(q.minimal.domain_distance(u, v), u) for u in q.minimal.domain_classes[cu]]
        low = min(d for d, _ in scored)
        closest = [u for d, u in scored if d == low]
        examined += 1
        if len(closest) < 2:
            continue
        if any(h.relation(u, v) is not Relation.TRANS for u in closest):
            violations.append((v, cu, -1))
            continue
        for a, b in itertools.combinations(closest, 2):
            gap = h.spread(v, h.rho_of(a, v), h.rho_of(b, v))
            if gap > bound:
                violations.append((v, a, b, gap))
    return CheckReport("rho_welldefined", examined, tuple(violations), {"bound": str(bound)})


def _pairwise_minimal(
    q: QuotientHHS, first: int, second: int, cu: int
) -> tuple[int, int, int] | None:
    """``(x, y, U)`` with ``{x, y, U}`` pairwise minimal, or ``None`` if none is found."""
    second_pairs = q.minimal.point_pairs(second, cu)
    target = q.quotient.graph.distance(first, second)
    cone = q.spinning.cone.graph
    for x, u in q.minimal.point_pairs(first, cu):
        for y, v in second_pairs:
            if v == u and cone.distance(x, y) == target:
                return x, y, u
    return None


def _distances_in_quotient(q: QuotientHHS, draws: Sequence[tuple[int, ...]]) -> CheckReport:
    s, h = q.structure, q.base
    violations = []
    examined = 0
    missing = 0
    for first, second, cu in draws:
        if cu == TOP:
            pair = certify_minimal(q.quotient, q.quotient.rep(first), q.quotient.rep(second))
            examined += 1
            lifted = pair.distance
        elif (triple := _pairwise_minimal(q, first, second, cu)) is None:
            missing += 1
            continue
        else:
            x, y, u = triple
            examined += 1
            lifted = h.gap(u, x, y)
        reduced = s.gap(cu, first, second)
        if not lifted - 2 * q.beth <= reduced <= lifted:
            violations.append((first, second, cu, lifted, reduced))
    return CheckReport(
        "dist_in_quotient",
        examined,
        tuple(violations),
        {"bound": str(2 * q.beth), "no_minimal_triple": missing},
    )


@dataclass(frozen=True)
class MinimalLift:
    """Outcome of bending a point onto a lift minimal with a domain.

    Attributes:
        lift: The minimal lift reached, ``None`` if a bend left the ball or the search stalled.
        bad_endings: Restarts forced by a bent geodesic re-entering the neighbourhood of ``v_U``.
        steps: Bends applied.
    """

    lift: int | None
    bad_endings: int
    steps: int


def _entry_path(graph: MetricGraph, row: np.ndarray, rho: Sequence[int], x: int) -> Path:
    """A geodesic ``[y, x]`` from ``ρ^U_S`` that meets ``{row ≤ 1}`` only at ``y``."""
    anchor = min(rho, key=lambda p: (graph.distance(p, x), p))
    vertices = graph.geodesic(anchor, x).vertices
    last = max(i for i, v in enumerate(vertices) if row[v] <= 1)
    return Path(vertices[last:])


def minimal_lift(q: QuotientHHS, x: int, u: int) -> MinimalLift:
    """Bend ``x`` onto a lift of ``x̄`` minimal with ``U``, restarting on bad endings.

    Each step takes a shortening pair ``(Y, h_Y)`` for the element of ``N`` carrying the current
    point to a chosen minimal lift. If ``v_Y`` lies on the geodesic ``σ`` from ``ρ^U_S`` to that
    lift, the lift moves by ``h_Y``. If it lies on the geodesic ``γ`` into the current point, the
    point moves by ``h_Y⁻¹``. A bent ``γ`` coming back within 2 of ``v_U`` is a bad ending: the
    search restarts from the bent point.
    """
    inst = q.spinning
    graph = inst.cone.graph
    row = q.minimal.row(u)
    rho = sorted(q.base.rho_of(u, TOP))
    point = q.quotient.class_of(x)
    starred = sorted(z for z, v in q.minimal.point_pairs(point, q.domain_class(u)) if v == u)
    bad = steps = 0
    current = x
    while steps < MINIMAL_LIFT_STEPS:
        if current in starred:
            return MinimalLift(current, bad, steps)
        if not starred:
            break
        target = starred[0]
        carried = q.quotient.carry(current, target)
        if carried is None:
            break
        gamma = _entry_path(graph, row, rho, current)
        sigma = graph.geodesic(min(rho, key=lambda p: (graph.distance(p, target), p)), target)
        while steps < MINIMAL_LIFT_STEPS and current != target:
            try:
                pair = find_shortening_pair(inst, current, normal_element(inst, carried))
            except SearchExhaustedError as e:
                logger.debug(f"minimal lift of {x} stalled: {e}")
                return MinimalLift(None, bad, steps)
            if pair is None:
                return MinimalLift(None, bad, steps)
            cone_vertex = inst.cone.cone_of(pair.index)
            h_y = inst.members[pair.index].generator ** pair.exponent
            steps += 1
            if cone_vertex in sigma.vertices[1:-1]:
                bent = bend(inst, sigma, pair.index, pair.exponent)
                if bent is None:
                    return MinimalLift(None, bad, steps)
                sigma, target, carried = bent, bent.end, h_y * carried
            elif cone_vertex in gamma.vertices[1:-1]:
                bent = bend(inst, gamma, pair.index, -pair.exponent)
                if bent is None:
                    return MinimalLift(None, bad, steps)
                gamma, current, carried = bent, bent.end, carried * h_y
                if any(row[v] <= 1 for v in bent.vertices[1:]):
                    bad += 1
                    break
            else:
                return MinimalLift(None, bad, steps)
    return MinimalLift(None, bad, steps)


def _almost_minimal(
    q: QuotientHHS, draws: Sequence[tuple[int, ...]]
) -> tuple[CheckReport, CheckReport]:
    h = q.base
    bound = 9 * Fraction(q.aleph.value) + 28 * h.E
    cone = q.spinning.cone.graph
    violations = []
    restarts = []
    examined = unresolved = worst = 0
    for point, u in draws:
        if u == TOP:
            continue
        y = min(h.rho_of(u, TOP))
        members = np.array(q.quotient.classes[point], dtype=np.int64)
        x = int(members[int(np.argmin(cone.distances_from(y)[members]))])
        lift = minimal_lift(q, x, u)
        worst = max(worst, lift.bad_endings)
        if lift.bad_endings > MAX_BAD_ENDINGS:
            restarts.append((x, u, lift.bad_endings))
        if lift.lift is not None:
            starred = [lift.lift]
        else:
            unresolved += 1
            cu = q.domain_class(u)
            starred = [z for z, v in q.minimal.point_pairs(point, cu) if v == u]
        if not starred:
            continue
        examined += 1
        gap = min(h.distance(u, x, z) for z in starred)
        if gap > bound:
            violations.append((x, u, gap))
    details = {"bound": str(bound), "unresolved": unresolved}
    return (
        CheckReport("almost_minimal", examined, tuple(violations), details),
        CheckReport("bad_endings", examined, tuple(restarts), {"max": worst}),
    )


def check_quotient_bounds(q: QuotientHHS, sampling: Sampling | None = None) -> BoundsReport:
    """Instantiate each projection bound of the quotient construction on sampled tuples.

    Checks the ``ℶ`` bound on projection diameters, ``2ℵ + 9E`` between projections of minimal
    lifts, ``2ℵ + 25E`` between relative projections of minimal domains, the two-sided comparison
    of ``d_Ū`` with ``d_U`` and ``9ℵ + 28E`` for almost minimal points, whose minimal lifts are
    found by `minimal_lift` with at most four bad endings. At ``S̄`` the comparison is between
    ``d_X̄`` and the closest lifts in ``X̂``.
    """
    sampling = sampling or Sampling.random(HHS_SAMPLES)
    rng = sampling.rng()
    count = sampling.count
    s = q.structure
    below = s.domain_count - 1
    pairs = [(p, c + 1) for p, c in _draws(rng, count, s.point_count, below)]
    triples = _draws(rng, count, s.point_count, s.point_count, s.domain_count)
    lifts = _draws(rng, count, s.point_count, q.base.domain_count)
    checks = (
        _projection_diameters(q, pairs),
        _lifts_close(q, pairs),
        _relative_projections(q, rng, count),
        _distances_in_quotient(q, triples),
        *_almost_minimal(q, lifts),
    )
    report = BoundsReport(checks, {"beth": str(q.beth), "precondition": q.precondition})
    if not report.passed:
        failing = [c.name for c in checks if not c.passed]
        logger.warning(f"quotient bounds violated: {', '.join(failing)}")
    return report


# Audits


def unique_reps_check(q: QuotientHHS, sampling: Sampling | None = None) -> CheckReport:
    """For a fixed ``U`` at most one member of each class lies ``2A``-close, the rest transverse.

    Raises:
        NotApplicableError: Without a ledger for ``A``.
    """
    if q.spinning.derived is None:
        raise NotApplicableError("the closeness threshold 2A needs a ledger")
    h = q.base
    threshold = 2 * q.spinning.derived.A
    sampling = sampling or Sampling.random(HHS_DOMAIN_SAMPLES)
    domains = list(range(1, h.domain_count))
    if not sampling.exact and len(domains) > sampling.count:
        domains = sorted(int(u) for u in sampling.rng().choice(domains, sampling.count, False))
    violations = []
    examined = 0
    for u in domains:
        row = h.top_space.distances_to_set(h.rho_of(u, TOP))
        close: dict[int, list[int]] = {}
        for v in range(1, h.domain_count):
            examined += 1
            if v != u and int(row[sorted(h.rho_of(v, TOP))].min()) <= threshold:
                close.setdefault(q.domain_class(v), []).append(v)
            elif v != u and h.relation(u, v) is not Relation.TRANS:
                violations.append((u, v, 0))
        for cv, members in close.items():
            if len(members) > 1:
                violations.append((u, cv, len(members)))
    return CheckReport(
        "unique_reps", examined, tuple(violations), {"threshold": str(threshold)}
    )


def peripheral_audit(
    h: HHSStructure, inst: SpinningInstance, quotient: QuotientGraph
) -> CheckReport:
    """``H ∩ N = {1}`` for the factors ``H`` of a free product.

    Every saturation element must have syllable translation length at least 2, so it lies in
    no conjugate of a factor; no nontrivial factor element in the ball may share the class of
    the identity or be trivial in the quotient presentation.

    Raises:
        NotApplicableError: For structures without a free-product ball.
    """
    if h.ball is None or not h.ball.presentation.factor_ranks:
        raise NotApplicableError("the peripheral audit needs a free product")
    presentation = h.ball.presentation
    violations = []
    examined = 0
    for index, n in enumerate(quotient.saturation):
        examined += 1
        if cyclic_syllable_length(presentation, n) < 2:
            violations.append((index, -1))
    identity_class = quotient.class_of(h.ball.origin)
    for v, element in enumerate(h.ball.elements):
        if element.is_identity:
            continue
        factors = {presentation.factor_of(letter) for letter in element.word}
        if len(factors) != 1:
            continue
        examined += 1
        collapsed = quotient.class_of(v) == identity_class
        if inst.quotient is not None and inst.quotient.is_trivial(element):
            collapsed = True
        if collapsed:
            violations.append((v, 0))
    return CheckReport(
        "peripheral_embedding",
        examined,
        tuple(violations),
        {"saturation": len(quotient.saturation)},
    )
