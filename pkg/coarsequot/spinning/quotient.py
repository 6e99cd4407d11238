"""The quotient ``X̄ = X̂/N`` by orbit saturation, minimal representatives and quotient reports."""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from coarsequot.coning.core import ConeOff
from coarsequot.constants import OUT_OF_BALL, PAIR_CAP
from coarsequot.errors import BudgetExceededError, NotApplicableError, OracleMismatchError
from coarsequot.graphs.core import MetricGraph
from coarsequot.graphs.measure import CheckReport, Sampling
from coarsequot.groups.ball import cayley_ball
from coarsequot.groups.presentation import Presentation, PresentationKind
from coarsequot.groups.words import GroupElement
from coarsequot.spinning.core import SpinningInstance, sample_base_vertices
from coarsequot.spinning.unionfind import PotentialUnionFind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuotientGraph:
    """Classes of cone-off vertices under the saturated ``N``-action, and their graph.

    Attributes:
        source: The cone-off ``X̂``.
        labels: Class index of every source vertex.
        classes: Members of each class, sorted; class order follows the smallest member.
        graph: The quotient graph on class indices.
        budget: Longest conjugator used when saturating.
        saturation: The elements ``g h^{±1} g⁻¹`` that were applied.
        oracle_checked: Vertex pairs compared against the word-problem oracle, ``None`` if no
            oracle was available.
    """

    source: ConeOff
    labels: np.ndarray = field(repr=False, compare=False)
    classes: tuple[tuple[int, ...], ...]
    graph: MetricGraph = field(repr=False)
    budget: int
    saturation: tuple[GroupElement, ...] = field(repr=False)
    links: PotentialUnionFind = field(repr=False, compare=False)
    oracle_checked: int | None = None

    def class_of(self, v: int) -> int:
        """Class index of a source vertex."""
        return int(self.labels[self.source.graph.check_vertex(v)])

    def rep(self, index: int) -> int:
        """Canonical representative: the smallest, hence shortlex-least, member."""
        return self.classes[index][0]

    def carry(self, x: int, y: int) -> GroupElement | None:
        """An element of ``N`` moving ``x`` onto ``y``, or ``None`` across classes."""
        return self.links.carry(x, y)

    def distance(self, x: int, y: int) -> int:
        """``d_X̄(x̄, ȳ)``."""
        return self.graph.distance(self.class_of(x), self.class_of(y))

    @property
    def base_class_count(self) -> int:
        """Number of classes of ball vertices."""
        return len({self.class_of(v) for v in self.source.base.vertices()})

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "classes": len(self.classes),
            "base_classes": self.base_class_count,
            "source_vertices": self.source.graph.vertex_count,
            "budget": self.budget,
            "saturation_size": len(self.saturation),
            "oracle_checked": self.oracle_checked,
            "oracle_agreement": self.oracle_checked is not None,
        }


def saturation_set(inst: SpinningInstance, budget: int) -> list[GroupElement]:
    """``{g h^{±1} g⁻¹}`` over members and ``|g| ≤ budget``, dropping any longer than ``2·radius``.

    Longer elements move every ball vertex out of the ball.
    """
    if budget < 0:
        raise ValueError("saturation budget must be non-negative")
    conjugators = (
        list(cayley_ball(inst.ball.presentation, budget).elements)
        if budget >= 1
        else [GroupElement.identity()]
    )
    limit = 2 * inst.ball.radius
    seen: set[GroupElement] = set()
    elements = []
    for member in inst.members:
        if member.generator.is_identity:
            continue
        for h in (member.generator, ~member.generator):
            for g in conjugators:
                s = h.conjugate(g)
                if len(s) <= limit and s not in seen:
                    seen.add(s)
                    elements.append(s)
    return elements


def _oracle_pairs(
    inst: SpinningInstance, quotient: Presentation, labels: np.ndarray, links: PotentialUnionFind
) -> int:
    """Cross-check base classes against the quotient presentation.

    Raises:
        OracleMismatchError: If a class holds unequal words, or equal words sit in two classes.
        BudgetExceededError: If the small-cancellation pair scan exceeds the pair cap.
    """
    checked = 0
    base = range(inst.base_count)
    for x in base:
        root, _ = links.find(x)
        if root != x and not quotient.equal(inst.element_of(root), inst.element_of(x)):
            raise OracleMismatchError(
                f"{inst.element_of(x)} and {inst.element_of(root)} share a class but differ in G/N"
            )
        checked += root != x
    keys: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for x in base:
        keys[quotient.normal_form(inst.element_of(x)).word].append(x)
    for same in keys.values():
        for x in same[1:]:
            checked += 1
            if labels[x] != labels[same[0]]:
                raise OracleMismatchError(
                    f"{inst.element_of(x)} and {inst.element_of(same[0])} are equal in G/N "
                    "but were not merged; raise the saturation budget"
                )
    if quotient.kind is PresentationKind.SMALL_CANCELLATION:
        floor = quotient.equality_floor()
        long_words = [x for x in base if len(inst.element_of(x)) > floor]
        pair_count = len(long_words) * (len(long_words) - 1) // 2
        if pair_count > PAIR_CAP:
            raise BudgetExceededError(f"{pair_count} oracle pairs exceed the cap of {PAIR_CAP}")
        for x, y in itertools.combinations(long_words, 2):
            if labels[x] == labels[y]:
                continue
            checked += 1
            if quotient.equal(inst.element_of(x), inst.element_of(y)):
                raise OracleMismatchError(
                    f"{inst.element_of(x)} and {inst.element_of(y)} are equal in G/N "
                    "but were not merged; raise the saturation budget"
                )
    return checked


def build_quotient(inst: SpinningInstance, budget: int | None = None) -> QuotientGraph:
    """Saturate the ball under ``N`` and collapse the orbits.

    Base vertices are joined to their in-ball images under every saturation element, cone
    vertices to the cone vertex of the image member. Base and cone classes never meet.

    Args:
        inst: The spinning instance.
        budget: Longest conjugator; ``inst.default_budget()`` when omitted.

    Raises:
        OracleMismatchError: If the classes disagree with the quotient presentation.
        BudgetExceededError: If the oracle scan exceeds the pair cap.
    """
    budget = inst.default_budget() if budget is None else budget
    cone = inst.cone
    elements = saturation_set(inst, budget)
    links = PotentialUnionFind(cone.graph.vertex_count)
    n = inst.base_count
    for s in elements:
        for x in range(n):
            y = inst.act(s, x)
            if y != OUT_OF_BALL and y != x:
                links.union(x, y, s)
        for j in range(len(inst.members)):
            k = inst.member_image(s, j)
            if k is not None and k != j:
                links.union(n + j, n + k, s)
    classes = tuple(tuple(members) for members in links.groups())
    labels = np.empty(cone.graph.vertex_count, dtype=np.int64)
    for index, members in enumerate(classes):
        labels[list(members)] = index
    edges = {
        (min(a, b), max(a, b))
        for u, v in cone.graph.edges
        if (a := int(labels[u])) != (b := int(labels[v]))
    }
    names = {index: cone.graph.label(members[0]) for index, members in enumerate(classes)}
    graph = MetricGraph(len(classes), edges, names)
    checked = None
    if inst.quotient is not None:
        checked = _oracle_pairs(inst, inst.quotient, labels, links)
    logger.info(
        f"quotient: {cone.graph.vertex_count} vertices in {len(classes)} classes "
        f"(budget {budget}, {len(elements)} saturation elements)"
    )
    return QuotientGraph(cone, labels, classes, graph, budget, tuple(elements), links, checked)


@dataclass(frozen=True)
class MinimalPair:
    """Representatives ``x, y`` of two classes at least distance in ``X̂``.

    Attributes:
        distance: ``d_X̂(x, y)``.
        quotient_distance: ``d_X̄(x̄, ȳ)``.
        certified: Whether the two distances agree.
    """

    x: int
    y: int
    distance: int
    quotient_distance: int
    certified: bool
    budget: int

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "x": self.x,
            "y": self.y,
            "distance": self.distance,
            "quotient_distance": self.quotient_distance,
            "certified": self.certified,
            "budget": self.budget,
        }


def certify_minimal(quotient: QuotientGraph, a: int, b: int) -> MinimalPair:
    """Closest representatives of the classes of ``a`` and ``b``; ties go to the smallest ids.

    Raises:
        BudgetExceededError: If the two classes hold more pairs than the pair cap.
    """
    first = quotient.classes[quotient.class_of(a)]
    second = np.array(quotient.classes[quotient.class_of(b)], dtype=np.int64)
    if len(first) * len(second) > PAIR_CAP:
        raise BudgetExceededError(f"{len(first) * len(second)} representative pairs")
    graph = quotient.source.graph
    candidates = []
    for x in first:
        row = graph.distances_from(x)[second]
        j = int(np.argmin(row))
        candidates.append((int(row[j]), x, int(second[j])))
    distance, x, y = min(candidates)
    reduced = quotient.distance(a, b)
    return MinimalPair(x, y, distance, reduced, distance == reduced, quotient.budget)


@dataclass(frozen=True)
class InjectivityReport:
    """Smallest displacement ``d_X(x, n·x)`` over sampled ``x`` and saturation elements ``n``.

    Attributes:
        min_displacement: ``None`` when ``N`` is trivial.
        tau: Ledger value ``τ(L)``, ``None`` without a ledger.
        free: Whether no sampled nontrivial ``n`` fixed a sampled ``x``.
    """

    min_displacement: int | None
    tau: Fraction | None
    free: bool
    examined: int
    witness: tuple[int, ...] = ()

    @property
    def passed(self) -> bool:
        """Freeness and, given a ledger, displacement above ``τ``."""
        if self.min_displacement is None:
            return True
        if not self.free:
            return False
        return self.tau is None or self.min_displacement > self.tau

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "min_displacement": self.min_displacement,
            "tau_ledger": None if self.tau is None else str(self.tau),
            "free": self.free,
            "examined": self.examined,
            "witness": list(self.witness),
            "passed": self.passed,
        }


def injectivity_report(
    inst: SpinningInstance, quotient: QuotientGraph, sampling: Sampling | None = None
) -> InjectivityReport:
    """Displacements are exact ``G``-lengths ``|x⁻¹ n x|``, not ball distances."""
    sampling = sampling or Sampling.auto(inst.base_count)
    vertices = sample_base_vertices(inst, sampling)
    presentation = inst.ball.presentation
    best: int | None = None
    witness: tuple[int, ...] = ()
    free = True
    examined = 0
    for index, n in enumerate(quotient.saturation):
        for x in vertices:
            element = inst.element_of(x)
            shift = presentation.length(~element * n * element)
            examined += 1
            if shift == 0:
                free = False
            if best is None or shift < best:
                best, witness = shift, (x, index)
    tau = inst.derived.tau(inst.L) if inst.derived is not None else None
    return InjectivityReport(best, tau, free, examined, witness)


def isoproj_check(inst: SpinningInstance, quotient: QuotientGraph, x: int, y: int) -> CheckReport:
    """Small projections make ``d_X̂`` comparable to ``d_X`` and equal to ``d_X̄``.

    The pair violates the check when ``d_X(x, y) > (L/20 + 2C) · d_X̂(x, y)`` or when
    ``d_X̂(x, y) ≠ d_X̄(x̄, ȳ)``.

    Raises:
        NotApplicableError: If some ``d^π_Y(x, y)`` exceeds ``L/20`` or no ledger is attached.
    """
    if inst.derived is None:
        raise NotApplicableError("the comparison constant needs a ledger")
    cone = inst.cone
    largest = max((cone.projector(j).dpi([x], [y]) for j in range(len(inst.members))), default=0)
    if largest > inst.L / 20:
        raise NotApplicableError(f"projection distance {largest} exceeds L/20 = {inst.L / 20}")
    factor = inst.L / 20 + 2 * inst.derived.C
    base_distance = cone.base.distance(x, y)
    coned = cone.graph.distance(x, y)
    reduced = quotient.distance(x, y)
    comparable = base_distance <= factor * coned
    equal = coned == reduced
    return CheckReport(
        "isoproj",
        1,
        () if comparable and equal else ((x, y),),
        {
            "factor": factor,
            "base_distance": base_distance,
            "cone_distance": coned,
            "quotient_distance": reduced,
            "comparable": comparable,
            "equal": equal,
        },
    )


def isoproj_report(
    inst: SpinningInstance, quotient: QuotientGraph, sampling: Sampling | None = None
) -> CheckReport:
    """:func:`isoproj_check` on disjoint pairs of sampled base vertices.

    Pairs with a projection distance above ``L/20`` are counted as skipped.
    """
    sampling = sampling or Sampling.auto(inst.base_count)
    vertices = sample_base_vertices(inst, sampling)
    examined = skipped = 0
    violations: list[tuple[int, ...]] = []
    for x, y in zip(vertices[::2], vertices[1::2], strict=False):
        try:
            check = isoproj_check(inst, quotient, x, y)
        except NotApplicableError:
            skipped += 1
            continue
        examined += 1
        violations.extend(check.violations)
    if skipped:
        logger.info(f"isoproj skipped {skipped} pairs with large projections")
    return CheckReport("isoproj", examined, tuple(violations), {"skipped": skipped})
