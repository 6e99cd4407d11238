"""Cayley balls: the radius-ρ ball of a Cayley graph as a metric graph."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from coarsequot.constants import BALL_VERTEX_CAP, EQUALITY_CHECK_CAP, OUT_OF_BALL
from coarsequot.errors import BudgetExceededError
from coarsequot.graphs.core import MetricGraph, Path
from coarsequot.groups.presentation import Presentation, PresentationKind
from coarsequot.groups.words import GroupElement

logger = logging.getLogger(__name__)


@dataclass
class _EqualityBudget:
    cap: int
    used: int = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.cap:
            raise BudgetExceededError(f"more than {self.cap} word-problem checks")


@dataclass(frozen=True)
class CayleyBall:
    """All elements of word length at most ``radius``, joined by right multiplication.

    Attributes:
        presentation: The group.
        radius: Ball radius.
        graph: The ball as a metric graph; vertex 0 is the identity.
        elements: Shortlex-least word of each vertex.
    """

    presentation: Presentation
    radius: int
    graph: MetricGraph = field(repr=False)
    elements: tuple[GroupElement, ...] = field(repr=False)
    _index: dict[tuple[int, ...], int] = field(repr=False, compare=False)

    origin: int = 0

    @property
    def vertex_count(self) -> int:
        """Number of vertices."""
        return len(self.elements)

    def element_of(self, v: int) -> GroupElement:
        """The group element at vertex ``v``."""
        return self.elements[self.graph.check_vertex(v)]

    def locate(self, element: GroupElement, budget: _EqualityBudget | None = None) -> int:
        """Vertex of ``element``, or ``OUT_OF_BALL``."""
        form = self.presentation.normal_form(element)
        v = self._index.get(form.word)
        if v is not None:
            return v
        if self.presentation.kind is not PresentationKind.SMALL_CANCELLATION:
            return OUT_OF_BALL
        found = _scan_for_equal(
            self.presentation, self.elements, form, budget or _EqualityBudget(EQUALITY_CHECK_CAP)
        )
        return OUT_OF_BALL if found is None else found

    def act(self, g: GroupElement, v: int) -> int:
        """Vertex of ``g · element_of(v)``, or ``OUT_OF_BALL``."""
        return self.locate(g * self.element_of(v))

    def act_all(self, g: GroupElement, vertices: Iterable[int]) -> list[int]:
        """``act`` over several vertices."""
        return [self.act(g, v) for v in vertices]

    def path_of(self, elements: Sequence[GroupElement]) -> Path | None:
        """Vertex path of a sequence of elements, or ``None`` if one leaves the ball."""
        vertices = [self.locate(g) for g in elements]
        if OUT_OF_BALL in vertices:
            return None
        return Path(tuple(vertices))

    def to_dict(self) -> dict[str, object]:
        """JSON-ready graph form with word labels."""
        return self.graph.to_dict()


def cayley_ball(
    presentation: Presentation, radius: int, vertex_cap: int = BALL_VERTEX_CAP
) -> CayleyBall:
    """Enumerate the ball in shortlex order by breadth-first search.

    Args:
        presentation: The group.
        radius: Ball radius, at least 1.
        vertex_cap: Largest permitted vertex count.

    Returns:
        CayleyBall: The ball; word labels are attached to the graph.

    Raises:
        BudgetExceededError: If the ball would exceed ``vertex_cap`` vertices.
        ValueError: If ``radius`` is below 1.
    """
    if radius < 1:
        raise ValueError("ball radius must be at least 1")
    generators = presentation.generators()
    elements: list[GroupElement] = [GroupElement.identity()]
    index: dict[tuple[int, ...], int] = {(): 0}
    edges: set[tuple[int, int]] = set()
    budget = _EqualityBudget(EQUALITY_CHECK_CAP)

    def lookup(candidate: GroupElement) -> int | None:
        w = index.get(candidate.word)
        if w is None and presentation.kind is PresentationKind.SMALL_CANCELLATION:
            w = _scan_for_equal(presentation, elements, candidate, budget)
        return w

    frontier = [0]
    for level in range(1, radius + 2):
        next_frontier: list[int] = []
        for v in frontier:
            for letter in generators:
                candidate = presentation.normal_form(elements[v] * letter)
                w = lookup(candidate)
                if w is None:
                    # Elements past the radius are dropped; their edges are not part of the ball.
                    if level > radius:
                        continue
                    w = len(elements)
                    if w >= vertex_cap:
                        raise BudgetExceededError(f"ball exceeds {vertex_cap} vertices")
                    elements.append(candidate)
                    index[candidate.word] = w
                    next_frontier.append(w)
                if w != v:
                    edges.add((min(v, w), max(v, w)))
        frontier = next_frontier
        logger.debug(f"ball level {level}: {len(frontier)} new elements")
    labels = {v: str(g) for v, g in enumerate(elements)}
    graph = MetricGraph(len(elements), edges, labels)
    return CayleyBall(presentation, radius, graph, tuple(elements), index)


def _scan_for_equal(
    presentation: Presentation,
    elements: Sequence[GroupElement],
    candidate: GroupElement,
    budget: _EqualityBudget,
) -> int | None:
    """Equality scan for Dehn-reduced words missing from the index.

    Only words longer than ``Presentation.equality_floor`` can equal a distinct reduced word.
    """
    floor = presentation.equality_floor()
    if len(candidate) <= floor or not elements or len(elements[-1]) <= floor:
        return None
    for w, existing in enumerate(elements):
        if len(existing) <= floor:
            continue
        budget.spend()
        if presentation.equal(existing, candidate):
            return w
    return None
