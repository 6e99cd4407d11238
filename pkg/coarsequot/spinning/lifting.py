"""Lifting quotient triangles to closed triangles in the cone-off by repeated bending."""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from coarsequot.errors import NotThroughConeError, SearchExhaustedError
from coarsequot.graphs.core import Path
from coarsequot.groups.words import GroupElement
from coarsequot.spinning.core import (
    SpinningInstance,
    bend,
    find_shortening_pair,
    normal_element,
)
from coarsequot.spinning.quotient import QuotientGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TriangleLift:
    """Outcome of closing a lift.

    Attributes:
        closed: Whether the last side ends where the first starts.
        sides: The three sides after bending.
        trace: Complexity of the defect before each bend and at the end.
        defect: Element carrying the start onto the end; the identity once closed.
        bends: Number of bends applied.
        truncated: Whether a bend would have left the ball.
        slimness: Largest distance from a side to the other two, for closed lifts.
        isometric: Whether each side is as long as the quotient distance between its endpoints.
    """

    closed: bool
    sides: tuple[Path, ...]
    trace: tuple[int, ...]
    defect: GroupElement
    bends: int
    truncated: bool = False
    slimness: int | None = None
    isometric: bool | None = None

    @property
    def descending(self) -> bool:
        """Whether the complexity trace strictly decreases."""
        return all(a > b for a, b in zip(self.trace, self.trace[1:], strict=False))

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "closed": self.closed,
            "sides": [list(side.vertices) for side in self.sides],
            "trace": list(self.trace),
            "defect": str(self.defect),
            "bends": self.bends,
            "truncated": self.truncated,
            "slimness": self.slimness,
            "isometric": self.isometric,
        }


def _defect(inst: SpinningInstance, sides: Sequence[Path]) -> GroupElement:
    return inst.carry(sides[0].start, sides[-1].end)


def _slimness(inst: SpinningInstance, sides: Sequence[Path]) -> int:
    graph = inst.cone.graph
    worst = 0
    for k, side in enumerate(sides):
        others = [v for j, other in enumerate(sides) if j != k for v in other.vertices]
        reach = graph.distances_to_set(others)
        worst = max(worst, int(reach[list(side.vertices)].max()))
    return worst


def _bend_sides(
    inst: SpinningInstance, sides: list[Path], index: int, exponent: int
) -> list[Path] | None:
    """Bend the first side through ``v_Y`` and translate the sides after it.

    Raises:
        NotThroughConeError: If no side passes through ``v_Y`` in its interior.
    """
    for k, side in enumerate(sides):
        try:
            bent = bend(inst, side, index, exponent)
        except NotThroughConeError:
            continue
        if bent is None:
            return None
        g = inst.members[index].generator ** exponent
        translated = []
        for other in sides[k + 1 :]:
            images = inst.act_path(g, other.vertices)
            if images is None:
                return None
            translated.append(Path(tuple(images)))
        return [*sides[:k], bent, *translated]
    label = inst.cone.graph.label(inst.cone.cone_of(index))
    raise NotThroughConeError(f"no side passes through {label}")


def close_lift(inst: SpinningInstance, sides: Sequence[Path]) -> TriangleLift:
    """Bend an open lift until its defect is trivial.

    The sides start at base vertices and each ends where the next begins; the last one ends in
    the ``N``-orbit of the first start. A missing shortening pair, a cone vertex off the path
    or a bend leaving the ball stops the loop and leaves the lift open.
    """
    current = list(sides)
    defect = _defect(inst, current)
    trace: list[int] = []
    bends = 0
    truncated = False
    while True:
        try:
            h = normal_element(inst, defect)
        except SearchExhaustedError as e:
            logger.debug(f"defect {defect} has no short expression: {e}")
            break
        trace.append(h.complexity)
        if h.complexity == 0:
            break
        try:
            pair = find_shortening_pair(inst, current[0].start, h)
        except SearchExhaustedError as e:
            logger.debug(f"open lift: {e}")
            break
        if pair is None:
            break
        try:
            bent = _bend_sides(inst, current, pair.index, pair.exponent)
        except NotThroughConeError as e:
            logger.debug(f"open lift: {e}")
            break
        if bent is None:
            truncated = True
            break
        current = bent
        bends += 1
        defect = _defect(inst, current)
    closed = defect.is_identity
    slimness = _slimness(inst, current) if closed else None
    return TriangleLift(closed, tuple(current), tuple(trace), defect, bends, truncated, slimness)


def _closest(quotient: QuotientGraph, source: int, target_class: int) -> int:
    members = np.array(quotient.classes[target_class], dtype=np.int64)
    row = quotient.source.graph.distances_from(source)[members]
    return int(members[int(np.argmin(row))])


def lift_triangle(
    inst: SpinningInstance, quotient: QuotientGraph, a: int, b: int, c: int
) -> TriangleLift:
    """Lift the quotient triangle on the classes of ``a``, ``b`` and ``c``.

    Vertices are chosen pairwise minimal: ``x`` is the representative of ``ā``, then ``y`` in
    ``b̄`` closest to ``x``, ``z`` in ``c̄`` closest to ``y`` and ``x′`` in ``ā`` closest to
    ``z``. The open lift ``[x, y] [y, z] [z, x′]`` is then closed by bending.
    """
    graph = quotient.source.graph
    x = quotient.rep(quotient.class_of(a))
    y = _closest(quotient, x, quotient.class_of(b))
    z = _closest(quotient, y, quotient.class_of(c))
    end = _closest(quotient, z, quotient.class_of(a))
    sides = [graph.geodesic(x, y), graph.geodesic(y, z), graph.geodesic(z, end)]
    lift = close_lift(inst, sides)
    isometric = all(
        side.length == quotient.distance(side.start, side.end) for side in lift.sides
    )
    return dataclasses.replace(lift, isometric=isometric)


def random_quotient_triangles(
    quotient: QuotientGraph, count: int, seed: int
) -> list[tuple[int, int, int]]:
    """Seeded triples of base-class representatives."""
    base = quotient.source.base.vertex_count
    reps = sorted({quotient.rep(quotient.class_of(v)) for v in range(base)})
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(reps), size=(count, 3))
    return [(reps[int(i)], reps[int(j)], reps[int(k)]) for i, j, k in picks]


@dataclass(frozen=True)
class LiftSummary:
    """Aggregate over a batch of triangle lifts."""

    lifts: tuple[TriangleLift, ...]

    @property
    def closed(self) -> int:
        """Number of closed lifts."""
        return sum(lift.closed for lift in self.lifts)

    @property
    def max_slimness(self) -> int | None:
        """Largest slimness among closed lifts."""
        values = [lift.slimness for lift in self.lifts if lift.slimness is not None]
        return max(values, default=None)

    @property
    def descending(self) -> bool:
        """Whether every trace strictly decreases."""
        return all(lift.descending for lift in self.lifts)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "triangles": len(self.lifts),
            "triangles_closed": self.closed,
            "max_slimness": self.max_slimness,
            "descending": self.descending,
            "isometric": all(lift.isometric is not False for lift in self.lifts),
            "truncated": sum(lift.truncated for lift in self.lifts),
        }


def lift_random_triangles(
    inst: SpinningInstance, quotient: QuotientGraph, count: int, seed: int
) -> LiftSummary:
    """Lift ``count`` seeded quotient triangles."""
    lifts = []
    for a, b, c in random_quotient_triangles(quotient, count, seed):
        lift = lift_triangle(inst, quotient, a, b, c)
        if not lift.closed:
            logger.debug(f"triangle {(a, b, c)} stays open with defect {lift.defect}")
        lifts.append(lift)
    logger.info(f"lifted {len(lifts)} triangles, {sum(lift.closed for lift in lifts)} closed")
    return LiftSummary(tuple(lifts))
