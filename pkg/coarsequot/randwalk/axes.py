"""Quasi-axes ``∪ g^r [y, g·y]`` of loxodromic elements, truncated to a Cayley ball."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from coarsequot.constants import AXIS_TRANSLATION_FACTOR, OUT_OF_BALL
from coarsequot.errors import EmptySubspaceError, TranslationTooSmallError
from coarsequot.graphs.core import Path, Subspace
from coarsequot.graphs.measure import (
    LemmaCheck,
    Measurement,
    Sampling,
    hausdorff_distance,
    quasiconvexity_constant,
)
from coarsequot.groups.ball import CayleyBall
from coarsequot.groups.words import GroupElement
from coarsequot.randwalk.core import translation_length

logger = logging.getLogger(__name__)

# Power used to estimate translation length outside free groups.
TRANSLATION_POWER: int = 8


@dataclass(frozen=True)
class QuasiAxis:
    """The part of a quasi-axis of ``g`` that lies in a ball.

    Attributes:
        g: The loxodromic element.
        base: Ball vertex ``y`` minimising ``d(y, g·y)``.
        displacement: ``d(y, g·y)``.
        tau: Translation length of ``g``.
        segment: Elements of ``[y, g·y]`` in order.
        points: Elements of ``∪ g^r [y, g·y]`` for ``|r| ≤ r_max`` in order, inside the ball or not.
        span: Ball vertices of ``∪ g^r [y, g·y]`` for ``|r| ≤ r_max``, in order along the axis.
        truncated: Whether some point of the span fell outside the ball.
        quasiconvexity: Measured quasiconvexity of the span in the ball.
        delta: Hyperbolicity constant the axis was built against.
    """

    g: GroupElement
    base: int
    displacement: int
    tau: Fraction
    segment: tuple[GroupElement, ...]
    points: tuple[GroupElement, ...]
    span: tuple[int, ...]
    truncated: bool
    quasiconvexity: Measurement
    delta: Fraction

    @property
    def quasiconvex(self) -> bool:
        """Whether the measured quasiconvexity is at most ``7δ``."""
        return self.quasiconvexity.value <= 7 * self.delta

    def subspace(self, ball: CayleyBall, name: str = "") -> Subspace:
        """The span as a subspace of the ball.

        Raises:
            EmptySubspaceError: If no point of the axis lies in the ball.
        """
        if not self.span:
            raise EmptySubspaceError(f"the axis of {self.g} misses the ball")
        return Subspace.of(ball.graph, self.span, name)

    def pieces(self, ball: CayleyBall) -> list[Path]:
        """Maximal runs of consecutive span vertices that are adjacent in the ball."""
        runs: list[list[int]] = []
        for v in self.span:
            if runs and ball.graph.has_edge(runs[-1][-1], v):
                runs[-1].append(v)
            else:
                runs.append([v])
        return [Path(tuple(run)) for run in runs]

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "g": str(self.g),
            "base": self.base,
            "displacement": self.displacement,
            "tau": str(self.tau),
            "span_size": len(self.span),
            "truncated": self.truncated,
            "quasiconvexity": self.quasiconvexity.to_dict(),
            "quasiconvex": self.quasiconvex,
        }


def _minimal_displacement(ball: CayleyBall, g: GroupElement) -> tuple[int, int]:
    presentation = ball.presentation
    best, base = -1, 0
    for v, x in enumerate(ball.elements):
        shift = presentation.length(~x * g * x)
        if best < 0 or shift < best:
            best, base = shift, v
    return base, best


def build_quasi_axis(
    ball: CayleyBall, g: GroupElement, delta: int | Fraction, r_max: int
) -> QuasiAxis:
    """Assemble the translates ``g^r [y, g·y]`` for ``|r| ≤ r_max`` inside the ball.

    Raises:
        TranslationTooSmallError: Unless ``τ(g) > 100δ`` and ``τ(g) > 0``.
        ValueError: If ``r_max`` is negative.
    """
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    presentation = ball.presentation
    delta = Fraction(delta)
    tau = translation_length(presentation, g, TRANSLATION_POWER)
    if tau <= AXIS_TRANSLATION_FACTOR * delta or tau == 0:
        raise TranslationTooSmallError(f"τ({g}) = {tau} is not above {AXIS_TRANSLATION_FACTOR}δ")
    base, displacement = _minimal_displacement(ball, g)
    y = ball.element_of(base)
    step = presentation.normal_form(~y * g * y)
    segment = tuple(y * prefix for prefix in step.prefixes())

    points: list[GroupElement] = []
    for r in range(-r_max, r_max + 1):
        shift = g**r
        points.extend(shift * element for element in (segment if r == -r_max else segment[1:]))
    span: list[int] = []
    truncated = False
    for element in points:
        v = ball.locate(element)
        if v == OUT_OF_BALL:
            truncated = True
        elif not span or span[-1] != v:
            span.append(v)
    if span:
        measured = quasiconvexity_constant(
            ball.graph, Subspace.of(ball.graph, span), Sampling.auto(len(span))
        )
    else:
        measured = Measurement(0, True)
    axis = QuasiAxis(
        g, base, displacement, tau, segment, tuple(points), tuple(span), truncated, measured, delta
    )
    if not axis.quasiconvex:
        logger.warning(f"axis of {g} measures {measured.value}-quasiconvex, above 7δ = {7 * delta}")
    logger.debug(f"axis of {g}: base {base}, {len(span)} ball vertices, truncated={truncated}")
    return axis


def axis_fellow_travel(
    ball: CayleyBall, axis: QuasiAxis, w: GroupElement, phi: int | Fraction, r_max: int
) -> LemmaCheck:
    """Hausdorff distance between the axis and ``∪ w^j γ`` in the ball is at most ``2Φ``.

    ``γ`` runs through the prefixes of the normal form of ``w``. Only translates that land in
    the ball are compared.
    """
    word = ball.presentation.normal_form(w)
    orbit: set[int] = set()
    for j in range(-r_max, r_max + 1):
        shift = w**j
        orbit.update(ball.locate(shift * prefix) for prefix in word.prefixes())
    orbit.discard(OUT_OF_BALL)
    bound = 2 * Fraction(phi)
    if not orbit or not axis.span:
        return LemmaCheck("axis_fellow_travel", bound, 0, (), {"compared": 0})
    observed = hausdorff_distance(ball.graph, axis.span, orbit)
    return LemmaCheck("axis_fellow_travel", bound, observed, (), {"compared": len(orbit)})
