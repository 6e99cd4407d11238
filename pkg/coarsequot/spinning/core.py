"""Spinning families on Cayley balls: members, normal-subgroup elements, shortening and bending.

The ambient group ``G`` is free (or a free product of free groups), so its word problem is free
reduction and the stabiliser of a coned axis is the cyclic group of the axis' primitive root.
Vertices ``0..n-1`` of the cone-off are ball vertices; ``n + j`` is the cone vertex of member
``j``.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from coarsequot.coning.core import ConeOff
from coarsequot.constants import OUT_OF_BALL, SHORTENING_EXPONENT_LIMIT, SPIN_EXPONENT_LIMIT
from coarsequot.errors import (
    EmptySubspaceError,
    NotApplicableError,
    NotThroughConeError,
    SearchExhaustedError,
)
from coarsequot.graphs.core import Path, Subspace
from coarsequot.graphs.measure import Sampling
from coarsequot.groups.ball import CayleyBall, cayley_ball
from coarsequot.groups.presentation import Presentation
from coarsequot.groups.words import GroupElement, power_exponent, primitive_root
from coarsequot.groups.words import translation_length as cyclic_length
from coarsequot.ledger.core import DerivedConstants
from coarsequot.randwalk.axes import QuasiAxis

logger = logging.getLogger(__name__)

# Longest product of generator powers tried when writing an element of N.
COMPLEXITY_DEPTH: int = 3


@dataclass(frozen=True)
class SpinningMember:
    """One coned subspace ``c·Y_i`` with its rotation generator.

    Attributes:
        subspace: The part of ``c·Y_i`` inside the ball.
        generator: ``h_{cY_i} = c · w_i · c⁻¹``.
        stabilizer: Generator ``c · root(w_i) · c⁻¹`` of the setwise stabiliser.
        orbit: Index ``i`` of the axis this member translates.
        translator: The coset representative ``c``.
    """

    subspace: Subspace
    generator: GroupElement
    stabilizer: GroupElement
    orbit: int
    translator: GroupElement

    @property
    def key(self) -> str:
        """Stable name ``Y<i>.<c>``."""
        return self.subspace.name


@dataclass(frozen=True)
class SpinningInstance:
    """A finite spinning family: ball, members, threshold ``L`` and the quotient oracle.

    Attributes:
        ball: The ambient Cayley ball ``X``.
        members: Coned members, in build order.
        L: Spinning threshold.
        quotient: Presentation of ``G/N`` used as the word-problem oracle, if known.
        derived: Ledger evaluated on measured base constants, when available.
        truncated: Whether some member was cut by the ball boundary.
    """

    ball: CayleyBall
    members: tuple[SpinningMember, ...]
    L: Fraction
    quotient: Presentation | None
    derived: DerivedConstants | None = None
    truncated: bool = False
    cone: ConeOff = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.ball.presentation.is_free:
            raise NotApplicableError("spinning families need a free ambient group")
        object.__setattr__(self, "L", Fraction(self.L))
        object.__setattr__(self, "cone", ConeOff(self.ball.graph, self.family))

    @property
    def family(self) -> tuple[Subspace, ...]:
        """The coned subspaces."""
        return tuple(m.subspace for m in self.members)

    @property
    def base_count(self) -> int:
        """Number of ball vertices."""
        return self.ball.vertex_count

    def element_of(self, v: int) -> GroupElement:
        """Group element of a ball vertex."""
        return self.ball.element_of(v)

    def member_image(self, g: GroupElement, index: int) -> int | None:
        """Index of the member ``g · Y_index``, or ``None`` if it is not in the family."""
        member = self.members[index]
        moved = g * member.translator
        for j, other in enumerate(self.members):
            if other.orbit != member.orbit:
                continue
            root = other.stabilizer.conjugate(~other.translator)
            if power_exponent(~other.translator * moved, root) is not None:
                return j
        return None

    def act(self, g: GroupElement, v: int) -> int:
        """Image of a cone-off vertex under ``g``, or ``OUT_OF_BALL``."""
        if v < self.base_count:
            x = self.element_of(v)
            if len(g) - len(x) > self.ball.radius:
                return OUT_OF_BALL
            return self.ball.act(g, v)
        j = self.member_image(g, v - self.base_count)
        return OUT_OF_BALL if j is None else self.base_count + j

    def act_path(self, g: GroupElement, vertices: Sequence[int]) -> list[int] | None:
        """Images of ``vertices`` under ``g``, or ``None`` if one leaves the ball."""
        images = [self.act(g, v) for v in vertices]
        return None if OUT_OF_BALL in images else images

    def carry(self, x: int, y: int) -> GroupElement:
        """The element ``n`` with ``n · x = y`` for ball vertices."""
        return self.element_of(y) * ~self.element_of(x)

    @property
    def trivial(self) -> bool:
        """Whether every rotation generator is the identity, so ``N = 1``."""
        return all(m.generator.is_identity for m in self.members)

    def default_budget(self) -> int:
        """Conjugator length ``(radius − |h|) / 2`` for the shortest nontrivial ``h``."""
        lengths = [len(m.generator) for m in self.members if not m.generator.is_identity]
        if not lengths:
            return 0
        return max(0, (self.ball.radius - min(lengths)) // 2)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "ball_radius": self.ball.radius,
            "ball_vertices": self.base_count,
            "members": [
                {"key": m.key, "generator": str(m.generator), "size": len(m.subspace)}
                for m in self.members
            ],
            "L": str(self.L),
            "quotient": self.quotient.to_dict() if self.quotient else None,
            "truncated": self.truncated,
        }


def _translators(ball: CayleyBall, radius: int) -> list[GroupElement]:
    if radius < 1:
        return [GroupElement.identity()]
    return list(cayley_ball(ball.presentation, radius).elements)


def spinning_instance(
    ball: CayleyBall,
    axes: Sequence[QuasiAxis],
    L: int | Fraction,
    quotient: Presentation | None,
    translate_radius: int,
    min_overlap: int,
    derived: DerivedConstants | None = None,
) -> SpinningInstance:
    """Translate each axis by every ``c`` with ``|c| ≤ translate_radius``, one per coset.

    Translates meeting the ball in fewer than ``min_overlap`` vertices are dropped.

    Raises:
        EmptySubspaceError: If no translate meets the ball in enough vertices.
    """
    members: list[SpinningMember] = []
    truncated = False
    for orbit, axis in enumerate(axes):
        root, _ = primitive_root(axis.g)
        kept: list[GroupElement] = []
        for c in _translators(ball, translate_radius):
            if any(power_exponent(~d * c, root) is not None for d in kept):
                continue
            kept.append(c)
            trace = sorted({ball.locate(c * p) for p in axis.points} - {OUT_OF_BALL})
            if len(trace) < max(min_overlap, 1):
                continue
            truncated = truncated or axis.truncated
            members.append(
                SpinningMember(
                    Subspace.of(ball.graph, trace, f"Y{orbit}.{c}"),
                    axis.g.conjugate(c),
                    root.conjugate(c),
                    orbit,
                    c,
                )
            )
    if not members:
        raise EmptySubspaceError("no axis translate meets the ball")
    logger.info(f"spinning family: {len(members)} members from {len(axes)} axes")
    return SpinningInstance(ball, tuple(members), Fraction(L), quotient, derived, truncated)


def line_instance(radius: int, period: int, L: int | Fraction) -> SpinningInstance:
    """The integers coned along the whole line, rotated by ``a^period``."""
    ball = cayley_ball(Presentation.free(1), radius)
    a = GroupElement.generator(0)
    member = SpinningMember(
        Subspace.of(ball.graph, ball.graph.vertices(), "Y0.1"),
        a**period,
        a,
        0,
        GroupElement.identity(),
    )
    return SpinningInstance(ball, (member,), Fraction(L), Presentation.cyclic(period))


# Elements of N


@dataclass(frozen=True)
class NormalElement:
    """An element of ``N`` written as a product of member generator powers.

    ``syllables`` lists ``(member, exponent)`` pairs from left to right; complexity is their
    count, so the identity alone has complexity 0.
    """

    element: GroupElement
    syllables: tuple[tuple[int, int], ...] = ()

    @property
    def complexity(self) -> int:
        """Syllable count."""
        return len(self.syllables)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "element": str(self.element),
            "syllables": [list(s) for s in self.syllables],
            "complexity": self.complexity,
        }


def _syllable_table(inst: SpinningInstance) -> dict[tuple[int, ...], tuple[int, int]]:
    table: dict[tuple[int, ...], tuple[int, int]] = {}
    exponents = [r for r in range(-SHORTENING_EXPONENT_LIMIT, SHORTENING_EXPONENT_LIMIT + 1) if r]
    for j, member in enumerate(inst.members):
        if member.generator.is_identity:
            continue
        for r in exponents:
            table.setdefault((member.generator**r).word, (j, r))
    return table


def normal_element(inst: SpinningInstance, n: GroupElement) -> NormalElement:
    """Shortest syllable expression of ``n`` of length at most ``COMPLEXITY_DEPTH``.

    Raises:
        SearchExhaustedError: If no such expression uses family generators.
    """
    if n.is_identity:
        return NormalElement(n)
    table = _syllable_table(inst)
    if n.word in table:
        return NormalElement(n, (table[n.word],))
    syllables = [(inst.members[j].generator ** r, (j, r)) for j, r in table.values()]
    for depth in range(2, COMPLEXITY_DEPTH + 1):
        for prefix in itertools.product(syllables, repeat=depth - 1):
            rest = n
            for element, _ in prefix:
                rest = ~element * rest
            if rest.word in table:
                return NormalElement(n, (*(s for _, s in prefix), table[rest.word]))
    raise SearchExhaustedError(f"{n} is not a product of {COMPLEXITY_DEPTH} family syllables")


# Spinning and shortening


@dataclass(frozen=True)
class SpinningCheck:
    """Smallest projection displacement ``d^π_Y(x, h^r x)`` against ``L``.

    Attributes:
        min_observed: Smallest displacement over in-ball samples, ``None`` if none landed.
        axis_displacement: Smallest ``τ(h_Y)``, exact for trees where it equals ``d^π_Y``.
    """

    L: Fraction
    min_observed: int | None
    axis_displacement: int | None
    witness: tuple[int, ...]
    examined: int

    @property
    def vacuous(self) -> bool:
        """Whether nothing was examined."""
        return self.min_observed is None and self.axis_displacement is None

    @property
    def passed(self) -> bool:
        """Whether every observed displacement exceeds ``L``."""
        observed = [v for v in (self.min_observed, self.axis_displacement) if v is not None]
        return all(v > self.L for v in observed)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "L": str(self.L),
            "min_observed": self.min_observed,
            "axis_displacement": self.axis_displacement,
            "witness": list(self.witness),
            "examined": self.examined,
            "vacuous": self.vacuous,
            "passed": self.passed,
        }


def sample_base_vertices(inst: SpinningInstance, sampling: Sampling) -> list[int]:
    """All ball vertices, or ``sampling.count`` distinct seeded ones."""
    n = inst.base_count
    if sampling.exact or sampling.count >= n:
        return list(range(n))
    return sorted(sampling.rng().choice(n, size=sampling.count, replace=False).tolist())


def verify_spinning(inst: SpinningInstance, sampling: Sampling | None = None) -> SpinningCheck:
    """Minimum of ``d^π_Y(x, h_Y^r x)`` over members, sampled ``x`` and ``0 < |r| ≤ 3``."""
    sampling = sampling or Sampling.auto(inst.base_count)
    vertices = sample_base_vertices(inst, sampling)
    exponents = [r for r in range(-SPIN_EXPONENT_LIMIT, SPIN_EXPONENT_LIMIT + 1) if r]
    best: int | None = None
    witness: tuple[int, ...] = ()
    examined = 0
    axis_best: int | None = None
    for j, member in enumerate(inst.members):
        if member.generator.is_identity:
            continue
        tau = cyclic_length(member.generator)
        axis_best = tau if axis_best is None else min(axis_best, tau)
        projector = inst.cone.projector(j)
        for r in exponents:
            h = member.generator**r
            for x in vertices:
                hx = inst.act(h, x)
                if hx == OUT_OF_BALL:
                    continue
                examined += 1
                shift = projector.dpi([x], [hx])
                if best is None or shift < best:
                    best, witness = shift, (j, x, r)
    check = SpinningCheck(inst.L, best, axis_best, witness, examined)
    logger.debug(f"spinning: min {best}, axis {axis_best}, {examined} in-ball samples")
    return check


@dataclass(frozen=True)
class ShorteningPair:
    """``(Y, h_Y^exponent)`` lowering the complexity of a normal element.

    Attributes:
        verified: Whether the projection condition could be evaluated inside the ball.
    """

    index: int
    exponent: int
    complexity: int
    verified: bool

    @property
    def generator_power(self) -> tuple[int, int]:
        """``(member, exponent)``."""
        return self.index, self.exponent


def _projection_condition(inst: SpinningInstance, index: int, x: int, hx: int) -> bool | None:
    cone_vertex = inst.cone.cone_of(index)
    if cone_vertex in (x, hx):
        return True
    if hx == OUT_OF_BALL:
        return None
    lifted_x = inst.cone.lift_set([x])
    lifted_hx = inst.cone.lift_set([hx])
    return inst.cone.projector(index).dpi(lifted_x, lifted_hx) > inst.L / 10


def find_shortening_pair(
    inst: SpinningInstance, x: int, h: NormalElement
) -> ShorteningPair | None:
    """A shortening pair for ``h`` at ``x``; ``None`` when ``h`` fixes ``x``.

    The leading syllable is tried first, then every member power.

    Raises:
        SearchExhaustedError: If no member power lowers the complexity.
    """
    hx = inst.act(h.element, x)
    if hx == x or h.element.is_identity:
        return None
    candidates = []
    if h.syllables:
        j, r = h.syllables[0]
        candidates.append((j, -r))
    exponents = [r for r in range(-SHORTENING_EXPONENT_LIMIT, SHORTENING_EXPONENT_LIMIT + 1) if r]
    candidates.extend(itertools.product(range(len(inst.members)), exponents))
    for j, r in candidates:
        condition = _projection_condition(inst, j, x, hx)
        if condition is False:
            continue
        shorter = inst.members[j].generator ** r * h.element
        try:
            complexity = normal_element(inst, shorter).complexity
        except SearchExhaustedError:
            continue
        if complexity < h.complexity:
            return ShorteningPair(j, r, complexity, condition is True)
    raise SearchExhaustedError(f"no shortening pair for {h.element} at vertex {x}")


def bend(inst: SpinningInstance, path: Path, index: int, exponent: int) -> Path | None:
    """Replace the tail after the first interior ``v_Y`` by its ``h_Y^exponent`` translate.

    Returns:
        Path | None: The bent path, or ``None`` if the translated tail leaves the ball.

    Raises:
        NotThroughConeError: If ``v_Y`` is not an interior vertex of ``path``.
    """
    cone_vertex = inst.cone.cone_of(index)
    interior = path.vertices[1:-1]
    if cone_vertex not in interior:
        label = inst.cone.graph.label(cone_vertex)
        raise NotThroughConeError(f"path does not pass through {label}")
    split = 1 + interior.index(cone_vertex)
    g = inst.members[index].generator ** exponent
    tail = inst.act_path(g, path.vertices[split + 1 :])
    if tail is None:
        return None
    return Path((*path.vertices[: split + 1], *tail)).validate(inst.cone.graph)

