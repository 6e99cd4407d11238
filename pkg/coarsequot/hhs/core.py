"""Hierarchy structures as data, the built-in toy structures and JSON fixtures.

Domain ``0`` is always the ⊑-maximal domain ``S``. Every domain space carries anchors: the point
of ``X`` each of its vertices stands for, or ``NO_ANCHOR``. Anchors are how a group element acting
on ``X`` moves vertices between domain spaces.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import logging
from collections import defaultdict
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from coarsequot.constants import OUT_OF_BALL, PAIR_CAP
from coarsequot.errors import (
    BudgetExceededError,
    InvalidGraphError,
    MissingRhoError,
    NotApplicableError,
    ParseError,
)
from coarsequot.graphs.core import MetricGraph
from coarsequot.graphs.io import graph_from_dict
from coarsequot.graphs.measure import Sampling, slim_constant
from coarsequot.groups.ball import CayleyBall, cayley_ball
from coarsequot.groups.presentation import Presentation
from coarsequot.groups.words import GroupElement, cyclic_reduce

logger = logging.getLogger(__name__)

NO_ANCHOR = -1
TOP = 0

ProjectionMap = Callable[[int, int], frozenset[int]]
DomainAction = Callable[[GroupElement, int], int | None]


class Relation(StrEnum):
    """Relation of an ordered domain pair ``(U, V)``."""

    NESTED = "nested"
    CONTAINS = "contains"
    ORTH = "orth"
    TRANS = "trans"
    EQUAL = "equal"


class BuiltinKind(StrEnum):
    """Structures the workbench can build by itself."""

    TRIVIAL = "trivial"
    REL_FREE_PRODUCT = "rel_free_product"


@dataclass(frozen=True, eq=False)
class Domain:
    """One domain: its name, its hyperbolic space and the anchors of that space in ``X``."""

    name: str
    space: MetricGraph = field(repr=False)
    anchors: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if self.anchors and len(self.anchors) != self.space.vertex_count:
            raise InvalidGraphError(
                f"domain {self.name}: {len(self.anchors)} anchors for "
                f"{self.space.vertex_count} vertices"
            )

    @functools.cached_property
    def local_of(self) -> dict[int, int]:
        """Local vertex of each anchored point."""
        return {a: i for i, a in enumerate(self.anchors) if a != NO_ANCHOR}

    def diameter(self, points: frozenset[int] | set[int]) -> int:
        """Diameter of a vertex set of the domain space."""
        if len(points) < 2:
            return 0
        if len(points) == 2:
            a, b = points
            return self.space.distance(a, b)
        return self.space.diameter_of(points)

    def gap(self, first: frozenset[int], second: frozenset[int]) -> int:
        """Least distance between two non-empty vertex sets of the domain space."""
        if first & second:
            return 0
        return self.space.set_distance(first, second)


class TableProjection:
    """Projections read from explicit per-domain tables."""

    def __init__(self, tables: Sequence[Sequence[Sequence[int]]]) -> None:
        """Store ``tables[u][x]``, the projection of point ``x`` to domain ``u``."""
        self.tables = tuple(tuple(frozenset(points) for points in table) for table in tables)

    def __call__(self, u: int, x: int) -> frozenset[int]:
        return self.tables[u][x]


@dataclass(frozen=True, eq=False)
class HHSStructure:
    """A finite hierarchy structure on the points of ``X``.

    Attributes:
        name: Label used in reports.
        space: ``X``; its vertices are the points projected.
        domains: Index set; entry ``0`` is ``S``.
        nested: Proper nesting pairs ``(U, V)`` meaning ``U ⊏ V``.
        orthogonal: Orthogonal pairs, stored with the smaller index first.
        proj: ``proj(U, x)``, the projection of point ``x`` to ``CU``.
        rho: ``rho[(U, V)]`` in ``CV``, for ``U ⊏ V`` and ``U ⋔ V``.
        E: The structure constant.
        ball: The Cayley ball ``X`` comes from, for group-equivariant structures.
        domain_action: ``(g, U) ↦ gU``, or ``None`` when ``gU`` lies outside the structure.
    """

    name: str
    space: MetricGraph = field(repr=False)
    domains: tuple[Domain, ...] = field(repr=False)
    nested: frozenset[tuple[int, int]] = field(repr=False)
    orthogonal: frozenset[tuple[int, int]] = field(repr=False)
    proj: ProjectionMap = field(repr=False)
    rho: Mapping[tuple[int, int], frozenset[int]] = field(repr=False)
    E: Fraction = Fraction(1)
    ball: CayleyBall | None = field(default=None, repr=False)
    domain_action: DomainAction | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not self.domains:
            raise InvalidGraphError("a structure needs at least the domain S")
        count = len(self.domains)
        for u, v in self.nested | self.orthogonal:
            if not (0 <= u < count and 0 <= v < count):
                raise InvalidGraphError(f"relation pair {(u, v)} out of range")
        object.__setattr__(self, "E", Fraction(self.E))
        object.__setattr__(
            self, "orthogonal", frozenset((min(u, v), max(u, v)) for u, v in self.orthogonal)
        )

    @property
    def domain_count(self) -> int:
        """Number of domains."""
        return len(self.domains)

    @property
    def point_count(self) -> int:
        """Number of points of ``X``."""
        return self.space.vertex_count

    @property
    def top_space(self) -> MetricGraph:
        """``CS``."""
        return self.domains[TOP].space

    @functools.cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        """Domains properly nested into each domain."""
        below: dict[int, list[int]] = defaultdict(list)
        for u, v in sorted(self.nested):
            below[v].append(u)
        return {v: tuple(members) for v, members in below.items()}

    def nested_in(self, v: int) -> tuple[int, ...]:
        """``{U : U ⊏ V}``."""
        return self.children.get(v, ())

    def relation(self, u: int, v: int) -> Relation:
        """Relation of ``U`` to ``V``."""
        if u == v:
            return Relation.EQUAL
        if (u, v) in self.nested:
            return Relation.NESTED
        if (v, u) in self.nested:
            return Relation.CONTAINS
        if (min(u, v), max(u, v)) in self.orthogonal:
            return Relation.ORTH
        return Relation.TRANS

    def projection(self, u: int, x: int) -> frozenset[int]:
        """``π_U(x)``."""
        return self.proj(u, x)

    def rho_of(self, u: int, v: int) -> frozenset[int]:
        """``ρ^U_V``.

        Raises:
            MissingRhoError: If the structure defines no such set.
        """
        try:
            return self.rho[(u, v)]
        except KeyError:
            raise MissingRhoError(
                f"no relative projection from {self.domains[u].name} to {self.domains[v].name}"
            ) from None

    def spread(self, u: int, *sets: frozenset[int]) -> int:
        """Diameter in ``CU`` of the union of vertex sets."""
        return self.domains[u].diameter(frozenset().union(*sets))

    def distance(self, u: int, x: int, y: int) -> int:
        """``d_U(x, y) = diam(π_U(x) ∪ π_U(y))``."""
        return self.spread(u, self.proj(u, x), self.proj(u, y))

    def gap(self, u: int, x: int, y: int) -> int:
        """Least distance in ``CU`` between ``π_U(x)`` and ``π_U(y)``."""
        return self.domains[u].gap(self.proj(u, x), self.proj(u, y))

    def coordinates(self, x: int, y: int) -> np.ndarray:
        """``d_U(x, y)`` for every domain, indexed by domain."""
        return np.fromiter(
            (self.distance(u, x, y) for u in range(self.domain_count)),
            dtype=np.int64,
            count=self.domain_count,
        )

    def act_domain(self, g: GroupElement, u: int) -> int | None:
        """The domain ``gU``, or ``None``.

        Raises:
            NotApplicableError: If the structure carries no group action.
        """
        if u == TOP:
            return TOP
        if self.domain_action is None:
            raise NotApplicableError(f"{self.name} carries no action on its domains")
        return self.domain_action(g, u)

    def to_dict(self) -> dict[str, object]:
        """Fixture form, readable by ``structure_from_dict``.

        Raises:
            BudgetExceededError: If the projection tables would exceed the pair cap.
        """
        if self.domain_count * self.point_count > PAIR_CAP:
            raise BudgetExceededError(
                f"{self.domain_count} domains × {self.point_count} points exceed the cap"
            )
        return {
            "name": self.name,
            "E": str(self.E),
            "space": self.space.to_dict(),
            "domains": [
                {"name": d.name, "space": d.space.to_dict(), "anchors": list(d.anchors)}
                for d in self.domains
            ],
            "nested": [list(p) for p in sorted(self.nested)],
            "orthogonal": [list(p) for p in sorted(self.orthogonal)],
            "proj": [
                [sorted(self.proj(u, x)) for x in range(self.point_count)]
                for u in range(self.domain_count)
            ],
            "rho": [
                {"from": u, "to": v, "points": sorted(points)}
                for (u, v), points in sorted(self.rho.items())
            ],
        }


def structure_from_dict(payload: Mapping[str, Any]) -> HHSStructure:
    """Build a structure from its fixture form.

    Raises:
        ParseError: If a field is missing or has the wrong shape.
    """
    try:
        space = graph_from_dict(payload["space"])
        domains = tuple(
            Domain(
                str(entry["name"]),
                graph_from_dict(entry["space"]),
                tuple(int(a) for a in entry.get("anchors", [])),
            )
            for entry in payload["domains"]
        )
        nested = frozenset((int(u), int(v)) for u, v in payload.get("nested", []))
        orthogonal = frozenset((int(u), int(v)) for u, v in payload.get("orthogonal", []))
        tables = [[[int(p) for p in points] for points in t] for t in payload["proj"]]
        rho = {
            (int(entry["from"]), int(entry["to"])): frozenset(int(p) for p in entry["points"])
            for entry in payload.get("rho", [])
        }
        E = Fraction(str(payload.get("E", 1)))
        name = str(payload.get("name", "fixture"))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"invalid structure JSON: {e}") from e
    if len(tables) != len(domains) or any(len(t) != space.vertex_count for t in tables):
        raise ParseError("projection tables must list every point for every domain")
    return HHSStructure(name, space, domains, nested, orthogonal, TableProjection(tables), rho, E)


def read_structure(path: str | Path) -> HHSStructure:
    """Load a structure fixture from JSON.

    Raises:
        ParseError: If the file is not valid JSON or not a structure.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from e
    return structure_from_dict(payload)


# Free-product syllables


def syllables(presentation: Presentation, element: GroupElement) -> list[tuple[int, GroupElement]]:
    """Maximal subwords lying in one free factor, with the factor index."""
    parts: list[tuple[int, list[int]]] = []
    for letter in element.word:
        factor = presentation.factor_of(letter)
        if parts and parts[-1][0] == factor:
            parts[-1][1].append(letter)
        else:
            parts.append((factor, [letter]))
    return [(factor, GroupElement(tuple(letters))) for factor, letters in parts]


def cyclic_syllable_length(presentation: Presentation, element: GroupElement) -> int:
    """Syllable length of the cyclically reduced core, first and last syllables merged."""
    _, core = cyclic_reduce(element)
    parts = syllables(presentation, core)
    if len(parts) > 1 and parts[0][0] == parts[-1][0]:
        return len(parts) - 1
    return len(parts)


def coset_rep(presentation: Presentation, element: GroupElement, factor: int) -> GroupElement:
    """Shortest element of ``element · H_factor``: the word without its trailing factor letters."""
    word = element.word
    end = len(word)
    while end and presentation.factor_of(word[end - 1]) == factor:
        end -= 1
    return GroupElement(word[:end])


def coset_gate(
    presentation: Presentation, rep: GroupElement, factor: int, element: GroupElement
) -> GroupElement:
    """Closest point of the coset ``rep · H_factor`` to ``element`` in the Cayley tree."""
    word = element.word
    if word[: len(rep)] != rep.word:
        return rep
    end = len(rep)
    while end < len(word) and presentation.factor_of(word[end]) == factor:
        end += 1
    return GroupElement(word[:end])


# Built-in structures


def _top_domain(graph: MetricGraph) -> Domain:
    return Domain("S", graph, tuple(graph.vertices()))


def _identity_projection(u: int, x: int) -> frozenset[int]:
    return frozenset((x,))


def _measured_E(graph: MetricGraph, floor: int, sampling: Sampling | None) -> Fraction:
    delta = slim_constant(graph, sampling or Sampling.auto(graph.vertex_count)).value
    return max(Fraction(floor), Fraction(delta))


def trivial_instance(
    presentation: Presentation, radius: int, sampling: Sampling | None = None
) -> HHSStructure:
    """One domain ``S`` with ``CS`` the Cayley ball and ``π_S`` the identity.

    ``E`` is the measured slimness of the ball, at least 1 so that the identity projection is
    ``(E, E)``-coarsely Lipschitz.
    """
    ball = cayley_ball(presentation, radius)
    E = _measured_E(ball.graph, 1, sampling)
    logger.info(f"trivial structure on {ball.vertex_count} points, E = {E}")
    return HHSStructure(
        f"trivial(r={radius})",
        ball.graph,
        (_top_domain(ball.graph),),
        frozenset(),
        frozenset(),
        _identity_projection,
        {},
        E,
        ball,
        lambda g, u: u,
    )


class _CosetProjection:
    """Gate projections of ball points to coset domains, cached per pair."""

    def __init__(
        self,
        ball: CayleyBall,
        cosets: Sequence[tuple[int, GroupElement]],
        domains: Sequence[Domain],
    ) -> None:
        self.ball = ball
        self.cosets = cosets
        self.domains = domains
        self._cached = functools.lru_cache(maxsize=1 << 20)(self._compute)

    def _compute(self, u: int, x: int) -> frozenset[int]:
        if u == TOP:
            return frozenset((x,))
        factor, rep = self.cosets[u]
        gate = coset_gate(self.ball.presentation, rep, factor, self.ball.element_of(x))
        return frozenset((self.domains[u].local_of[self.ball.locate(gate)],))

    def __call__(self, u: int, x: int) -> frozenset[int]:
        return self._cached(u, x)


class _CosetRho(Mapping[tuple[int, int], frozenset[int]]):
    """``ρ^U_S`` is the coset itself; between two cosets it is the gate of one onto the other."""

    def __init__(self, domains: Sequence[Domain], proj: ProjectionMap) -> None:
        self.domains = domains
        self.proj = proj
        self._cache: dict[tuple[int, int], frozenset[int]] = {}

    def __getitem__(self, key: tuple[int, int]) -> frozenset[int]:
        u, v = key
        count = len(self.domains)
        if not (0 < u < count and 0 <= v < count and u != v):
            raise KeyError(key)
        if key not in self._cache:
            if v == TOP:
                self._cache[key] = frozenset(self.domains[u].anchors)
            else:
                self._cache[key] = frozenset().union(
                    *(self.proj(v, a) for a in self.domains[u].anchors)
                )
        return self._cache[key]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        count = len(self.domains)
        for u in range(1, count):
            for v in range(count):
                if v != u:
                    yield (u, v)

    def __len__(self) -> int:
        count = len(self.domains)
        return (count - 1) * (count - 1)


def relative_free_product_instance(
    factor_ranks: Sequence[int], radius: int, sampling: Sampling | None = None
) -> HHSStructure:
    """The relatively hyperbolic structure of a free product of free groups.

    Domains are ``S`` and the cosets ``gH_i`` of the factors meeting the ball in at least two
    points. ``CS`` is the ball with every coset made complete, ``CgH_i`` is the coset's subtree,
    projections are gates in the Cayley tree, the cosets are pairwise transverse and all nest
    into ``S``. ``E`` is the measured slimness of ``CS``, at least 2 so the nesting chain fits.

    Raises:
        NotApplicableError: With fewer than two factors.
        BudgetExceededError: If the ball exceeds the vertex cap.
    """
    if len(factor_ranks) < 2:
        raise NotApplicableError("a single factor is elementary relative to itself")
    presentation = Presentation.free_product(factor_ranks)
    ball = cayley_ball(presentation, radius)
    members: dict[tuple[int, tuple[int, ...]], list[int]] = defaultdict(list)
    for v, element in enumerate(ball.elements):
        for factor in range(len(factor_ranks)):
            members[(factor, coset_rep(presentation, element, factor).word)].append(v)
    keys = sorted(
        (k for k, vs in members.items() if len(vs) >= 2), key=lambda k: (k[0], len(k[1]), k[1])
    )
    cs_edges = set(ball.graph.edges)
    cosets: list[tuple[int, GroupElement]] = [(-1, GroupElement.identity())]
    for key in keys:
        vs = members[key]
        cs_edges.update((a, b) for i, a in enumerate(vs) for b in vs[i + 1 :])
    labels = {v: ball.graph.label(v) for v in ball.graph.vertices()}
    cs = MetricGraph(ball.vertex_count, cs_edges, labels)
    domains = [_top_domain(cs)]
    index: dict[tuple[int, tuple[int, ...]], int] = {}
    for key in keys:
        vs = members[key]
        local = {v: i for i, v in enumerate(vs)}
        edges = [(local[a], local[b]) for a, b in ball.graph.edges if a in local and b in local]
        rep = GroupElement(key[1])
        name = f"{rep}H{key[0]}"
        index[key] = len(domains)
        domains.append(Domain(name, MetricGraph(len(vs), edges), tuple(vs)))
        cosets.append((key[0], rep))
    proj = _CosetProjection(ball, cosets, domains)

    def act(g: GroupElement, u: int) -> int | None:
        factor, rep = cosets[u]
        return index.get((factor, coset_rep(presentation, g * rep, factor).word))

    E = _measured_E(cs, 2, sampling)
    logger.info(f"relative free product structure: {len(domains) - 1} coset domains, E = {E}")
    return HHSStructure(
        f"rel_free_product({','.join(map(str, factor_ranks))}; r={radius})",
        ball.graph,
        tuple(domains),
        frozenset((u, TOP) for u in range(1, len(domains))),
        frozenset(),
        proj,
        _CosetRho(domains, proj),
        E,
        ball,
        act,
    )


def builtin_instance(
    kind: BuiltinKind,
    radius: int,
    presentation: Presentation | None = None,
    factor_ranks: Sequence[int] = (),
    sampling: Sampling | None = None,
) -> HHSStructure:
    """Build a built-in structure by kind.

    Raises:
        NotApplicableError: If the inputs do not fit the kind.
    """
    if kind is BuiltinKind.TRIVIAL:
        if presentation is None:
            raise NotApplicableError("the trivial structure needs a presentation")
        return trivial_instance(presentation, radius, sampling)
    return relative_free_product_instance(factor_ranks, radius, sampling)


def top_ball(h: HHSStructure) -> CayleyBall:
    """The structure's Cayley ball with ``CS`` as its graph, the ``X`` a spinning family lives in.

    Raises:
        NotApplicableError: For structures without a ball.
    """
    if h.ball is None:
        raise NotApplicableError(f"{h.name} is not built on a Cayley ball")
    return dataclasses.replace(h.ball, graph=h.top_space)


def anchor_image(h: HHSStructure, g: GroupElement, u: int, target: int, local: int) -> int | None:
    """Local vertex of ``CV`` carrying ``g`` times the anchor of ``local`` in ``CU``."""
    if h.ball is None:
        raise NotApplicableError(f"{h.name} is not built on a Cayley ball")
    anchor = h.domains[u].anchors[local]
    if anchor == NO_ANCHOR:
        return None
    moved = h.ball.act(g, anchor)
    if moved == OUT_OF_BALL:
        return None
    return h.domains[target].local_of.get(moved)
