"""Cone-offs, modified cone-offs, de-electrification and extended projections."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from coarsequot.errors import (
    DanglingConeVertexError,
    EmptySubspaceError,
    InvalidPathError,
    MissingRhoError,
    SelfProjectionError,
)
from coarsequot.graphs.core import MetricGraph, Path, ProjectionSet, Subspace
from coarsequot.graphs.measure import Projector

logger = logging.getLogger(__name__)


class ConeOff:
    """A base graph with one cone vertex per coned subspace.

    Cone vertex ``i`` gets id ``base.vertex_count + i`` and is joined to exactly the members of
    ``family[i]``. Two entries with the same vertex set still get separate cone vertices.
    """

    def __init__(self, base: MetricGraph, family: Sequence[Subspace]) -> None:
        """Build the combined graph.

        Raises:
            EmptySubspaceError: If a family member has no vertices.
        """
        self.base = base
        hosted = []
        for index, member in enumerate(family):
            if not member.members:
                raise EmptySubspaceError(f"family member {index} is empty")
            hosted.append(Subspace.of(base, member.members, member.name or f"Y{index}"))
        self.family: tuple[Subspace, ...] = tuple(hosted)
        n = base.vertex_count
        self.cone_vertices: tuple[int, ...] = tuple(n + i for i in range(len(hosted)))
        edges = set(base.edges)
        for index, member in enumerate(hosted):
            edges.update((v, n + index) for v in member.members)
        labels = {v: base.label(v) for v in base.vertices()}
        labels.update({n + i: f"v[{member.name}]" for i, member in enumerate(hosted)})
        self.graph = MetricGraph(n + len(hosted), edges, labels)
        self._projectors: dict[int, Projector] = {}
        logger.debug(f"cone-off: {n} base vertices, {len(hosted)} cone vertices")

    def __repr__(self) -> str:
        return f"ConeOff(base={self.base!r}, cones={len(self.family)})"

    def is_cone(self, v: int) -> bool:
        """Whether ``v`` is a cone vertex."""
        return v >= self.base.vertex_count

    def owner(self, v: int) -> int:
        """Family index coned by the cone vertex ``v``."""
        return self.graph.check_vertex(v) - self.base.vertex_count

    def cone_of(self, index: int) -> int:
        """Cone vertex over ``family[index]``."""
        return self.cone_vertices[index]

    def projector(self, index: int) -> Projector:
        """Cached closest-point projector onto ``family[index]`` in the base graph."""
        if index not in self._projectors:
            self._projectors[index] = Projector(self.base, self.family[index])
        return self._projectors[index]

    def lift_set(self, vertices: Iterable[int]) -> list[int]:
        """Replace cone vertices by the members they cone, keeping base vertices."""
        lifted: set[int] = set()
        for v in vertices:
            if self.is_cone(v):
                lifted.update(self.family[self.owner(v)].members)
            else:
                lifted.add(v)
        return sorted(lifted)


def build_cone_off(graph: MetricGraph, family: Sequence[Subspace]) -> ConeOff:
    """Cone off every subspace of ``family`` in ``graph``."""
    return ConeOff(graph, family)


def build_modified_cone_off(
    graph: MetricGraph, rho: Mapping[str, Iterable[int] | None], A: int | Fraction
) -> ConeOff:
    """Cone off ``N_A(ρ^U_S)`` for every non-maximal domain ``U``.

    Args:
        graph: The top-level space.
        rho: Relative projection to the top domain for each non-maximal domain, in order.
        A: Fattening radius; distances are integers so ``⌊A⌋`` is used.

    Returns:
        ConeOff: The graph ``X′`` with one cone vertex per domain.

    Raises:
        MissingRhoError: If some ``ρ^U_S`` is undefined or empty.
    """
    radius = int(Fraction(A))
    family = []
    for name, points in rho.items():
        members = list(points) if points is not None else []
        if not members:
            raise MissingRhoError(f"relative projection of {name} to the top domain is undefined")
        family.append(Subspace.of(graph, graph.neighborhood(members, radius), name))
    return ConeOff(graph, family)


def cone_off_over(modified: ConeOff, family: Sequence[Subspace]) -> ConeOff:
    """Cone off ``family`` in the modified cone-off ``X′`` rather than in ``X``."""
    return ConeOff(modified.graph, family)


@dataclass(frozen=True)
class Piece:
    """One piece of a de-electrification; ``owner`` is set for replaced cone crossings."""

    path: Path
    owner: int | None = None


@dataclass(frozen=True)
class DeElectrification:
    """A cone-off path with each crossing ``x, v_Y, y`` replaced by a base geodesic."""

    original: Path
    pieces: tuple[Piece, ...] = field(default=())

    @property
    def crossings(self) -> list[Piece]:
        """The replaced pieces, in order."""
        return [piece for piece in self.pieces if piece.owner is not None]

    def path(self) -> Path:
        """The pieces joined into one base path."""
        joined = self.pieces[0].path
        for piece in self.pieces[1:]:
            joined = joined.concat(piece.path)
        return joined

    def base_length(self) -> int:
        """``ℓ_X`` of the de-electrified path."""
        return sum(piece.path.length for piece in self.pieces)


def de_electrify(cone: ConeOff, path: Path) -> DeElectrification:
    """Replace each two-edge cone crossing by the base geodesic between its ends.

    Repeated crossings of one cone vertex are replaced independently.

    Raises:
        DanglingConeVertexError: If the path starts or ends at a cone vertex.
        InvalidPathError: If the path is not a path of the cone-off.
    """
    path.validate(cone.graph)
    if cone.is_cone(path.start) or cone.is_cone(path.end):
        raise DanglingConeVertexError("a de-electrified path must start and end in the base")
    vertices = path.vertices
    pieces: list[Piece] = []
    run = [vertices[0]]
    i = 1
    while i < len(vertices):
        v = vertices[i]
        if not cone.is_cone(v):
            run.append(v)
            i += 1
            continue
        x, y = vertices[i - 1], vertices[i + 1]
        owner = cone.owner(v)
        if x not in cone.family[owner] or y not in cone.family[owner]:
            raise InvalidPathError(f"crossing at {v} does not stay in its subspace")
        pieces.append(Piece(Path(tuple(run))))
        pieces.append(Piece(cone.base.geodesic(x, y), owner))
        run = [y]
        i += 2
    pieces.append(Piece(Path(tuple(run))))
    return DeElectrification(path, tuple(pieces))


def extended_projection(cone: ConeOff, index: int, x: int) -> ProjectionSet:
    """Project a cone-off vertex to ``family[index]``; ``π_Y(v_U)`` is ``π_Y(U)``.

    Raises:
        SelfProjectionError: If ``x`` is the cone vertex over ``family[index]``.
    """
    projector = cone.projector(index)
    if not cone.is_cone(x):
        return projector.project(x)
    if x == cone.cone_of(index):
        raise SelfProjectionError(f"{cone.family[index].name} cannot project its own cone vertex")
    source = cone.family[cone.owner(x)].members
    points = projector.project_set(source)
    distance = int(min(projector.base_distance[v] for v in source))
    return ProjectionSet(cone.family[index], points, distance)


def extended_dpi(cone: ConeOff, index: int, first: int, second: int) -> int:
    """``d^π_Y`` between two cone-off vertices, neither equal to ``v_Y``."""
    projector = cone.projector(index)
    own = cone.cone_of(index)
    if own in (first, second):
        raise SelfProjectionError(f"{cone.family[index].name} cannot project its own cone vertex")
    return projector.dpi(cone.lift_set([first]), cone.lift_set([second]))
