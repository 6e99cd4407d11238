"""Projection families, the projection axioms and projection complexes."""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np

from coarsequot.coning.core import ConeOff
from coarsequot.constants import TRIPLE_CAP
from coarsequot.errors import (
    BudgetExceededError,
    NotCoboundedlyCoveredError,
    ParseError,
    PreconditionBrokenError,
    SelfProjectionError,
)
from coarsequot.graphs.core import MetricGraph
from coarsequot.graphs.measure import CheckReport
from coarsequot.results import AxiomReport, AxiomResult

logger = logging.getLogger(__name__)

# Marks ``d_Y(U, V)`` entries with ``Y ∈ {U, V}``.
UNDEFINED: int = -1

# Largest number of violating tuples kept in a report.
WITNESS_LIMIT: int = 20


class Provenance(StrEnum):
    """Where a projection family's distances come from."""

    GEOMETRIC = "geometric"
    EXPLICIT = "explicit"
    POINTS = "points"


@dataclass(frozen=True)
class ProjectionFamily:
    """Distance functions ``d_Y(U, V)`` on a finite index set.

    The table holds ``scale · d_Y(U, V)`` as integers at ``[Y, U, V]`` so every comparison is
    exact; entries with ``Y ∈ {U, V}`` hold ``UNDEFINED``.

    Attributes:
        names: Element names in index order.
        table: Scaled distance table of shape ``(k, k, k)``.
        scale: Common denominator of the distances.
        provenance: How the distances were obtained.
        theta_claimed: Constant the family is expected to satisfy, if known.
        nearest: Nearest-subspace sets for point-augmented families.
    """

    names: tuple[str, ...]
    table: np.ndarray = field(repr=False)
    scale: int = 1
    provenance: Provenance = Provenance.GEOMETRIC
    theta_claimed: Fraction | None = None
    nearest: Mapping[int, frozenset[int]] | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        """Number of elements."""
        return len(self.names)

    def dpi(self, y: int, u: int, v: int) -> Fraction:
        """``d^π_Y(U, V)``.

        Raises:
            SelfProjectionError: If ``Y`` is ``U`` or ``V``.
        """
        if y in (u, v):
            raise SelfProjectionError(f"d_{self.names[y]} is undefined on {self.names[y]}")
        return Fraction(int(self.table[y, u, v]), self.scale)

    def scaled(self, value: int | Fraction) -> Fraction:
        """``value`` in table units."""
        return Fraction(value) * self.scale

    def valid_mask(self) -> np.ndarray:
        """Boolean mask of defined entries."""
        k = self.size
        idx = np.arange(k)
        y = idx[:, None, None]
        return (y != idx[None, :, None]) & (y != idx[None, None, :])

    def to_rows(self) -> list[dict[str, object]]:
        """Triple-table form ``{"Y", "U", "V", "d"}`` over ``U ≤ V``."""
        rows = []
        for y in range(self.size):
            for u in range(self.size):
                for v in range(u, self.size):
                    if y in (u, v):
                        continue
                    rows.append(
                        {
                            "Y": self.names[y],
                            "U": self.names[u],
                            "V": self.names[v],
                            "d": str(self.dpi(y, u, v)),
                        }
                    )
        return rows


def _check_size(k: int) -> None:
    if k**3 > TRIPLE_CAP:
        raise BudgetExceededError(f"a family of {k} elements exceeds the triple cap {TRIPLE_CAP}")


def union_diameters(masks: np.ndarray, internal: np.ndarray) -> np.ndarray:
    """``diam(S_a ∪ S_b)`` for every pair of member subsets given as boolean rows.

    Args:
        masks: ``(k, m)`` boolean rows, each selecting members of the target.
        internal: ``(m, m)`` distances between the members.

    Returns:
        np.ndarray: ``(k, k)`` integer matrix; empty subsets contribute 0.
    """
    spread = np.where(masks[:, :, None], internal[None, :, :], -1).max(axis=1, initial=-1)
    cross = np.where(masks[None, :, :], spread[:, None, :], -1).max(axis=2, initial=-1)
    own = np.diagonal(cross)
    return np.maximum(np.maximum(cross, own[:, None]), own[None, :]).clip(min=0)


def geometric_family(cone: ConeOff, theta_claimed: Fraction | None = None) -> ProjectionFamily:
    """``d^π_Y(U, V) = diam(π_Y(U) ∪ π_Y(V))`` over the coned family."""
    k = len(cone.family)
    _check_size(k)
    table = np.full((k, k, k), UNDEFINED, dtype=np.int64)
    for y in range(k):
        projector = cone.projector(y)
        masks = np.vstack([projector.mask(member.members) for member in cone.family])
        table[y] = union_diameters(masks, projector.internal)
        table[y, y, :] = UNDEFINED
        table[y, :, y] = UNDEFINED
    names = tuple(member.name for member in cone.family)
    return ProjectionFamily(names, table, 1, Provenance.GEOMETRIC, theta_claimed)


def nearest_subspaces(cone: ConeOff, R: int | Fraction) -> dict[int, frozenset[int]]:
    """``𝒱_R(x)`` for every cone-off vertex; a cone vertex's set is its own subspace.

    Raises:
        NotCoboundedlyCoveredError: If some base vertex is farther than ``R`` from every member.
    """
    bound = Fraction(R)
    rows = np.vstack([cone.projector(i).base_distance for i in range(len(cone.family))])
    nearest: dict[int, frozenset[int]] = {}
    for x in cone.base.vertices():
        close = frozenset(np.flatnonzero(rows[:, x] <= bound).tolist())
        if not close:
            raise NotCoboundedlyCoveredError(f"vertex {x} is farther than {R} from every subspace")
        nearest[x] = close
    for index, v in enumerate(cone.cone_vertices):
        nearest[v] = frozenset({index})
    return nearest


def augment_with_points(
    cone: ConeOff, R: int | Fraction, theta_claimed: Fraction | None = None
) -> ProjectionFamily:
    """Projection family on every cone-off vertex.

    A base vertex ``x`` projects everything to ``{x}``, so ``d^π_x ≡ 0``; the cone vertex ``v_Y``
    carries ``d^π_Y`` extended to points and cone vertices.

    Raises:
        NotCoboundedlyCoveredError: If some ``𝒱_R(x)`` is empty.
        BudgetExceededError: If the cone-off is too large for a full table.
    """
    nearest = nearest_subspaces(cone, R)
    n = cone.base.vertex_count
    k = cone.graph.vertex_count
    _check_size(k)
    table = np.zeros((k, k, k), dtype=np.int64)
    for index, v in enumerate(cone.cone_vertices):
        projector = cone.projector(index)
        point_masks = projector.closest.T
        cone_masks = np.vstack([projector.mask(member.members) for member in cone.family])
        table[v] = union_diameters(np.vstack([point_masks, cone_masks]), projector.internal)
    idx = np.arange(k)
    table[idx, idx, :] = UNDEFINED
    table[idx, :, idx] = UNDEFINED
    names = tuple(cone.graph.label(v) for v in range(k))
    logger.debug(f"point-augmented family: {n} points, {k - n} cone vertices")
    return ProjectionFamily(names, table, 1, Provenance.POINTS, theta_claimed, nearest)


def explicit_family(
    rows: Sequence[Mapping[str, object]], theta_claimed: Fraction | None = None
) -> ProjectionFamily:
    """Family from ``{"Y", "U", "V", "d"}`` rows.

    A row also fills its mirror ``(V, U)`` unless the mirror is given; absent entries are 0.

    Raises:
        ParseError: On a malformed row or a row with ``Y ∈ {U, V}``.
    """
    names: list[str] = []
    entries: dict[tuple[str, str, str], Fraction] = {}
    try:
        for row in rows:
            y, u, v = str(row["Y"]), str(row["U"]), str(row["V"])
            if y in (u, v):
                raise ParseError(f"row {row} projects {y} to itself")
            entries[(y, u, v)] = Fraction(str(row["d"]))
            names.extend(name for name in (y, u, v) if name not in names)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"invalid projection row: {e}") from e
    k = len(names)
    _check_size(k)
    scale = math.lcm(*(d.denominator for d in entries.values())) if entries else 1
    position = {name: i for i, name in enumerate(names)}
    table = np.zeros((k, k, k), dtype=np.int64)
    for (y, u, v), d in entries.items():
        value = int(d * scale)
        table[position[y], position[u], position[v]] = value
        if (y, v, u) not in entries:
            table[position[y], position[v], position[u]] = value
    idx = np.arange(k)
    table[idx, idx, :] = UNDEFINED
    table[idx, :, idx] = UNDEFINED
    return ProjectionFamily(tuple(names), table, scale, Provenance.EXPLICIT, theta_claimed)


def read_explicit_family(path: str | Path) -> ProjectionFamily:
    """Read an explicit family from a JSON list of rows."""
    try:
        rows = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from e
    if not isinstance(rows, list):
        raise ParseError("an explicit family is a JSON list of rows")
    return explicit_family(rows)


def _first(mask: np.ndarray) -> tuple[int, ...]:
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else ()


def verify_projection_axioms(
    family: ProjectionFamily,
    theta: int | Fraction,
    separation_length: int | Fraction | None = None,
    diameter: int | None = None,
) -> AxiomReport:
    """Check the projection axioms with constant ``θ``.

    Axioms (I)–(IV) are pass/fail. (IV′) is reported with its failure count. (V) reports the
    largest number of ``Y`` with ``d_Y(U, V) ≥ θ`` for one pair, compared with
    ``⌈diameter / D₀⌉`` when both are given.

    Args:
        family: The family to check.
        theta: The constant.
        separation_length: ``D₀`` for the (V) covering ceiling.
        diameter: Diameter of the underlying graph for the (V) ceiling.

    Returns:
        AxiomReport: One result per axiom with a witness ``(Y, U, V[, W])`` on failure.
    """
    t = family.table
    limit = family.scaled(theta)
    valid = family.valid_mask()
    results = []

    asymmetric = valid & (t != np.transpose(t, (0, 2, 1)))
    results.append(
        AxiomResult("I", not asymmetric.any(), int(asymmetric.sum()), _first(asymmetric))
    )

    triangle_count = 0
    triangle_witness: tuple[int, ...] = ()
    for y in range(family.size):
        row = t[y]
        defined = row != UNDEFINED
        through = row[:, :, None] + row[None, :, :]
        ok = defined[:, :, None] & defined[None, :, :] & defined[:, None, :]
        bad = ok & (row[:, None, :] > through)
        if bad.any():
            triangle_count += int(bad.sum())
            triangle_witness = triangle_witness or (y, *_first(bad))
    results.append(AxiomResult("II", triangle_count == 0, triangle_count, triangle_witness))

    idx = np.arange(family.size)
    diagonal = t[:, idx, idx]
    own = (diagonal != UNDEFINED) & (diagonal > limit)
    results.append(AxiomResult("III", not own.any(), int(own.sum()), _first(own), Fraction(theta)))

    distinct = valid & (idx[None, :, None] != idx[None, None, :])
    swapped = np.transpose(t, (2, 1, 0))
    bgi = distinct & (t > limit) & (swapped > limit)
    results.append(AxiomResult("IV", not bgi.any(), int(bgi.sum()), _first(bgi), Fraction(theta)))

    strong_failures = 0
    strong_witness: tuple[int, ...] = ()
    for y, u, v in np.argwhere(distinct & (t > limit)):
        differ = (idx != v) & (t[v, u, :] != t[v, y, :])
        if differ.any():
            strong_failures += 1
            if not strong_witness:
                strong_witness = (int(y), int(u), int(v), int(np.argmax(differ)))
    results.append(
        AxiomResult(
            "IV'",
            strong_failures == 0,
            strong_failures,
            strong_witness,
            Fraction(theta),
            informational=True,
        )
    )

    big = (t >= limit) & (t != UNDEFINED)
    counts = big.sum(axis=0)
    np.fill_diagonal(counts, 0)
    largest = int(counts.max()) if family.size else 0
    details: dict[str, object] = {"max_big_projections": largest}
    holds = True
    if separation_length and diameter is not None:
        ceiling = math.ceil(Fraction(diameter) / Fraction(separation_length))
        details["ceiling"] = ceiling
        holds = largest <= ceiling
    witness = tuple(int(i) for i in np.unravel_index(np.argmax(counts), counts.shape))
    results.append(
        AxiomResult(
            "V", holds, largest, witness, Fraction(theta), informational=True, details=details
        )
    )
    return AxiomReport(f"{family.provenance} family of {family.size}", tuple(results))


@dataclass(frozen=True)
class ProjectionComplex:
    """The graph ``P_Ж`` on a projection family."""

    family: ProjectionFamily
    threshold: Fraction
    graph: MetricGraph

    @property
    def connected(self) -> bool:
        """Whether the complex is connected."""
        return self.graph.is_connected()

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form."""
        return {
            "threshold": str(self.threshold),
            "connected": self.connected,
            "graph": self.graph.to_dict(),
        }


def build_projection_complex(
    family: ProjectionFamily, threshold: int | Fraction
) -> ProjectionComplex:
    """Join ``U`` and ``V`` when ``d_Y(U, V) ≤ Ж`` for every other ``Y``.

    Raises:
        ValueError: If the threshold is negative.
    """
    if Fraction(threshold) < 0:
        raise ValueError("the projection complex threshold must be non-negative")
    blocked = (family.table > family.scaled(threshold)).any(axis=0)
    edges = [
        (u, v) for u in range(family.size) for v in range(u + 1, family.size) if not blocked[u, v]
    ]
    labels = dict(enumerate(family.names))
    graph = MetricGraph(family.size, edges, labels, allow_disconnected=True)
    return ProjectionComplex(family, Fraction(threshold), graph)


def bounded_path_image_check(complex_: ProjectionComplex, theta: int | Fraction) -> CheckReport:
    """Projections of paths and geodesics that avoid a vertex stay bounded there.

    For every vertex ``Y``: endpoints of a path missing ``N₂(Y)`` satisfy ``d_Y ≤ 11θ + 4θ``,
    and endpoints of a geodesic missing ``Y`` satisfy ``d_Y ≤ 22θ + 6Ж + 4θ``.
    The extra ``4θ`` covers the unmodified distances standing in for modified ones.

    Raises:
        PreconditionBrokenError: If ``Ж < 33θ``.
    """
    theta = Fraction(theta)
    zhe = complex_.threshold
    if zhe < 33 * theta:
        raise PreconditionBrokenError(f"threshold {zhe} is below 33θ = {33 * theta}")
    family = complex_.family
    path_bound = family.scaled(15 * theta)
    geodesic_bound = family.scaled(26 * theta + 6 * zhe)
    graph = complex_.graph
    violations: list[tuple[int, ...]] = []
    examined = 0
    for y in range(family.size):
        row = family.table[y]
        near = graph.ball(y, 2)
        avoiding = nx.restricted_view(graph.nx_graph, list(near), [])
        for component in nx.connected_components(avoiding):
            members = sorted(component)
            examined += len(members) * (len(members) - 1) // 2
            gap = row[np.ix_(members, members)]
            for i, j in np.argwhere(gap > path_bound):
                violations.append((y, members[i], members[j], 0))
        without = nx.restricted_view(graph.nx_graph, [y], [])
        hops = dict(nx.all_pairs_shortest_path_length(without))
        for u, reach in hops.items():
            base_row = graph.distances_from(u)
            for v, length in reach.items():
                if v <= u or length != base_row[v]:
                    continue
                examined += 1
                if row[u, v] > geodesic_bound:
                    violations.append((y, u, v, 1))
    return CheckReport(
        "bounded_path_image",
        examined,
        tuple(violations[:WITNESS_LIMIT]),
        {
            "violation_count": len(violations),
            "path_bound": str(15 * theta),
            "geodesic_bound": str(26 * theta + 6 * zhe),
        },
    )
