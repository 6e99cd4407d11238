"""Finite unit-edge metric graphs, paths, subspaces and projection sets."""

from __future__ import annotations

import functools
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from coarsequot.constants import GEODESIC_ENUMERATION_CAP, ROW_CACHE_ENTRIES
from coarsequot.errors import (
    BudgetExceededError,
    EmptySubspaceError,
    InvalidGraphError,
    InvalidPathError,
    UnknownVertexError,
)

logger = logging.getLogger(__name__)

# Distance marker for vertices in another component.
UNREACHABLE: int = -1


class MetricGraph:
    """A finite simple graph on vertices ``0..n-1`` with the unit-edge path metric.

    The graph is immutable after construction. Distance rows are computed by breadth-first
    search on demand and cached per instance.
    """

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        labels: Mapping[int, str] | None = None,
        *,
        allow_disconnected: bool = False,
    ) -> None:
        """Build and validate the graph.

        Args:
            vertex_count: Number of vertices.
            edges: Unordered vertex pairs.
            labels: Optional opaque vertex labels.
            allow_disconnected: Skip the connectivity check (projection complexes).

        Raises:
            InvalidGraphError: On self-loops, duplicate edges, an empty vertex set or a
                disconnected graph.
            UnknownVertexError: If an edge endpoint is out of range.
        """
        if vertex_count < 1:
            raise InvalidGraphError("a graph needs at least one vertex")
        self._n = vertex_count
        graph = nx.Graph()
        graph.add_nodes_from(range(vertex_count))
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            for endpoint in (u, v):
                if not 0 <= endpoint < vertex_count:
                    raise UnknownVertexError(f"edge endpoint {endpoint} out of range")
            if u == v:
                raise InvalidGraphError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidGraphError(f"duplicate edge {key}")
            seen.add(key)
            graph.add_edge(u, v)
        if not allow_disconnected and not nx.is_connected(graph):
            raise InvalidGraphError("graph is not connected")
        self._graph = graph
        self._edges = frozenset(seen)
        self._labels = dict(labels) if labels else {}
        self._adjacency = tuple(tuple(sorted(graph.adj[v])) for v in range(vertex_count))
        degrees = np.fromiter((len(a) for a in self._adjacency), dtype=np.int64, count=vertex_count)
        self._indptr = np.concatenate(([0], np.cumsum(degrees)))
        self._indices = np.fromiter(
            (w for a in self._adjacency for w in a), dtype=np.int64, count=int(self._indptr[-1])
        )
        cache_rows = max(32, ROW_CACHE_ENTRIES // vertex_count)
        self._row = functools.lru_cache(maxsize=cache_rows)(self._compute_row)

    def __repr__(self) -> str:
        return f"MetricGraph(n={self._n}, edges={len(self._edges)})"

    @property
    def vertex_count(self) -> int:
        """Number of vertices."""
        return self._n

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        """Edges as sorted vertex pairs."""
        return self._edges

    @property
    def labels(self) -> dict[int, str]:
        """A copy of the vertex labels."""
        return dict(self._labels)

    @property
    def nx_graph(self) -> nx.Graph:
        """A read-only view of the underlying networkx graph."""
        return nx.graphviews.generic_graph_view(self._graph)

    def label(self, v: int) -> str:
        """Label of ``v``, falling back to its id."""
        return self._labels.get(v, str(v))

    def vertices(self) -> range:
        """All vertex ids."""
        return range(self._n)

    def check_vertex(self, v: int) -> int:
        """Return ``v`` if valid.

        Raises:
            UnknownVertexError: If ``v`` is out of range.
        """
        if not 0 <= v < self._n:
            raise UnknownVertexError(f"vertex {v} not in graph with {self._n} vertices")
        return v

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbours of ``v`` in increasing id order."""
        return self._adjacency[self.check_vertex(v)]

    def has_edge(self, u: int, v: int) -> bool:
        """Whether ``u`` and ``v`` are adjacent."""
        return (min(u, v), max(u, v)) in self._edges

    def is_connected(self) -> bool:
        """Whether the graph is connected."""
        return nx.is_connected(self._graph)

    def _bfs(self, sources: list[int]) -> np.ndarray:
        """Level-synchronous BFS over the CSR adjacency arrays."""
        row = np.full(self._n, UNREACHABLE, dtype=np.int64)
        frontier = np.asarray(sources, dtype=np.int64)
        row[frontier] = 0
        level = 0
        while frontier.size:
            level += 1
            starts = self._indptr[frontier]
            counts = self._indptr[frontier + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
            reached = self._indices[offsets + np.arange(total)]
            reached = np.unique(reached[row[reached] == UNREACHABLE])
            row[reached] = level
            frontier = reached
        return row

    def _compute_row(self, source: int) -> np.ndarray:
        row = self._bfs([source])
        row.setflags(write=False)
        return row

    def distances_from(self, source: int) -> np.ndarray:
        """Distance row from ``source``; unreachable vertices hold ``UNREACHABLE``."""
        return self._row(self.check_vertex(source))

    def distance(self, u: int, v: int) -> int:
        """Length of a shortest path from ``u`` to ``v``.

        Raises:
            UnknownVertexError: If either vertex is out of range.
        """
        self.check_vertex(v)
        return int(self.distances_from(u)[v])

    def distances_to_set(self, members: Iterable[int]) -> np.ndarray:
        """Distance from every vertex to the nearest member of ``members``."""
        sources = sorted({self.check_vertex(v) for v in members})
        if not sources:
            raise EmptySubspaceError("distance to an empty set")
        return self._bfs(sources)

    def distance_matrix(self, rows: Iterable[int], columns: Iterable[int]) -> np.ndarray:
        """Matrix of distances between two vertex lists."""
        cols = np.fromiter(columns, dtype=np.int64)
        stacked = [self.distances_from(u)[cols] for u in rows]
        if not stacked:
            return np.zeros((0, cols.size), dtype=np.int64)
        return np.vstack(stacked)

    def geodesic(self, u: int, v: int) -> Path:
        """A shortest path from ``u`` to ``v`` with smallest-id predecessor tie-break.

        Raises:
            UnknownVertexError: If either vertex is out of range.
            InvalidGraphError: If ``v`` is unreachable from ``u``.
        """
        row = self.distances_from(u)
        self.check_vertex(v)
        if row[v] == UNREACHABLE:
            raise InvalidGraphError(f"no path from {u} to {v}")
        walk = [v]
        current = v
        while current != u:
            current = next(p for p in self._adjacency[current] if row[p] == row[current] - 1)
            walk.append(current)
        return Path(tuple(reversed(walk)))

    def all_geodesics(self, u: int, v: int, cap: int = GEODESIC_ENUMERATION_CAP) -> list[Path]:
        """Every geodesic from ``u`` to ``v``, walking the layered BFS DAG.

        Raises:
            BudgetExceededError: If more than ``cap`` geodesics exist.
        """
        self.check_vertex(u)
        self.check_vertex(v)
        paths: list[Path] = []
        for walk in nx.all_shortest_paths(self._graph, u, v):
            paths.append(Path(tuple(walk)))
            if len(paths) > cap:
                raise BudgetExceededError(f"more than {cap} geodesics between {u} and {v}")
        return sorted(paths, key=lambda path: path.vertices)

    def interval(self, u: int, v: int) -> np.ndarray:
        """Boolean mask of the vertices lying on some geodesic from ``u`` to ``v``."""
        du = self.distances_from(u)
        dv = self.distances_from(v)
        return (du + dv == du[v]) & (du != UNREACHABLE) & (dv != UNREACHABLE)

    def ball(self, center: int, radius: int) -> frozenset[int]:
        """Closed ball of ``radius`` around ``center``."""
        row = self.distances_from(center)
        return frozenset(np.flatnonzero((row >= 0) & (row <= radius)).tolist())

    def neighborhood(self, members: Iterable[int], radius: int) -> frozenset[int]:
        """Closed ``radius``-neighbourhood of a vertex set."""
        row = self.distances_to_set(members)
        return frozenset(np.flatnonzero((row >= 0) & (row <= radius)).tolist())

    def diameter_of(self, members: Iterable[int]) -> int:
        """Diameter of a vertex set; the empty set has diameter 0."""
        items = sorted(set(members))
        if len(items) < 2:
            return 0
        return int(self.distance_matrix(items, items).max())

    def set_distance(self, first: Iterable[int], second: Iterable[int]) -> int:
        """Smallest distance between two non-empty vertex sets."""
        row = self.distances_to_set(first)
        return int(min(row[v] for v in second))

    def without(self, removed: Iterable[int]) -> nx.Graph:
        """A view of the graph with some vertices hidden."""
        return nx.restricted_view(self._graph, list(removed), [])

    def to_dict(self) -> dict[str, object]:
        """JSON-ready form ``{"n", "edges", "labels"}``."""
        payload: dict[str, object] = {"n": self._n, "edges": [list(e) for e in sorted(self._edges)]}
        if self._labels:
            payload["labels"] = {str(k): v for k, v in sorted(self._labels.items())}
        return payload


@dataclass(frozen=True)
class Path:
    """An ordered list of vertex ids; ``length`` counts edges."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise InvalidPathError("a path needs at least one vertex")

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def length(self) -> int:
        """Number of edges."""
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        """First vertex."""
        return self.vertices[0]

    @property
    def end(self) -> int:
        """Last vertex."""
        return self.vertices[-1]

    def validate(self, graph: MetricGraph) -> Path:
        """Check consecutive vertices are adjacent in ``graph``.

        Returns:
            Path: ``self``.

        Raises:
            InvalidPathError: On a missing edge.
        """
        for u, v in zip(self.vertices, self.vertices[1:], strict=False):
            if not graph.has_edge(u, v):
                raise InvalidPathError(f"vertices {u} and {v} are not adjacent")
        return self

    def reversed(self) -> Path:
        """The same path walked backwards."""
        return Path(tuple(reversed(self.vertices)))

    def concat(self, other: Path) -> Path:
        """Join two paths sharing an endpoint.

        Raises:
            InvalidPathError: If ``other`` does not start where ``self`` ends.
        """
        if other.start != self.end:
            raise InvalidPathError(f"cannot join path ending at {self.end} to {other.start}")
        return Path(self.vertices + other.vertices[1:])


@dataclass(frozen=True)
class Subspace:
    """A non-empty vertex subset of a host graph."""

    host: MetricGraph = field(repr=False, compare=False)
    members: frozenset[int]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.members:
            raise EmptySubspaceError(f"subspace {self.name or '?'} is empty")
        for v in self.members:
            self.host.check_vertex(v)

    @classmethod
    def of(cls, host: MetricGraph, members: Iterable[int], name: str = "") -> Subspace:
        """Build a subspace from any iterable of vertex ids."""
        return cls(host, frozenset(int(v) for v in members), name)

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        """Members in increasing id order."""
        return sorted(self.members)


@dataclass(frozen=True)
class ProjectionSet:
    """Closest points of ``target`` to a vertex, with the realised distance."""

    target: Subspace
    points: frozenset[int]
    base_distance: int
