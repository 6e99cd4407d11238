"""Unit tests for the graphs package."""

import itertools
from fractions import Fraction
from pathlib import Path as FilePath

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsequot.errors import (
    EmptySubspaceError,
    FamilyTooSmallError,
    InvalidGraphError,
    InvalidPathError,
    ParseError,
    UnknownVertexError,
)
from coarsequot.graphs.core import MetricGraph, Path, Subspace
from coarsequot.graphs.io import parse_edge_list, read_family, read_graph, to_dot
from coarsequot.graphs.measure import (
    Sampling,
    check_bounded_projections,
    check_lipschitz_projection,
    check_neighborhood_quasiconvex,
    check_separation_propagation,
    closest_point_projection,
    covering_radius,
    fattened_overlap,
    fellow_travel_constant,
    four_point_constant,
    proj_distance,
    quasiconvexity_constant,
    separation_M0,
    slim_constant,
)

FIXTURES = FilePath(__file__).parent.parent / "fixtures" / "graphs"


def cycle(n: int) -> MetricGraph:
    """Build the cycle on ``n`` vertices.

    Returns:
        MetricGraph: The cycle.
    """
    return MetricGraph(n, [(i, (i + 1) % n) for i in range(n)])


def grid(width: int, height: int) -> MetricGraph:
    """Build a ``width`` by ``height`` grid.

    Returns:
        MetricGraph: The grid.
    """
    g = nx.convert_node_labels_to_integers(nx.grid_2d_graph(width, height), ordering="sorted")
    return MetricGraph(g.number_of_nodes(), g.edges)


def brute_force_slimness(graph: MetricGraph) -> int:
    """Slimness over every triangle and every choice of geodesic sides.

    Returns:
        int: The slimness constant.
    """
    g = graph.nx_graph
    best = 0
    for x, y, z in itertools.product(graph.vertices(), repeat=3):
        for p in nx.all_shortest_paths(g, x, y):
            others = [set(q) for q in nx.all_shortest_paths(g, y, z)]
            thirds = [set(r) for r in nx.all_shortest_paths(g, z, x)]
            for q, r in itertools.product(others, thirds):
                for w in p:
                    best = max(best, graph.set_distance([w], q | r))
    return best


@pytest.fixture
def tree() -> MetricGraph:
    """Load the depth-two binary tree.

    Returns:
        MetricGraph: The tree.
    """
    return read_graph(FIXTURES / "tree.edges")


def test_metric_graph__rejects_self_loop() -> None:
    """Test a self-loop is rejected."""
    with pytest.raises(InvalidGraphError):
        MetricGraph(2, [(0, 0), (0, 1)])


def test_metric_graph__rejects_duplicate_edge() -> None:
    """Test a repeated edge is rejected."""
    with pytest.raises(InvalidGraphError):
        MetricGraph(2, [(0, 1), (1, 0)])


def test_metric_graph__rejects_disconnected_graph() -> None:
    """Test a disconnected graph is rejected unless allowed."""
    with pytest.raises(InvalidGraphError):
        MetricGraph(3, [(0, 1)])
    assert not MetricGraph(3, [(0, 1)], allow_disconnected=True).is_connected()


def test_metric_graph__rejects_out_of_range_endpoint() -> None:
    """Test an edge endpoint beyond the vertex count is rejected."""
    with pytest.raises(UnknownVertexError):
        MetricGraph(2, [(0, 2)])


def test_distance__unknown_vertex_raises() -> None:
    """Test querying a missing vertex raises."""
    with pytest.raises(UnknownVertexError):
        cycle(4).distance(0, 9)


def test_distance__matches_networkx_on_grid() -> None:
    """Test BFS distances agree with networkx."""
    graph = grid(4, 3)
    lengths = dict(nx.all_pairs_shortest_path_length(graph.nx_graph))
    for u, v in itertools.product(graph.vertices(), repeat=2):
        assert graph.distance(u, v) == lengths[u][v]


def test_geodesic__is_a_shortest_path() -> None:
    """Test the returned geodesic is valid and has the distance as length."""
    graph = grid(3, 3)
    path = graph.geodesic(0, 8)
    assert path.validate(graph).length == graph.distance(0, 8)


def test_all_geodesics__counts_cycle_antipodes() -> None:
    """Test both arcs are found between antipodal points of an even cycle."""
    assert len(cycle(6).all_geodesics(0, 3)) == 2


def test_interval__contains_both_arcs() -> None:
    """Test the interval of antipodal points of a cycle is the whole cycle."""
    assert cycle(6).interval(0, 3).all()


def test_path__rejects_empty_and_bad_joins() -> None:
    """Test empty paths and mismatched concatenations raise."""
    with pytest.raises(InvalidPathError):
        Path(())
    with pytest.raises(InvalidPathError):
        Path((0, 1)).concat(Path((2, 3)))
    assert Path((0, 1)).concat(Path((1, 2))).vertices == (0, 1, 2)


def test_path__validate_rejects_non_adjacent_steps() -> None:
    """Test a path skipping a vertex is rejected."""
    with pytest.raises(InvalidPathError):
        Path((0, 2)).validate(cycle(6))


def test_subspace__rejects_empty_members() -> None:
    """Test an empty subspace raises."""
    with pytest.raises(EmptySubspaceError):
        Subspace.of(cycle(4), [])


def test_parse_edge_list__reports_line_number() -> None:
    """Test a malformed line raises with its 1-based number."""
    with pytest.raises(ParseError) as excinfo:
        read_graph(FIXTURES / "malformed.edges")
    assert excinfo.value.line == 3


def test_parse_edge_list__skips_comments_and_blank_lines() -> None:
    """Test comments and blank lines are ignored."""
    graph = parse_edge_list("# header\n\n0 1\n1 2  # trailing\n")
    assert graph.vertex_count == 3
    assert graph.distance(0, 2) == 2


def test_read_graph__json_form() -> None:
    """Test the JSON form loads."""
    graph = read_graph(FIXTURES / "path7.json")
    assert graph.distance(0, 6) == 6


def test_read_family__names_members(tree: MetricGraph) -> None:
    """Test the family file names its members."""
    family = read_family(FIXTURES / "tree_family.json", tree)
    assert [member.name for member in family] == ["left", "right"]
    assert family[0].members == frozenset({1, 3, 4})


def test_to_dot__marks_highlighted_vertices() -> None:
    """Test highlighted vertices are drawn filled."""
    dot = to_dot(cycle(3), highlighted=[1])
    assert dot.startswith("graph coarsequot {")
    assert "1 [label=\"1\", shape=box" in dot
    assert "0 -- 1 [style=dashed];" in dot


def test_slim_constant__tree_is_zero(tree: MetricGraph) -> None:
    """Test a tree is 0-hyperbolic."""
    measured = slim_constant(tree, Sampling.exhaustive())
    assert measured.value == 0
    assert measured.exact


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_slim_constant__cycle_matches_brute_force(n: int) -> None:
    """Test the slimness of small cycles matches an exhaustive geodesic search."""
    graph = cycle(n)
    assert slim_constant(graph, Sampling.exhaustive()).value == brute_force_slimness(graph)


def test_slim_constant__grid_matches_brute_force() -> None:
    """Test the slimness of a small grid matches an exhaustive geodesic search."""
    graph = grid(3, 3)
    assert slim_constant(graph, Sampling.exhaustive()).value == brute_force_slimness(graph)


def test_slim_constant__sampled_is_lower_bound() -> None:
    """Test sampling never exceeds the exact value and reports itself inexact."""
    graph = grid(4, 4)
    exact = slim_constant(graph, Sampling.exhaustive())
    sampled = slim_constant(graph, Sampling.random(50, seed=3))
    assert sampled.value <= exact.value
    assert not sampled.exact


def test_four_point_constant__tree_is_zero(tree: MetricGraph) -> None:
    """Test the four-point constant of a tree is 0."""
    assert four_point_constant(tree, Sampling.exhaustive()).value == 0


def test_four_point_constant__bounded_by_slimness() -> None:
    """Test the four-point constant stays within a small multiple of the slimness."""
    graph = cycle(8)
    delta = slim_constant(graph, Sampling.exhaustive()).value
    four_point = four_point_constant(graph, Sampling.exhaustive()).value
    assert 0 < four_point <= 2 * delta


def test_quasiconvexity_constant__convex_subtree_is_zero(tree: MetricGraph) -> None:
    """Test a subtree is 0-quasiconvex."""
    left = Subspace.of(tree, [1, 3, 4])
    assert quasiconvexity_constant(tree, left).value == 0


def test_quasiconvexity_constant__cycle_endpoints() -> None:
    """Test geodesics between antipodal points of C₆ stay within 1 of the pair."""
    graph = cycle(6)
    pair = Subspace.of(graph, [0, 3])
    assert quasiconvexity_constant(graph, pair).value == 1


def test_closest_point_projection__ties_are_kept() -> None:
    """Test equidistant closest points are all returned."""
    graph = cycle(6)
    target = Subspace.of(graph, [2, 4])
    projection = closest_point_projection(graph, target, 3)
    assert projection.points == frozenset({2, 4})
    assert projection.base_distance == 1


def test_proj_distance__is_diameter_of_union(tree: MetricGraph) -> None:
    """Test the projection distance is the diameter of the union of projections."""
    left = Subspace.of(tree, [1, 3, 4])
    assert proj_distance(tree, left, [5], [6]) == 0
    assert proj_distance(tree, left, [3], [4]) == 2


def test_separation_M0__disjoint_subtrees(tree: MetricGraph) -> None:
    """Test disjoint convex subtrees have separation 0."""
    family = read_family(FIXTURES / "tree_family.json", tree)
    assert separation_M0(tree, family, 0, 0) == 0


def test_fattened_overlap__requires_two_members(tree: MetricGraph) -> None:
    """Test a single-member family is rejected."""
    with pytest.raises(FamilyTooSmallError):
        fattened_overlap(tree, [Subspace.of(tree, [1])], 1)


def test_covering_radius__tree_family(tree: MetricGraph) -> None:
    """Test only the root lies off the family, at distance 1."""
    family = read_family(FIXTURES / "tree_family.json", tree)
    assert covering_radius(tree, family) == 1


def test_fellow_travel_constant__geodesics_on_tree(tree: MetricGraph) -> None:
    """Test a geodesic in a tree fellow-travels itself exactly."""
    assert fellow_travel_constant(tree, [tree.geodesic(3, 6)]).value == 0


def test_fellow_travel_constant__detour_on_cycle() -> None:
    """Test the long way round C₆ between neighbours is far from the geodesic."""
    detour = Path((0, 5, 4, 3, 2, 1))
    assert fellow_travel_constant(cycle(6), [detour]).value == 2


def test_check_lipschitz_projection__holds_on_grid() -> None:
    """Test neighbouring vertices project close together at the lemma's bound."""
    graph = grid(4, 4)
    delta = slim_constant(graph, Sampling.exhaustive()).value
    row = Subspace.of(graph, [0, 1, 2, 3])
    K = quasiconvexity_constant(graph, row).value
    check = check_lipschitz_projection(graph, [row], delta, K)
    assert check.holds
    assert check.bound == 2 * K + 10 * delta + 2


def test_check_bounded_projections__holds_on_tree(tree: MetricGraph) -> None:
    """Test projections of one subtree onto the other are bounded by ``B``."""
    family = read_family(FIXTURES / "tree_family.json", tree)
    check = check_bounded_projections(tree, family, 0, 0, 0)
    assert check.holds
    assert check.bound == Fraction(4)


def test_check_separation_propagation__tree_subtrees(tree: MetricGraph) -> None:
    """Test the two subtrees overlap only once fattened by three, well inside ``M(t)``."""
    family = read_family(FIXTURES / "tree_family.json", tree)
    checks = check_separation_propagation(tree, family, 0, 0, 0, range(4))
    assert all(check.holds for check in checks)
    assert [check.observed for check in checks] == [0, 0, 0, 2]
    assert [check.bound for check in checks] == [2, 4, 6, 8]
    assert [check.details["t"] for check in checks] == [0, 1, 2, 3]


def test_check_neighborhood_quasiconvex__grid_corner() -> None:
    """Test the radius-two ball about a grid corner is 2-quasiconvex, within ``2δ``."""
    graph = grid(4, 4)
    delta = slim_constant(graph, Sampling.exhaustive()).value
    check = check_neighborhood_quasiconvex(graph, Subspace.of(graph, [0]), 2, delta)
    assert check.holds
    assert check.observed == 2
    assert check.bound == 2 * delta


def test_check_neighborhood_quasiconvex__tree_leaves(tree: MetricGraph) -> None:
    """Test fattening two sibling leaves gives their convex parent star."""
    check = check_neighborhood_quasiconvex(tree, Subspace.of(tree, [3, 4]), 1, 0)
    assert check.holds
    assert check.observed == 0
    assert check.bound == 2
    assert check.details["diameter"] == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=3, max_value=9), st.data())
def test_distance__triangle_inequality_on_cycles(n: int, data: st.DataObject) -> None:
    """Test the path metric satisfies the triangle inequality."""
    graph = cycle(n)
    u, v, w = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    assert graph.distance(u, w) <= graph.distance(u, v) + graph.distance(v, w)
    assert graph.distance(u, v) == graph.distance(v, u)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=1000), min_size=1, max_size=11))
def test_slim_constant__random_trees_are_zero(choices: list[int]) -> None:
    """Test random trees are 0-hyperbolic."""
    edges = [(i + 1, choice % (i + 1)) for i, choice in enumerate(choices)]
    graph = MetricGraph(len(choices) + 1, edges)
    assert slim_constant(graph, Sampling.exhaustive()).value == 0
