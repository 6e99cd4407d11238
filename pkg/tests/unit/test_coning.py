"""Unit tests for cone-offs and their checks."""

from pathlib import Path as FilePath

import pytest

from coarsequot.coning.checks import (
    check_spriano,
    close_in_x_check,
    de_electrification_length_audit,
    strong_bgi_check,
)
from coarsequot.coning.core import (
    build_cone_off,
    build_modified_cone_off,
    cone_off_over,
    de_electrify,
    extended_dpi,
    extended_projection,
)
from coarsequot.errors import (
    DanglingConeVertexError,
    InvalidPathError,
    MissingRhoError,
    SelfProjectionError,
)
from coarsequot.graphs.core import MetricGraph, Path, Subspace
from coarsequot.graphs.io import read_family, read_graph
from coarsequot.graphs.measure import Sampling

FIXTURES = FilePath(__file__).parent.parent / "fixtures" / "graphs"


@pytest.fixture
def path7() -> MetricGraph:
    """The path on seven vertices.

    Returns:
        MetricGraph: ``0 - 1 - ... - 6``.
    """
    return MetricGraph(7, [(i, i + 1) for i in range(6)])


def test_build_cone_off__one_vertex_per_member(path7: MetricGraph) -> None:
    """Test repeated members still get their own cone vertices."""
    middle = Subspace.of(path7, [2, 3, 4], "M")
    cone = build_cone_off(path7, [middle, middle])
    assert cone.cone_vertices == (7, 8)
    assert cone.graph.vertex_count == 9
    assert set(cone.graph.neighbors(7)) == {2, 3, 4}
    assert cone.is_cone(8)
    assert cone.owner(8) == 1
    assert cone.lift_set([0, 7]) == [0, 2, 3, 4]


def test_build_cone_off__from_fixture_files() -> None:
    """Test the tree fixture cones off both subtrees."""
    tree = read_graph(FIXTURES / "tree.edges")
    cone = build_cone_off(tree, read_family(FIXTURES / "tree_family.json", tree))
    assert [member.name for member in cone.family] == ["left", "right"]
    assert cone.graph.label(cone.cone_of(0)) == "v[left]"


def test_de_electrify__replaces_crossing(path7: MetricGraph) -> None:
    """Test ``0, 1, v, 5, 6`` becomes the base path ``0..6``."""
    cone = build_cone_off(path7, [Subspace.of(path7, range(1, 6))])
    lifted = de_electrify(cone, Path((0, 1, 7, 5, 6)))
    assert lifted.path() == Path(tuple(range(7)))
    assert lifted.base_length() == 6
    assert [piece.owner for piece in lifted.crossings] == [0]


def test_de_electrify__rejects_dangling_and_broken_paths(path7: MetricGraph) -> None:
    """Test paths ending at a cone vertex or skipping edges raise."""
    cone = build_cone_off(path7, [Subspace.of(path7, range(1, 6))])
    with pytest.raises(DanglingConeVertexError):
        de_electrify(cone, Path((1, 7)))
    with pytest.raises(InvalidPathError):
        de_electrify(cone, Path((0, 2)))


def test_extended_projection__cone_vertex_projects_its_subspace(path7: MetricGraph) -> None:
    """Test ``π_Y(v_U) = π_Y(U)`` and the own cone vertex is refused."""
    cone = build_cone_off(path7, [Subspace.of(path7, [0, 1]), Subspace.of(path7, [5, 6])])
    projected = extended_projection(cone, 0, cone.cone_of(1))
    assert projected.points == frozenset({1})
    assert projected.base_distance == 4
    assert extended_projection(cone, 0, 3).points == frozenset({1})
    with pytest.raises(SelfProjectionError):
        extended_projection(cone, 0, cone.cone_of(0))


def test_extended_dpi__lifts_cone_vertices(path7: MetricGraph) -> None:
    """Test projection distances through cone vertices."""
    cone = build_cone_off(path7, [Subspace.of(path7, [0, 1]), Subspace.of(path7, [5, 6])])
    assert extended_dpi(cone, 0, 3, cone.cone_of(1)) == 0
    assert extended_dpi(cone, 0, 0, cone.cone_of(1)) == 1
    with pytest.raises(SelfProjectionError):
        extended_dpi(cone, 0, 3, cone.cone_of(0))


def test_build_modified_cone_off__fattens_relative_projections(path7: MetricGraph) -> None:
    """Test each relative projection is fattened by ``⌊A⌋`` before coning."""
    modified = build_modified_cone_off(path7, {"U": [3]}, 1)
    assert modified.family[0].members == frozenset({2, 3, 4})
    assert modified.family[0].name == "U"
    over = cone_off_over(modified, [Subspace.of(modified.graph, [0, 1])])
    assert over.graph.vertex_count == modified.graph.vertex_count + 1


def test_build_modified_cone_off__missing_projection(path7: MetricGraph) -> None:
    """Test an undefined or empty relative projection raises."""
    with pytest.raises(MissingRhoError):
        build_modified_cone_off(path7, {"U": None}, 1)
    with pytest.raises(MissingRhoError):
        build_modified_cone_off(path7, {"U": []}, 1)


def test_check_spriano__zero_on_trees() -> None:
    """Test de-electrified geodesics cover base geodesics in a tree."""
    tree = read_graph(FIXTURES / "tree.edges")
    cone = build_cone_off(tree, read_family(FIXTURES / "tree_family.json", tree))
    measured = check_spriano(cone, Sampling.exhaustive())
    assert measured.value == 0
    assert measured.exact


def test_strong_bgi_check__threshold_matters(path7: MetricGraph) -> None:
    """Test adjacent points with distinct projections avoid the cone, far ones do not."""
    cone = build_cone_off(path7, [Subspace.of(path7, range(1, 6))])
    strict = strong_bgi_check(cone, 0, Sampling.exhaustive())
    assert not strict.passed
    assert (1, 2, 0) in strict.violations
    relaxed = strong_bgi_check(cone, 2, Sampling.exhaustive())
    assert relaxed.passed
    assert relaxed.details["triggered"] > 0


def test_strong_bgi_check__cone_vertex_ends(path7: MetricGraph) -> None:
    """Test the cone vertex over one end of the path is paired with points near the other."""
    family = [Subspace.of(path7, [0, 1, 2]), Subspace.of(path7, [4, 5, 6])]
    cone = build_cone_off(path7, family)
    strict = strong_bgi_check(cone, 1, Sampling.exhaustive())
    assert strict.details["cone_pairs"] == 2 * 7 + 1
    assert (cone.cone_of(1), 0, 0) in strict.violations
    assert all(cone.cone_of(index) not in (x, y) for x, y, index in strict.violations)
    assert strong_bgi_check(cone, 2, Sampling.exhaustive()).passed


def test_close_in_x_check__path_cone(path7: MetricGraph) -> None:
    """Test base geodesics stay within one of cone-off geodesics."""
    cone = build_cone_off(path7, [Subspace.of(path7, range(1, 6))])
    check = close_in_x_check(cone, 0, 0, 0, Sampling.exhaustive())
    assert check.bound == 1
    assert check.holds


def test_de_electrification_length_audit__never_shorter(path7: MetricGraph) -> None:
    """Test de-electrified paths are never shorter than base distances."""
    cone = build_cone_off(path7, [Subspace.of(path7, range(1, 6))])
    report = de_electrification_length_audit(cone, Sampling.exhaustive(), L=200, C=0)
    assert report.passed
    assert report.details["ratio_bound"] == "10"
