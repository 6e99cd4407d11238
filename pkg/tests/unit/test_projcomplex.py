"""Unit tests for projection families and projection complexes."""

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from coarsequot.coning.core import ConeOff, build_cone_off
from coarsequot.errors import (
    NotCoboundedlyCoveredError,
    ParseError,
    PreconditionBrokenError,
    SelfProjectionError,
)
from coarsequot.graphs.core import MetricGraph, Subspace
from coarsequot.projcomplex.core import (
    Provenance,
    augment_with_points,
    bounded_path_image_check,
    build_projection_complex,
    explicit_family,
    geometric_family,
    read_explicit_family,
    union_diameters,
    verify_projection_axioms,
)


@pytest.fixture
def cone() -> ConeOff:
    """The seven-vertex path with its middle and both ends coned off.

    Returns:
        ConeOff: Family ``Y = {1..5}``, ``U = {0}``, ``V = {6}``.
    """
    graph = MetricGraph(7, [(i, i + 1) for i in range(6)])
    family = [
        Subspace.of(graph, range(1, 6), "Y"),
        Subspace.of(graph, [0], "U"),
        Subspace.of(graph, [6], "V"),
    ]
    return build_cone_off(graph, family)


def row(y: str, u: str, v: str, d: str) -> dict[str, object]:
    """One explicit projection row.

    Returns:
        dict[str, object]: The row.
    """
    return {"Y": y, "U": u, "V": v, "d": d}


def test_union_diameters__pairwise() -> None:
    """Test union diameters on the three-point path."""
    internal = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    masks = np.array([[True, False, False], [False, False, True]])
    assert union_diameters(masks, internal).tolist() == [[0, 2], [2, 0]]


def test_geometric_family__projection_diameters(cone: ConeOff) -> None:
    """Test the ends are four apart seen from the middle and close seen from each other."""
    family = geometric_family(cone)
    assert family.names == ("Y", "U", "V")
    assert family.dpi(0, 1, 2) == 4
    assert family.dpi(1, 0, 2) == 0
    with pytest.raises(SelfProjectionError):
        family.dpi(0, 0, 1)


def test_verify_projection_axioms__geometric_family_passes(cone: ConeOff) -> None:
    """Test the coned path satisfies the axioms with ``θ = 3``."""
    report = verify_projection_axioms(geometric_family(cone), 3)
    assert report.passed
    assert report.result("V").count == 1


def test_explicit_family__fractions_and_mirrors() -> None:
    """Test fractional distances share a scale and rows fill their mirrors."""
    family = explicit_family([row("A", "B", "C", "1/2"), row("B", "A", "C", "3")])
    assert family.scale == 2
    assert family.provenance is Provenance.EXPLICIT
    assert family.dpi(0, 1, 2) == Fraction(1, 2)
    assert family.dpi(0, 2, 1) == Fraction(1, 2)
    assert family.dpi(1, 0, 2) == 3
    assert family.dpi(2, 0, 1) == 0


def test_explicit_family__malformed_rows() -> None:
    """Test self-projection rows and missing fields raise."""
    with pytest.raises(ParseError):
        explicit_family([row("A", "A", "B", "1")])
    with pytest.raises(ParseError):
        explicit_family([{"Y": "A", "U": "B", "V": "C"}])


def test_read_explicit_family__requires_list(tmp_path: Path) -> None:
    """Test a JSON object instead of a list raises."""
    path = tmp_path / "family.json"
    path.write_text('{"Y": "A"}')
    with pytest.raises(ParseError):
        read_explicit_family(path)


def test_verify_projection_axioms__asymmetry_fails_first_axiom() -> None:
    """Test differing mirror rows break symmetry."""
    family = explicit_family([row("A", "B", "C", "1"), row("A", "C", "B", "2")])
    report = verify_projection_axioms(family, 5)
    assert report.failures() == ["I"]


def test_verify_projection_axioms__triangle_inequality() -> None:
    """Test a long side with two short ones breaks the triangle inequality."""
    family = explicit_family(
        [row("Y", "A", "C", "10"), row("Y", "A", "B", "1"), row("Y", "B", "C", "1")]
    )
    report = verify_projection_axioms(family, 20)
    assert report.failures() == ["II"]
    assert report.result("II").count > 0


def test_verify_projection_axioms__behrstock_inequality() -> None:
    """Test two large mutual projections break the fourth axiom."""
    family = explicit_family([row("A", "B", "C", "10"), row("C", "A", "B", "10")])
    report = verify_projection_axioms(family, 5)
    assert "IV" in report.failures()
    assert verify_projection_axioms(family, 10).passed


def test_build_projection_complex__threshold_joins(cone: ConeOff) -> None:
    """Test the ends are joined only once the threshold reaches their projection distance."""
    family = geometric_family(cone)
    tight = build_projection_complex(family, 3)
    assert tight.graph.edges == frozenset({(0, 1), (0, 2)})
    assert tight.connected
    assert len(build_projection_complex(family, 4).graph.edges) == 3
    with pytest.raises(ValueError):
        build_projection_complex(family, -1)


def test_bounded_path_image_check__precondition(cone: ConeOff) -> None:
    """Test a threshold below ``33θ`` is refused and a valid one passes."""
    complex_ = build_projection_complex(geometric_family(cone), 3)
    with pytest.raises(PreconditionBrokenError):
        bounded_path_image_check(complex_, 1)
    assert bounded_path_image_check(complex_, 0).passed


def test_augment_with_points__covering(cone: ConeOff) -> None:
    """Test every vertex gets a nearest subspace and points project trivially."""
    family = augment_with_points(cone, 1)
    assert family.size == 10
    assert family.provenance is Provenance.POINTS
    assert family.nearest is not None
    assert family.nearest[0] == frozenset({0, 1})
    assert family.nearest[cone.cone_of(0)] == frozenset({0})
    assert family.dpi(cone.cone_of(0), 0, 6) == 4
    assert family.dpi(3, 0, 6) == 0


def test_augment_with_points__uncovered_vertex() -> None:
    """Test a vertex beyond ``R`` of every subspace raises."""
    graph = MetricGraph(7, [(i, i + 1) for i in range(6)])
    cone = build_cone_off(graph, [Subspace.of(graph, range(1, 6))])
    with pytest.raises(NotCoboundedlyCoveredError):
        augment_with_points(cone, 0)
