"""Unit tests for spinning families, the quotient and triangle lifting on the integer line."""

import dataclasses
from fractions import Fraction

import pytest

from coarsequot.errors import (
    EmptySubspaceError,
    NotApplicableError,
    NotThroughConeError,
    OracleMismatchError,
    SearchExhaustedError,
)
from coarsequot.graphs.core import Path
from coarsequot.graphs.measure import Sampling
from coarsequot.groups.ball import cayley_ball
from coarsequot.groups.presentation import Presentation
from coarsequot.groups.words import GroupElement
from coarsequot.ledger.core import BaseConstants, derive
from coarsequot.randwalk.axes import build_quasi_axis
from coarsequot.spinning.checks import (
    edge_orbit_check,
    no_pivot_check,
    orbit_growth_check,
    orbit_separation,
    quotient_slimness_check,
    stabilizer_check,
)
from coarsequot.spinning.core import (
    SpinningInstance,
    bend,
    find_shortening_pair,
    line_instance,
    normal_element,
    spinning_instance,
    verify_spinning,
)
from coarsequot.spinning.lifting import lift_random_triangles, lift_triangle
from coarsequot.spinning.quotient import (
    QuotientGraph,
    build_quotient,
    certify_minimal,
    injectivity_report,
    isoproj_check,
    isoproj_report,
    saturation_set,
)
from coarsequot.spinning.runner import spinning_M0
from coarsequot.spinning.unionfind import PotentialUnionFind

a = GroupElement.generator(0)


def vertex(k: int) -> int:
    """Ball vertex of ``a^k`` in shortlex breadth-first order.

    Returns:
        int: The vertex id.
    """
    return 2 * k - 1 if k > 0 else -2 * k


@pytest.fixture
def inst() -> SpinningInstance:
    """The integers to radius 10, coned along the line and rotated by ``a⁵``.

    Returns:
        SpinningInstance: The line instance with ``L = 4``.
    """
    return line_instance(10, 5, 4)


@pytest.fixture
def quotient(inst: SpinningInstance) -> QuotientGraph:
    """The quotient of the line instance.

    Returns:
        QuotientGraph: Classes modulo five plus the cone class.
    """
    return build_quotient(inst)


def test_potential_union_find__composes_elements() -> None:
    """Test carried elements compose along unions and loops are recorded."""
    links = PotentialUnionFind(4)
    links.union(0, 1, GroupElement.parse("a"))
    links.union(1, 2, GroupElement.parse("b"))
    assert links.carry(0, 2) == GroupElement.parse("ba")
    assert links.carry(0, 3) is None
    links.union(0, 2, GroupElement.parse("c"))
    assert len(links.cycles) == 1
    assert links.groups() == [[0, 1, 2], [3]]


def test_spinning_instance__needs_free_group() -> None:
    """Test a cyclic ambient group is refused."""
    with pytest.raises(NotApplicableError):
        SpinningInstance(cayley_ball(Presentation.cyclic(5), 2), (), Fraction(1), None)


def test_spinning_instance__translates_axis() -> None:
    """Test the identity translate comes first and carries the axis element."""
    ball = cayley_ball(Presentation.free(2), 4)
    ab = GroupElement.parse("ab")
    axis = build_quasi_axis(ball, ab, 0, 2)
    family = spinning_instance(ball, [axis], 1, None, 1, 3)
    assert family.members[0].key == "Y0.1"
    assert family.members[0].generator == ab
    assert family.truncated
    with pytest.raises(EmptySubspaceError):
        spinning_instance(ball, [axis], 1, None, 1, 1000)


def test_verify_spinning__line_displacement(inst: SpinningInstance) -> None:
    """Test rotating by ``a⁵`` moves projections by exactly five."""
    check = verify_spinning(inst)
    assert check.min_observed == 5
    assert check.axis_displacement == 5
    assert check.passed
    assert not verify_spinning(dataclasses.replace(inst, L=Fraction(5))).passed


def test_normal_element__syllables(inst: SpinningInstance) -> None:
    """Test powers of ``a⁵`` have complexity one and other words none."""
    assert normal_element(inst, GroupElement.identity()).complexity == 0
    assert normal_element(inst, a**10).syllables == ((0, 2),)
    assert normal_element(inst, a**20).complexity == 2
    with pytest.raises(SearchExhaustedError):
        normal_element(inst, a**3)


def test_find_shortening_pair__cancels_leading_syllable(inst: SpinningInstance) -> None:
    """Test ``a¹⁰`` at the identity is shortened by ``a⁻¹⁰``."""
    pair = find_shortening_pair(inst, 0, normal_element(inst, a**10))
    assert pair is not None
    assert pair.generator_power == (0, -2)
    assert pair.complexity == 0
    assert pair.verified
    assert find_shortening_pair(inst, 0, normal_element(inst, GroupElement.identity())) is None


def test_bend__rotates_tail(inst: SpinningInstance) -> None:
    """Test bending ``a, v, a⁻¹`` at the cone sends the tail to ``a⁴``."""
    cone_vertex = inst.cone.cone_of(0)
    bent = bend(inst, Path((vertex(1), cone_vertex, vertex(-1))), 0, 1)
    assert bent == Path((vertex(1), cone_vertex, vertex(4)))
    with pytest.raises(NotThroughConeError):
        bend(inst, Path((vertex(1), 0, vertex(-1))), 0, 1)


def test_saturation_set__abelian_conjugates(inst: SpinningInstance) -> None:
    """Test conjugates of ``a^{±5}`` collapse to two elements."""
    assert saturation_set(inst, 0) == [a**5, a**-5]
    assert saturation_set(inst, 2) == [a**5, a**-5]
    with pytest.raises(ValueError):
        saturation_set(inst, -1)


def test_build_quotient__line_becomes_five_cycle(
    inst: SpinningInstance, quotient: QuotientGraph
) -> None:
    """Test base classes are residues modulo five and form a cycle away from the cone."""
    assert quotient.base_class_count == 5
    assert len(quotient.classes) == 6
    assert quotient.class_of(vertex(2)) == quotient.class_of(vertex(-3))
    assert quotient.class_of(vertex(2)) != quotient.class_of(vertex(3))
    cone_class = quotient.class_of(inst.cone.cone_of(0))
    for index in range(len(quotient.classes)):
        if index == cone_class:
            continue
        neighbors = set(quotient.graph.neighbors(index)) - {cone_class}
        assert len(neighbors) == 2
    assert quotient.oracle_checked is not None
    assert quotient.oracle_checked > 0
    assert quotient.carry(vertex(0), vertex(5)) == a**5


def test_build_quotient__wrong_oracle(inst: SpinningInstance) -> None:
    """Test classes that disagree with the presentation raise."""
    with pytest.raises(OracleMismatchError):
        build_quotient(dataclasses.replace(inst, quotient=Presentation.cyclic(4)))


def test_certify_minimal__closest_representatives(quotient: QuotientGraph) -> None:
    """Test the classes of 0 and 3 are closest at 0 and −2."""
    pair = certify_minimal(quotient, vertex(0), vertex(3))
    assert (pair.x, pair.y) == (vertex(0), vertex(-2))
    assert pair.distance == 2
    assert pair.certified


def test_injectivity_report__displacement_five(
    inst: SpinningInstance, quotient: QuotientGraph
) -> None:
    """Test every nontrivial element of ``N`` moves every point by five."""
    report = injectivity_report(inst, quotient)
    assert report.min_displacement == 5
    assert report.free
    assert report.tau is None
    assert report.passed



def test_isoproj_check__equal_points(inst: SpinningInstance, quotient: QuotientGraph) -> None:
    """Test a point against itself is at distance zero everywhere."""
    ledgered = dataclasses.replace(inst, L=Fraction(1000), derived=derive(BaseConstants()))
    check = isoproj_check(ledgered, quotient, vertex(3), vertex(3))
    assert check.passed
    assert check.details["base_distance"] == 0
    assert check.details["quotient_distance"] == 0


def test_isoproj_check__large_projection_raises(
    inst: SpinningInstance, quotient: QuotientGraph
) -> None:
    """Test a projection distance above L/20 and a missing ledger are refused."""
    with pytest.raises(NotApplicableError):
        isoproj_check(inst, quotient, vertex(0), vertex(1))
    short = dataclasses.replace(inst, L=Fraction(20), derived=derive(BaseConstants()))
    with pytest.raises(NotApplicableError):
        isoproj_check(short, quotient, vertex(0), vertex(3))


def test_isoproj_check__unequal_distances_violate(
    inst: SpinningInstance, quotient: QuotientGraph
) -> None:
    """Test 0 and 5 are two apart through the cone but one point in the quotient."""
    ledgered = dataclasses.replace(inst, L=Fraction(1000), derived=derive(BaseConstants()))
    assert isoproj_check(ledgered, quotient, vertex(0), vertex(1)).passed
    check = isoproj_check(ledgered, quotient, vertex(0), vertex(5))
    assert check.violations == ((vertex(0), vertex(5)),)
    assert check.details["cone_distance"] == 2
    assert check.details["quotient_distance"] == 0
    assert check.details["comparable"]
    assert not check.details["equal"]


def test_isoproj_report__pairs_sampled_vertices(
    inst: SpinningInstance, quotient: QuotientGraph
) -> None:
    """Test the disjoint pairs of the 21 ball vertices include the unequal pair 3, −2."""
    ledgered = dataclasses.replace(inst, L=Fraction(1000), derived=derive(BaseConstants()))
    report = isoproj_report(ledgered, quotient, Sampling.exhaustive())
    assert report.examined == 10
    assert report.details["skipped"] == 0
    assert (vertex(-2), vertex(3)) in report.violations
    assert (vertex(0), vertex(1)) not in report.violations

def test_quotient_checks__line(inst: SpinningInstance, quotient: QuotientGraph) -> None:
    """Test edge orbits, pivots and stabilisers on the line quotient."""
    assert edge_orbit_check(inst, quotient).passed
    assert no_pivot_check(inst, quotient).passed
    assert stabilizer_check(inst, quotient).passed
    assert quotient_slimness_check(inst, quotient).observed <= 1


def test_orbit_checks__line(inst: SpinningInstance, quotient: QuotientGraph) -> None:
    """Test orbit growth needs a ledger and opposite orbits stay one apart."""
    with pytest.raises(NotApplicableError):
        orbit_growth_check(inst, quotient, a, 0, [1, 2])
    assert orbit_separation(inst, quotient, a, ~a, 0, range(1, 4)) == 1


def test_lift_triangle__closes_without_bending(
    inst: SpinningInstance, quotient: QuotientGraph
) -> None:
    """Test the triangle on residues 0, 1, 2 lifts closed and isometric."""
    lift = lift_triangle(inst, quotient, vertex(0), vertex(1), vertex(2))
    assert lift.closed
    assert lift.bends == 0
    assert lift.isometric
    assert lift.slimness is not None


def test_lift_random_triangles__seeded(inst: SpinningInstance, quotient: QuotientGraph) -> None:
    """Test the batch is reproducible from its seed."""
    first = lift_random_triangles(inst, quotient, 5, 11)
    second = lift_random_triangles(inst, quotient, 5, 11)
    assert len(first.lifts) == 5
    assert first.to_dict() == second.to_dict()


def test_spinning_M0__counts_every_term() -> None:
    """Test ``εΔ̂n``, ``4K``, ``4E`` and ``2Φ`` all enter the separation constant."""
    assert spinning_M0(0.2, Fraction(100), 1, 2, 3) == Fraction(38)
    assert spinning_M0(0.2, Fraction(100), 1, 0, 3) == Fraction(30)
    assert spinning_M0(Fraction(1, 3), 9, 0, 0, 0) == Fraction(3)
