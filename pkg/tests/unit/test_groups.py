"""Unit tests for words, presentations and Cayley balls."""

import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsequot.constants import OUT_OF_BALL
from coarsequot.errors import BudgetExceededError, NotSmallCancellationError, ParseError
from coarsequot.groups.ball import cayley_ball
from coarsequot.groups.presentation import Presentation, PresentationKind, piece_report
from coarsequot.groups.words import (
    GroupElement,
    cyclic_reduce,
    distance_matrix,
    power_exponent,
    primitive_root,
    translation_length,
    word_distance,
)

letters = st.sampled_from([1, -1, 2, -2])
words = st.lists(letters, max_size=12).map(lambda w: GroupElement(tuple(w)))


@pytest.fixture
def surface() -> Presentation:
    """The genus-two surface group, a C′(1/8) one-relator group.

    Returns:
        Presentation: ``⟨a, b, c, d | [a, b][c, d]⟩``.
    """
    return Presentation.small_cancellation(4, [GroupElement.parse("abABcdCD")])


def test_group_element__free_reduction_on_construction() -> None:
    """Test cancelling letters are removed."""
    assert GroupElement((1, -1, 2)) == GroupElement((2,))
    assert str(GroupElement.parse("aAbB")) == "1"


def test_group_element__rejects_letter_zero() -> None:
    """Test letter 0 is not a generator."""
    with pytest.raises(ValueError):
        GroupElement((0,))


def test_group_element__parse_and_str() -> None:
    """Test lowercase letters are generators and uppercase their inverses."""
    g = GroupElement.parse("aBc")
    assert g.word == (1, -2, 3)
    assert str(g) == "aBc"
    assert GroupElement.parse("1").is_identity


def test_group_element__parse_rejects_digits() -> None:
    """Test a digit inside a word raises."""
    with pytest.raises(ParseError):
        GroupElement.parse("a1")


@given(words, words)
def test_group_element__inverse_of_product(g: GroupElement, h: GroupElement) -> None:
    """Test ``(gh)⁻¹ = h⁻¹g⁻¹`` and ``g⁻¹g = 1``."""
    assert ~(g * h) == ~h * ~g
    assert (~g * g).is_identity


def test_group_element__powers() -> None:
    """Test positive, negative and zero powers."""
    ab = GroupElement.parse("ab")
    assert str(ab**3) == "ababab"
    assert str(ab**-2) == "BABA"
    assert (ab**0).is_identity


def test_group_element__shortlex_order() -> None:
    """Test shortlex puts ``a`` before ``A`` before ``b``."""
    items = [GroupElement.parse(w) for w in ["b", "A", "aa", "a"]]
    assert [str(g) for g in sorted(items, key=GroupElement.shortlex_key)] == ["a", "A", "b", "aa"]


def test_prefixes__from_identity_to_word() -> None:
    """Test every prefix is listed in order."""
    assert [str(p) for p in GroupElement.parse("abA").prefixes()] == ["1", "a", "ab", "abA"]


def test_cyclic_reduce__splits_conjugator() -> None:
    """Test ``abcA`` is ``a · bc · a⁻¹``."""
    conjugator, core = cyclic_reduce(GroupElement.parse("abcA"))
    assert str(conjugator) == "a"
    assert str(core) == "bc"


def test_primitive_root__proper_power() -> None:
    """Test ``abab`` is the square of ``ab``."""
    root, k = primitive_root(GroupElement.parse("abab"))
    assert str(root) == "ab"
    assert k == 2


def test_power_exponent__negative_and_missing() -> None:
    """Test exponents are signed and non-powers give ``None``."""
    ab = GroupElement.parse("ab")
    assert power_exponent(GroupElement.parse("BABA"), ab) == -2
    assert power_exponent(GroupElement.parse("aab"), ab) is None


def test_translation_length__conjugates_agree() -> None:
    """Test translation length is the cyclic length."""
    assert translation_length(GroupElement.parse("abA")) == 1
    assert translation_length(GroupElement.parse("ab")) == 2


@given(st.lists(words, min_size=1, max_size=5), st.lists(words, min_size=1, max_size=5))
def test_distance_matrix__matches_word_distance(
    rows: list[GroupElement], cols: list[GroupElement]
) -> None:
    """Test the vectorised distances agree with ``|u⁻¹v|``."""
    matrix = distance_matrix(rows, cols)
    for i, u in enumerate(rows):
        for j, v in enumerate(cols):
            assert matrix[i, j] == word_distance(u, v)


def test_piece_report__surface_relator() -> None:
    """Test the surface relator has pieces of length one."""
    report = piece_report([GroupElement.parse("abABcdCD")])
    assert report.longest_piece == 1
    assert report.shortest_relator == 8
    assert report.small_cancellation


def test_small_cancellation__rejects_commutator() -> None:
    """Test the torus relator fails C′(1/6)."""
    with pytest.raises(NotSmallCancellationError):
        Presentation.small_cancellation(2, [GroupElement.parse("abAB")])


def test_small_cancellation__rejects_proper_power_of_letter() -> None:
    """Test a relator that is a power of one letter is degenerate."""
    with pytest.raises(NotSmallCancellationError):
        Presentation.small_cancellation(1, [GroupElement.parse("aaaa")])


def test_presentation__rejects_invalid_shapes() -> None:
    """Test rank, relator and factor validation."""
    with pytest.raises(ValueError):
        Presentation(0)
    with pytest.raises(ValueError):
        Presentation(1, (GroupElement.parse("b"),))
    with pytest.raises(ValueError):
        Presentation(3, (), PresentationKind.FREE_PRODUCT, (1, 1))


def test_is_trivial__dehn_algorithm(surface: Presentation) -> None:
    """Test relators and their conjugates are trivial and short words are not."""
    assert surface.is_trivial(GroupElement.parse("abABcdCD"))
    assert surface.is_trivial(GroupElement.parse("bABcdCDa"))
    assert surface.is_trivial(GroupElement.parse("dcDCbaBA"))
    assert not surface.is_trivial(GroupElement.parse("ab"))
    assert not surface.is_trivial(GroupElement.parse("abABcd"))


def test_dehn_reduce__replaces_long_relator_piece(surface: Presentation) -> None:
    """Test five letters of the relator become the inverse of the other three."""
    assert str(surface.dehn_reduce(GroupElement.parse("abABc"))) == "dcD"
    assert surface.equal(GroupElement.parse("abABc"), GroupElement.parse("dcD"))


def test_multiply__normal_form_per_kind(surface: Presentation) -> None:
    """Test products are freely reduced, Dehn reduced or reduced modulo the order."""
    free = Presentation.free(2)
    assert str(free.multiply(GroupElement.parse("ab"), GroupElement.parse("Ba"))) == "aa"
    assert str(surface.multiply(GroupElement.parse("abA"), GroupElement.parse("Bc"))) == "dcD"
    z6 = Presentation.cyclic(6)
    assert z6.multiply(GroupElement.parse("aaa"), GroupElement.parse("aaa")).is_identity


def test_dehn_reduce__needs_small_cancellation() -> None:
    """Test Dehn reduction is refused on a free group."""
    with pytest.raises(NotSmallCancellationError):
        Presentation.free(2).dehn_reduce(GroupElement.parse("ab"))
    with pytest.raises(NotSmallCancellationError):
        Presentation.free(2).equality_floor()


def test_equality_floor__surface(surface: Presentation) -> None:
    """Test the floor is ``(1/2 − 3/8)·8 = 1``."""
    assert surface.equality_floor() == 1


def test_cyclic__centred_exponents() -> None:
    """Test ``a⁵ = a⁻¹`` in the cyclic group of order six."""
    z6 = Presentation.cyclic(6)
    assert str(z6.normal_form(GroupElement.parse("aaaaa"))) == "A"
    assert z6.length(GroupElement.parse("aaaaa")) == 1
    assert z6.is_trivial(GroupElement.parse("AAAAAA"))
    assert not z6.is_trivial(GroupElement.parse("aaa"))


def test_factor_of__free_product() -> None:
    """Test generators are numbered factor by factor."""
    pres = Presentation.free_product([1, 2])
    assert pres.factor_of(1) == 0
    assert pres.factor_of(-2) == 1
    assert pres.factor_of(3) == 1
    assert pres.is_free


def test_presentation__from_dict_defaults_kind() -> None:
    """Test a presentation with relators defaults to small cancellation."""
    pres = Presentation.from_dict({"rank": 4, "relators": ["abABcdCD"]})
    assert pres.kind is PresentationKind.SMALL_CANCELLATION
    assert Presentation.from_dict({"rank": 2}).kind is PresentationKind.FREE


def test_presentation__from_dict_errors() -> None:
    """Test missing and malformed fields raise ``ParseError``."""
    with pytest.raises(ParseError):
        Presentation.from_dict({"relators": []})
    with pytest.raises(ParseError):
        Presentation.from_dict({"rank": 2, "kind": "free_product", "factor_ranks": [1]})


def test_presentation__read_round_trip(tmp_path: Path, surface: Presentation) -> None:
    """Test a written presentation reads back equal."""
    path = tmp_path / "surface.json"
    path.write_text(json.dumps(surface.to_dict()))
    assert Presentation.read(path) == surface


def test_cayley_ball__free_group_counts() -> None:
    """Test the rank-two free ball has ``2·3ʳ − 1`` vertices and is a tree."""
    ball = cayley_ball(Presentation.free(2), 2)
    assert ball.vertex_count == 17
    assert len(ball.graph.edges) == 16
    assert str(ball.element_of(0)) == "1"


def test_cayley_ball__cyclic_group_is_a_cycle() -> None:
    """Test the whole cyclic group of order six appears as a hexagon."""
    ball = cayley_ball(Presentation.cyclic(6), 3)
    assert ball.vertex_count == 6
    assert len(ball.graph.edges) == 6
    assert all(len(ball.graph.neighbors(v)) == 2 for v in ball.graph.vertices())


def test_cayley_ball__surface_group_small_radius(surface: Presentation) -> None:
    """Test no relation is visible below half the relator length."""
    ball = cayley_ball(surface, 2)
    assert ball.vertex_count == 1 + 8 + 8 * 7


def test_cayley_ball__locate_and_act() -> None:
    """Test locating elements inside and outside the ball."""
    ball = cayley_ball(Presentation.free(2), 2)
    a = GroupElement.parse("a")
    v = ball.locate(GroupElement.parse("ab"))
    assert ball.graph.distance(0, v) == 2
    assert ball.locate(GroupElement.parse("aba")) == OUT_OF_BALL
    assert ball.act(a, ball.locate(GroupElement.parse("A"))) == 0
    assert ball.path_of([GroupElement.parse(w) for w in ["1", "a", "ab"]]) is not None
    assert ball.path_of([GroupElement.parse("abab")]) is None


def test_cayley_ball__budget_and_radius() -> None:
    """Test a tiny vertex cap and a zero radius raise."""
    with pytest.raises(BudgetExceededError):
        cayley_ball(Presentation.free(3), 3, vertex_cap=20)
    with pytest.raises(ValueError):
        cayley_ball(Presentation.free(2), 0)
