"""Unit tests for random walks, quasi-axes and matches."""

from fractions import Fraction

import pytest

from coarsequot.constants import AAS_FRACTION, EPSILON, MATCH_Q, STDERR_MARGIN
from coarsequot.errors import (
    ElementaryMeasureError,
    InsufficientSamplesError,
    InvalidMeasureError,
    NotApplicableError,
    TranslationTooSmallError,
)
from coarsequot.groups.ball import cayley_ball
from coarsequot.groups.presentation import Presentation
from coarsequot.groups.words import GroupElement, word_distance
from coarsequot.randwalk.axes import axis_fellow_travel, build_quasi_axis
from coarsequot.randwalk.core import (
    Measure,
    estimate_drift,
    sample_walk,
    translation_length,
    translation_statistics,
)
from coarsequot.randwalk.matching import find_match, match_statistics, self_match_audit

a, b = GroupElement.parse("a"), GroupElement.parse("b")


@pytest.fixture
def f2() -> Presentation:
    """The free group of rank two.

    Returns:
        Presentation: ``F₂``.
    """
    return Presentation.free(2)


def test_measure__validation() -> None:
    """Test empty, duplicated, non-positive and unnormalised measures raise."""
    with pytest.raises(InvalidMeasureError):
        Measure((), ())
    with pytest.raises(InvalidMeasureError):
        Measure((a, a), (0.5, 0.5))
    with pytest.raises(InvalidMeasureError):
        Measure((a, b), (1.0, 0.0))
    with pytest.raises(InvalidMeasureError):
        Measure((a, b), (0.5, 0.4))


def test_measure__symmetry_and_cyclic_support(f2: Presentation) -> None:
    """Test symmetric and cyclic detection."""
    uniform = Measure.uniform_generators(f2)
    assert uniform.symmetric
    assert not uniform.generates_cyclic()
    assert not Measure.uniform([a, b]).symmetric
    assert Measure.uniform([a, ~a, a * a]).generates_cyclic()


def test_estimate_drift__rejects_elementary_support(f2: Presentation) -> None:
    """Test a symmetric measure on ``⟨a⟩`` raises."""
    with pytest.raises(ElementaryMeasureError):
        estimate_drift(f2, Measure.uniform([a, ~a]), 10, 5, 0)


def test_estimate_drift__needs_two_trials(f2: Presentation) -> None:
    """Test one trial is not enough."""
    with pytest.raises(InsufficientSamplesError):
        estimate_drift(f2, Measure.uniform_generators(f2), 10, 1, 0)


def test_sample_walk__reproducible_from_seed(f2: Presentation) -> None:
    """Test one seed gives one walk and prefixes move one step at a time."""
    measure = Measure.uniform_generators(f2)
    first = sample_walk(measure, 50, 7)
    assert first == sample_walk(measure, 50, 7)
    assert first.length == 50
    assert len(first.prefix_endpoints) == 51
    assert first.prefix_endpoints[0].is_identity
    for u, v in zip(first.prefix_endpoints, first.prefix_endpoints[1:], strict=False):
        assert word_distance(u, v) == 1


@pytest.mark.slow
def test_estimate_drift__free_group_half(f2: Presentation) -> None:
    """Test the simple walk on ``F₂`` escapes at speed one half."""
    estimate = estimate_drift(f2, Measure.uniform_generators(f2), 200, 200, 1)
    assert abs(estimate.mean - 0.5) < 0.05
    assert estimate.conservative(3) < estimate.mean


def test_translation_length__exact_and_estimated(f2: Presentation) -> None:
    """Test free groups use the cyclic length and others the power estimate."""
    assert translation_length(f2, GroupElement.parse("abA"), 2) == 1
    z6 = Presentation.cyclic(6)
    assert translation_length(z6, a, 6) == 0
    with pytest.raises(ValueError):
        translation_length(f2, a, 1)


def test_translation_statistics__shapes(f2: Presentation) -> None:
    """Test one ``τ`` per seed and a fraction in the unit interval."""
    stats = translation_statistics(f2, Measure.uniform_generators(f2), 30, 6, 0.5, 3, 3)
    assert len(stats.taus) == 6
    assert 0 <= stats.pass_fraction <= 1
    with pytest.raises(InsufficientSamplesError):
        translation_statistics(f2, Measure.uniform_generators(f2), 30, 1, 0.5, 3, 3)


@pytest.mark.slow
def test_translation_statistics__free_group_clears_threshold(f2: Presentation) -> None:
    """Test ``τ(w₅₀₀)`` clears ``(Δ̂ − 3σ)·n`` for at least 95% of seeds on ``F₂``."""
    measure = Measure.uniform_generators(f2)
    drift = estimate_drift(f2, measure, 500, 200, 1)
    stats = translation_statistics(f2, measure, 500, 100, drift.mean, 2, STDERR_MARGIN)
    assert stats.threshold < drift.mean * 500
    assert stats.pass_fraction >= AAS_FRACTION


def test_find_match__recovers_translator() -> None:
    """Test a translated geodesic is matched by its translator with ``B = 0``."""
    f3 = Presentation.free(3)
    p = GroupElement.parse("abab").prefixes()
    c = GroupElement.parse("c")
    q = [c * x for x in p]
    match = find_match(f3, p, q, 3, 0, 1)
    assert match is not None
    assert match.g == c
    assert match.B == 0
    assert match.A >= 3
    assert find_match(f3, p, q, 3, 0, 0) is None


def test_find_match__argument_errors(f2: Presentation) -> None:
    """Test non-free presentations and negative scales raise."""
    p = GroupElement.parse("ab").prefixes()
    with pytest.raises(NotApplicableError):
        find_match(Presentation.cyclic(5), p, p, 1, 0, 1)
    with pytest.raises(ValueError):
        find_match(f2, p, p, -1, 0, 1)


def test_self_match_audit__powers_only(f2: Presentation) -> None:
    """Test the self-matches of ``(ab)³`` translate by powers of ``ab``."""
    report = self_match_audit(f2, GroupElement.parse("ababab"), 2, 0, 2)
    assert report.passed
    assert report.examined >= 1


def test_match_statistics__one_flag_per_seed(f2: Presentation) -> None:
    """Test every seed is scanned."""
    stats = match_statistics(f2, Measure.uniform_generators(f2), 20, 4, 5.0, 1, 2, 0)
    assert len(stats.matched) == 4
    assert 0 <= stats.clean_fraction <= 1


@pytest.mark.slow
def test_match_statistics__independent_walks_rarely_match(f2: Presentation) -> None:
    """Test two walks of length 200 on ``F₂`` admit no ``(0.2·Δ̂n, 5)``-match in 95% of seeds."""
    measure = Measure.uniform_generators(f2)
    drift = estimate_drift(f2, measure, 200, 200, 1)
    A = EPSILON * drift.mean * 200
    stats = match_statistics(f2, measure, 200, 100, A, MATCH_Q, MATCH_Q, 2)
    assert len(stats.matched) == 100
    assert stats.clean_fraction >= AAS_FRACTION


def test_build_quasi_axis__truncated_in_ball(f2: Presentation) -> None:
    """Test the axis of ``ab`` runs from ``(ab)⁻²`` to ``(ab)²`` inside the radius-4 ball."""
    ball = cayley_ball(f2, 4)
    axis = build_quasi_axis(ball, GroupElement.parse("ab"), 0, 2)
    assert axis.tau == 2
    assert axis.displacement == 2
    assert axis.truncated
    assert [str(ball.element_of(v)) for v in axis.span] == [
        "BABA", "BAB", "BA", "B", "1", "a", "ab", "aba", "abab",
    ]
    assert axis.quasiconvex
    assert len(axis.pieces(ball)) == 1


def test_build_quasi_axis__short_translation(f2: Presentation) -> None:
    """Test translation at most ``100δ`` and negative powers raise."""
    ball = cayley_ball(f2, 2)
    with pytest.raises(TranslationTooSmallError):
        build_quasi_axis(ball, a, 1, 1)
    with pytest.raises(TranslationTooSmallError):
        build_quasi_axis(ball, GroupElement.identity(), 0, 1)
    with pytest.raises(ValueError):
        build_quasi_axis(ball, a, 0, -1)


def test_axis_fellow_travel__own_orbit(f2: Presentation) -> None:
    """Test the axis and the orbit of its own generator coincide."""
    ball = cayley_ball(f2, 4)
    ab = GroupElement.parse("ab")
    axis = build_quasi_axis(ball, ab, 0, 2)
    check = axis_fellow_travel(ball, axis, ab, Fraction(0), 2)
    assert check.holds
    assert check.observed == 0
