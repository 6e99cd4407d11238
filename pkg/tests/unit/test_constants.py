"""Unit tests for constants module."""

from coarsequot import constants


def test_schema__versioned() -> None:
    """Test the report schema carries the package name and a version."""
    assert constants.SCHEMA.startswith("coarsequot/")


def test_match_defaults() -> None:
    """Test the match scale ε and Hausdorff bound Q."""
    assert 0 < constants.EPSILON < 1
    assert constants.MATCH_Q == 5


def test_aas_fraction__in_unit_interval() -> None:
    """Test the almost-sure pass fraction is a probability."""
    assert 0 < constants.AAS_FRACTION <= 1


def test_axis_translation_factor() -> None:
    """Test axes need translation length above 100δ."""
    assert constants.AXIS_TRANSLATION_FACTOR == 100


def test_out_of_ball__not_a_vertex() -> None:
    """Test the out-of-ball marker cannot be a vertex id."""
    assert constants.OUT_OF_BALL < 0


def test_caps__exhaustive_below_sampled() -> None:
    """Test the exhaustive vertex cap fits inside the triple cap."""
    assert constants.EXHAUSTIVE_VERTEX_CAP**2 < constants.TRIPLE_CAP


def test_passing_up_thresholds__increasing() -> None:
    """Test passing-up thresholds are strictly increasing."""
    thresholds = constants.PASSING_UP_THRESHOLDS
    assert list(thresholds) == sorted(set(thresholds))


def test_commands__banner_lists_every_command() -> None:
    """Test every command appears in the banner."""
    assert len(constants.COMMANDS) == 8
    assert "PLOT-DATA" in constants.COMMANDS
