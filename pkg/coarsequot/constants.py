"""Constants used throughout the coarsequot package."""

from typing import Final

# Report format
SCHEMA: Final[str] = "coarsequot/1"
REPORT_SUFFIX: Final[str] = ".json"
ROWS_SUFFIX: Final[str] = ".csv"

# Exhaustive vs. sampled measurement
EXHAUSTIVE_VERTEX_CAP: Final[int] = 400
TRIPLE_CAP: Final[int] = 2_000_000
PAIR_CAP: Final[int] = 200_000
DEFAULT_SAMPLES: Final[int] = 2_000
GEODESIC_ENUMERATION_CAP: Final[int] = 512
ROW_CACHE_ENTRIES: Final[int] = 4_000_000
NEIGHBORHOOD_RADIUS: Final[int] = 1
PROPAGATION_RADII: Final[tuple[int, ...]] = (0, 1, 2, 4)

# Cayley balls and group actions
BALL_VERTEX_CAP: Final[int] = 50_000
OUT_OF_BALL: Final[int] = -1
EQUALITY_CHECK_CAP: Final[int] = 500_000
GENERATOR_LETTERS: Final[str] = "abcdefghijklmnopqrstuvwxyz"
IDENTITY_LABEL: Final[str] = "1"

# Random walks
DEFAULT_SEED: Final[int] = 7
DEFAULT_TRIALS: Final[int] = 200
DEFAULT_SEEDS: Final[int] = 100
AAS_FRACTION: Final[float] = 0.95
EPSILON: Final[float] = 0.2
MATCH_Q: Final[int] = 5
STDERR_MARGIN: Final[int] = 3
MATCH_WORK_CAP: Final[int] = 50_000_000
AXIS_TRANSLATION_FACTOR: Final[int] = 100

# Spinning families and quotients
DEFAULT_BALL_RADIUS: Final[int] = 8
DEFAULT_WALK_LENGTH: Final[int] = 60
DEFAULT_WALKS: Final[int] = 1
DEFAULT_TRANSLATE_RADIUS: Final[int] = 2
DEFAULT_MIN_OVERLAP: Final[int] = 3
DEFAULT_TRIANGLES: Final[int] = 50
MAX_RESAMPLES: Final[int] = 50
SPIN_EXPONENT_LIMIT: Final[int] = 3
SHORTENING_EXPONENT_LIMIT: Final[int] = 3

# Hierarchy checks
HHS_SAMPLES: Final[int] = 500
HHS_CONSTANT_CAP: Final[int] = 64
UNIQUENESS_RADII: Final[int] = 6
PASSING_UP_THRESHOLDS: Final[tuple[int, ...]] = (1, 2, 4, 8)
HHS_DOMAIN_SAMPLES: Final[int] = 32
HHS_REALIZATION_SAMPLES: Final[int] = 50
BGI_PAIRS_PER_DOMAIN: Final[int] = 8
MINIMAL_LIFT_STEPS: Final[int] = 64
MAX_BAD_ENDINGS: Final[int] = 4
DISTANCE_FORMULA_THRESHOLD: Final[int] = 2

# Commands shown in the banner
COMMANDS: Final[tuple[str, ...]] = (
    "ANALYZE",
    "CONSTANTS",
    "CONEOFF",
    "PROJCPLX",
    "WALK",
    "QUOTIENT",
    "HHS-VERIFY",
    "PLOT-DATA",
)
