"""Random walks on groups: drift, translation length, quasi-axes and matches."""

from coarsequot.randwalk.axes import QuasiAxis as QuasiAxis
from coarsequot.randwalk.axes import build_quasi_axis as build_quasi_axis
from coarsequot.randwalk.core import Measure as Measure
from coarsequot.randwalk.core import WalkSample as WalkSample
from coarsequot.randwalk.core import estimate_drift as estimate_drift
from coarsequot.randwalk.core import sample_walk as sample_walk
from coarsequot.randwalk.core import translation_length as translation_length
from coarsequot.randwalk.matching import MatchReport as MatchReport
from coarsequot.randwalk.matching import find_match as find_match
