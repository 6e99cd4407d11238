"""Graphs submodule: metric graphs and the measurements made on them."""

from coarsequot.graphs.core import MetricGraph as MetricGraph
from coarsequot.graphs.core import Path as Path
from coarsequot.graphs.core import ProjectionSet as ProjectionSet
from coarsequot.graphs.core import Subspace as Subspace
from coarsequot.graphs.measure import Measurement as Measurement
from coarsequot.graphs.measure import Sampling as Sampling
