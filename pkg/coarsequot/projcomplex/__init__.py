"""Projection complex submodule: projection families, axioms and complexes."""

from coarsequot.projcomplex.core import ProjectionComplex as ProjectionComplex
from coarsequot.projcomplex.core import ProjectionFamily as ProjectionFamily
from coarsequot.projcomplex.core import augment_with_points as augment_with_points
from coarsequot.projcomplex.core import build_projection_complex as build_projection_complex
from coarsequot.projcomplex.core import verify_projection_axioms as verify_projection_axioms
