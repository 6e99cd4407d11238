"""Coning submodule: cone-offs, de-electrification and cone-off checks."""

from coarsequot.coning.core import ConeOff as ConeOff
from coarsequot.coning.core import build_cone_off as build_cone_off
from coarsequot.coning.core import build_modified_cone_off as build_modified_cone_off
from coarsequot.coning.core import de_electrify as de_electrify
from coarsequot.coning.core import extended_projection as extended_projection
