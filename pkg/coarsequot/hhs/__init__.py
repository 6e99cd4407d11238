"""Hierarchy structures, their axioms, and the structure induced on a quotient."""

from coarsequot.hhs.axioms import DistanceFormulaFit as DistanceFormulaFit
from coarsequot.hhs.axioms import close_projections_check as close_projections_check
from coarsequot.hhs.axioms import distance_formula_fit as distance_formula_fit
from coarsequot.hhs.axioms import verify_hhs_axioms as verify_hhs_axioms
from coarsequot.hhs.core import TOP as TOP
from coarsequot.hhs.core import BuiltinKind as BuiltinKind
from coarsequot.hhs.core import Domain as Domain
from coarsequot.hhs.core import HHSStructure as HHSStructure
from coarsequot.hhs.core import Relation as Relation
from coarsequot.hhs.core import builtin_instance as builtin_instance
from coarsequot.hhs.core import read_structure as read_structure
from coarsequot.hhs.core import structure_from_dict as structure_from_dict
from coarsequot.hhs.core import top_ball as top_ball
from coarsequot.hhs.quotient import BoundsReport as BoundsReport
from coarsequot.hhs.quotient import QuotientHHS as QuotientHHS
from coarsequot.hhs.quotient import build_quotient_structure as build_quotient_structure
from coarsequot.hhs.quotient import check_quotient_bounds as check_quotient_bounds
from coarsequot.hhs.quotient import measure_aleph as measure_aleph
from coarsequot.hhs.quotient import minimal_lift as minimal_lift
from coarsequot.hhs.quotient import peripheral_audit as peripheral_audit
from coarsequot.hhs.quotient import unique_reps_check as unique_reps_check
