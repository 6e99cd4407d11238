"""Spinning families, the quotient by the normal subgroup they generate, and triangle lifting."""

from coarsequot.spinning.core import NormalElement as NormalElement
from coarsequot.spinning.core import SpinningInstance as SpinningInstance
from coarsequot.spinning.core import bend as bend
from coarsequot.spinning.core import find_shortening_pair as find_shortening_pair
from coarsequot.spinning.core import line_instance as line_instance
from coarsequot.spinning.core import normal_element as normal_element
from coarsequot.spinning.core import spinning_instance as spinning_instance
from coarsequot.spinning.core import verify_spinning as verify_spinning
from coarsequot.spinning.lifting import TriangleLift as TriangleLift
from coarsequot.spinning.lifting import lift_triangle as lift_triangle
from coarsequot.spinning.quotient import MinimalPair as MinimalPair
from coarsequot.spinning.quotient import QuotientGraph as QuotientGraph
from coarsequot.spinning.quotient import build_quotient as build_quotient
from coarsequot.spinning.quotient import certify_minimal as certify_minimal
from coarsequot.spinning.quotient import injectivity_report as injectivity_report
from coarsequot.spinning.quotient import isoproj_check as isoproj_check
