"""Ledger submodule: base and derived constants."""

from coarsequot.ledger.core import BaseConstants as BaseConstants
from coarsequot.ledger.core import DerivedConstants as DerivedConstants
from coarsequot.ledger.core import derive as derive
