"""Coarsequot - A desk-scale workbench for coarse geometry on finite graphs.

This package measures hyperbolicity, quasiconvexity and projections on finite metric graphs,
builds cone-offs and projection complexes, evaluates the constants ledger, and runs
spinning-family quotient experiments on Cayley balls of free and small-cancellation groups.
"""

from coarsequot.cli import main as main

__version__ = "0.1.0"
__author__ = "elvee"
__description__ = (
    "A command-line workbench for cone-offs, projection complexes and spinning-family quotients"
)
__license__ = "MIT"
