"""Tests package for coarsequot."""
