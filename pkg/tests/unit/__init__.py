"""Unit tests for coarsequot."""
