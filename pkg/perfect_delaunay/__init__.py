"""Exact verification of a catalog of perfect Delaunay polytopes."""

__version__ = "1.0.0"
