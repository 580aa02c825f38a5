"""Exact tropical plane curve toolkit: curves, weights, patchworking checks and counts."""

__version__ = "0.1.0"
