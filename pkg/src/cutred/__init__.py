"""Continuous cut-reduction notations for bounded arithmetic and witness search."""

__version__ = "0.1.0"
