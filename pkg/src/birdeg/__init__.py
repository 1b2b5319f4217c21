"""Degree growth and dynamical degrees of birational maps f = L o J of projective space."""

__version__ = "0.1.0"
