"""Finite-difference and variational study of one- and two-particle bound
states in a bulged quantum waveguide."""

from .domain_grid import BC, WaveguideParams
from .eigensolve import EigensolverError, lowest_eigenpairs, richardson_extrapolate
from .reports import BoundReport, Direction

__all__ = ["BC", "WaveguideParams", "EigensolverError", "lowest_eigenpairs", "richardson_extrapolate",
           "BoundReport", "Direction"]
__version__ = "0.1.0"
