"""Spectral lower bounds for graphs with prescribed local structure.

Degree matrices, universal cover trees, equitable realizations, subuniversal
projections, Ramanujan-type certification and Paschke's formula.
"""
from .degmat import DegreeMatrix
from .graphcore import Graph

__all__ = ["DegreeMatrix", "Graph"]
__version__ = "0.1.0"
