"""Pseudo-inverse MINRES solvers (C++ core)."""

from ._core import SolverError, deblur, pinv, psolve, random_matrix, solve

__all__ = ["SolverError", "deblur", "pinv", "psolve", "random_matrix", "solve"]
