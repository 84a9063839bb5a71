"""Exact-arithmetic toolkit for geometric crystals.

Subpackages by layer: :mod:`gcrystal.arith` (exact rationals and
constrained sampling), :mod:`gcrystal.expr` (expression IR, DSL, exact
identity testing), :mod:`gcrystal.crystal` (crystal models, axiom
checkers, products), :mod:`gcrystal.epsilon` (interval systems),
:mod:`gcrystal.models` (the built-in torus, fork-diagram and triangular
matrix models), :mod:`gcrystal.rmap` (the birational R map),
:mod:`gcrystal.ud` (tropicalization), :mod:`gcrystal.harness` (named
verification suites) and :mod:`gcrystal.cli`.
"""

from .arith import ExactScalar, SampleSpec, rat, sample_point
from .expr import RatExpr, evaluate, identical_on_domain, parse, pretty

__all__ = [
    "ExactScalar",
    "SampleSpec",
    "rat",
    "sample_point",
    "RatExpr",
    "evaluate",
    "identical_on_domain",
    "parse",
    "pretty",
]

__version__ = "0.1.0"
