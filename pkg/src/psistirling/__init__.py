"""Exact psi-extended Stirling and Bell numbers, umbral operators, and an identity ledger."""

from .bell import ApproxValue, BellSequence, ConvergenceError, dobinski_sum, epsilon_weight
from .exactnum import Poly, Rational, TruncatedSeries, format_rational, newton_coefficients, parse_rational
from .harness import export_ledger, run_suite
from .psi import DegenerateSequenceError, PsiSequence
from .stirling import Triangle
from .verdict import Counterexample, IdentityVerdict

__all__ = [
    "ApproxValue", "BellSequence", "ConvergenceError", "Counterexample", "DegenerateSequenceError",
    "IdentityVerdict", "Poly", "PsiSequence", "Rational", "Triangle", "TruncatedSeries",
    "dobinski_sum", "epsilon_weight", "export_ledger", "format_rational", "newton_coefficients",
    "parse_rational", "run_suite",
]
