"""Følner sets of the monoid J_Z, a Toeplitz CAR covariance and averaged quasi-free states."""

from .errors import BudgetExceeded, JzlabError, ValidationError
from .monoid import JElement, compose, apply, parse_normal_form, parse_word, psi, tau_power, theta

__all__ = [
    "BudgetExceeded",
    "JElement",
    "JzlabError",
    "ValidationError",
    "apply",
    "compose",
    "parse_normal_form",
    "parse_word",
    "psi",
    "tau_power",
    "theta",
]
__version__ = "0.1.0"
