"""Exception hierarchy.

Validation problems derive from ``ValueError`` and numerical failures from
``ArithmeticError`` so callers (and the CLI exit-code mapping) can tell them
apart without importing every class.
"""

from __future__ import annotations

__all__ = [
    "HyperlocError",
    "ValidationError",
    "DomainError",
    "InadmissibleError",
    "UnsupportedError",
    "PlanError",
    "GridError",
    "NumericalError",
    "EvaluationOverflow",
    "IllConditionedFit",
    "QuadratureError",
]


class HyperlocError(Exception):
    """Base class for all package errors."""


class ValidationError(HyperlocError, ValueError):
    """Input outside an operation's preconditions."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of a function."""


class InadmissibleError(ValidationError):
    """Quantum numbers outside the bound-state window of an operator."""


class UnsupportedError(ValidationError):
    """Combination of parameters that the library does not implement."""


class PlanError(ValidationError):
    """Localization plan violating one of its invariants."""


class GridError(ValidationError):
    """Grid unsuitable for the requested discretization."""


class NumericalError(HyperlocError, ArithmeticError):
    """A computation could not be carried out to the promised accuracy."""


class EvaluationOverflow(NumericalError, OverflowError):
    """Intermediate overflow while summing a hypergeometric series.

    Parameters
    ----------
    message : str
        Human readable description.
    term_index : int
        Index of the first series term that overflowed.
    """

    def __init__(self, message: str, term_index: int):
        super().__init__(f"{message} (term index {term_index})")
        self.term_index = term_index


class IllConditionedFit(NumericalError):
    """A least-squares coefficient fit has no usable data for a mode."""


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to reach its tolerance."""
