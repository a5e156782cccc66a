"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``DomainError`` -> 1, ``NumericError`` -> 2.
"""


class FracOUError(Exception):
    """Base class for all package errors."""


class DomainError(FracOUError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateInputError(DomainError):
    """Input is well-formed but carries no information (e.g. an all-zero path)."""


class NumericError(FracOUError, ArithmeticError):
    """A numerical procedure (factorization, embedding, quadrature) failed."""
