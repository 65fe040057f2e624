"""Exception hierarchy shared by all specbound modules."""

from __future__ import annotations


class SpecboundError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class DomainError(SpecboundError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 2


class DeltaNotEvaluable(SpecboundError):
    """A Dirac-delta component was passed to a pointwise or quadrature path."""

    exit_code = 2


class ConfigError(SpecboundError):
    exit_code = 2


class ToleranceNotMet(SpecboundError):
    """The error estimate could not be driven below the requested tolerance."""

    exit_code = 3


class SpecialFunctionFailure(ToleranceNotMet):
    pass


class NoTailCertificate(ToleranceNotMet):
    """No rigorous bound is available for an integral beyond the horizon."""


class TailNotCertifiable(ToleranceNotMet):
    pass


class OverflowGuard(SpecboundError):
    exit_code = 3


class BudgetExceeded(SpecboundError):
    """An evaluation or search budget was exhausted."""

    exit_code = 4


class SearchBudgetExceeded(BudgetExceeded):
    pass
