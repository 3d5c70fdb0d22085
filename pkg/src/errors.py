#!/usr/bin/env python3
"""
Error hierarchy
Every failure raised by the engine derives from QuatGraphError. The command
line maps PreconditionError to exit code 2 and InternalError to exit code 3.
"""


class QuatGraphError(Exception):
    """Base class for all engine errors."""

    exit_code = 3


class PreconditionError(QuatGraphError):
    """An operation was called outside its documented domain."""

    exit_code = 2


class InternalError(QuatGraphError):
    """A guard tripped or a self-check failed; the result cannot be trusted."""

    exit_code = 3


# Preconditions

class RankError(PreconditionError):
    """Input rows do not span a full-rank lattice."""


class DefinitenessError(PreconditionError):
    """A quadratic form expected to be positive definite is not."""


class NotIntegralError(PreconditionError):
    """Generators do not lie in any order."""


class RamificationError(PreconditionError):
    """The prime is ramified (or unramified) where the opposite is required."""


class SplittingError(PreconditionError):
    """The residue ring O/pO is not a 2x2 matrix ring."""


class LevelError(PreconditionError):
    """An Eichler level is not odd, squarefree and coprime to the discriminant."""


class AlgebraMismatchError(PreconditionError):
    """Elements or lattices from different algebras were combined."""


class BoundPrecondition(PreconditionError):
    """A graph violates the hypotheses of a bound checker."""


class InfeasibleGraphError(PreconditionError):
    """Random graph parameters cannot be met under the valency cap."""


class ConfigurationError(PreconditionError):
    """An environment setting could not be parsed."""


# Internal failures

class SearchExhaustedError(InternalError):
    """A bounded search ran out of candidates."""


class MaximalizationError(InternalError):
    """A maximalization loop did not converge."""


class ClassLimitError(InternalError):
    """The classifying-graph search discovered too many classes."""


class MassMismatchError(InternalError):
    """The mass formula disagrees with the discovered classes."""


class ReconciliationError(InternalError):
    """Quotient edge counts computed from the two endpoints disagree."""
