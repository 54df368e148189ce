"""Exception hierarchy for the fingen package."""


class FingenError(Exception):
    """Base class for all errors raised by fingen."""


class DomainError(FingenError, ValueError):
    """An argument lies outside the domain of an operation."""


class NonErgodic(FingenError):
    """The action is not transitive, so it is not ergodic under uniform measure."""


class NotGenerating(FingenError):
    """The input partition does not separate points under the group action."""


class ParseError(FingenError):
    """A system file could not be parsed."""


class Unreachable(DomainError):
    """The requested entropy cannot be realized on the allowed support."""


class CocycleInconsistent(FingenError):
    """Induced-action data does not define a group action."""


class MalformedLabels(FingenError):
    """A relabeling was not produced by this pipeline."""


class InvariantViolation(FingenError, AssertionError):
    """An internal invariant failed. This always indicates a bug."""


class ClauseViolation(InvariantViolation):
    def __init__(self, clause, detail, pair=None):
        self.clause = clause
        self.pair = pair
        msg = f"clause ({clause}) violated: {detail}"
        if pair is not None:
            msg += f" (witness pair {pair})"
        super().__init__(msg)


class TowerLeak(InvariantViolation):
    """Some overflow point was left without a relocation target."""
