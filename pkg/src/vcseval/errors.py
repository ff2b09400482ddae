"""Error taxonomy and process exit codes.

Every failure mode raised by this package derives from VcsEvalError so
callers can catch one base class. The CLI maps error classes onto the
documented exit codes: 0 ok, 1 check/compute failure, 2 input error,
3 undefined statistic.
"""

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_UNDEFINED = 3


class VcsEvalError(Exception):
    """Base class for all package errors."""


class MalformedRecord(VcsEvalError):
    """A record failed validation; carries the 1-based line number."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class EmptyInput(VcsEvalError):
    """Zero records in the input."""


class UnsortedInput(VcsEvalError):
    """Timestamps decrease and sorting was not requested."""


class DegenerateSplit(VcsEvalError):
    """A chronological split would leave some part empty."""


class LengthMismatch(VcsEvalError):
    """Paired label lists have different lengths."""


class NoPositives(VcsEvalError):
    """Average precision needs at least one positive label."""


class OneClassOnly(VcsEvalError):
    """AU-ROC needs both a positive and a negative label."""


class InsufficientSet(VcsEvalError):
    """A distance needs at least one other entry in the set."""


class EmptySet(VcsEvalError):
    """Reference distances need a non-empty entry set."""


class DegenerateDistances(VcsEvalError):
    """d_r + d_disg = 0, the T statistic is undefined."""


class TooFewDisagreements(VcsEvalError):
    """VCS is undefined for fewer than 2 disagreement events."""


class AllZeroWeights(VcsEvalError):
    """The weighted soft statistic needs positive total weight."""


class SpecViolation(VcsEvalError):
    """A generator spec breaks its invariants."""


class NonFiniteLoss(VcsEvalError):
    """Training produced a non-finite loss; carries the epoch index."""

    def __init__(self, epoch, message="non-finite loss"):
        self.epoch = epoch
        super().__init__(f"epoch {epoch}: {message}")
