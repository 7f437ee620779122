"""Exception types shared across the package."""


class WeightSeqError(Exception):
    """Base class for all weightseq errors."""


class InvalidSequenceError(WeightSeqError, ValueError):
    """Construction input rejected (bad parameter, non-finite data, ...)."""


class PreconditionError(WeightSeqError, ValueError):
    """An operation's structural precondition fails (not log-convex, ...)."""


class CensoredWindowError(WeightSeqError, RuntimeError):
    """A count/evaluation would need sequence entries beyond the stored window."""

    def __init__(self, msg, required_P=None):
        super().__init__(msg)
        self.required_P = required_P


class InconclusiveTailError(WeightSeqError, RuntimeError):
    """A tail supremum cannot be resolved from window data."""


class UntrustedEvaluationError(WeightSeqError, RuntimeError):
    """An evaluation's argmax hit the truncation boundary; result not trusted."""

    def __init__(self, msg, required_P=None):
        super().__init__(msg)
        self.required_P = required_P
