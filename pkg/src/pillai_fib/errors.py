"""Exception types shared across the pipeline stages."""


class PrecisionExhausted(ArithmeticError):
    """The working precision cannot resolve the requested quantity."""


class UndecidableAtPrecision(PrecisionExhausted):
    """Two values agree within their error bounds; raise the precision."""


class ExpansionExhausted(LookupError):
    """No trusted continued-fraction term satisfies the request."""


class UntrustedTerm(IndexError):
    """Requested a convergent beyond the certified part of an expansion."""


class InconsistencyError(RuntimeError):
    """A stage produced output that contradicts an earlier stage."""


class NonConvergence(RuntimeError):
    """A fixed-point iteration did not settle within its iteration budget."""
