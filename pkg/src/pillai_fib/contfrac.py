"""Continued-fraction expansion with certified partial quotients.

The source value is turned into an mpmath interval ``[v - err, v + err]``
and pushed through the Gauss map with outward rounding.  A partial quotient
is accepted only while the whole interval has a single integer part, so a
quotient past the reach of the working precision is never emitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .errors import ExpansionExhausted, PrecisionExhausted, UntrustedTerm
from .numerics import PrecReal

_INTERVAL_GUARD = 10


@lru_cache(maxsize=None)
def _iv_context(precision: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.dps = precision
    return ctx


@dataclass(frozen=True)
class ContinuedFraction:
    source: PrecReal
    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    trusted_terms: int
    terminated: bool = False  # True when the source is rational and fully expanded

    def __len__(self) -> int:
        return self.trusted_terms


def _convergents(quotients) -> tuple[tuple[int, int], ...]:
    out = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return tuple(out)


def _floor(raw) -> int:
    return int(libmp.to_int(libmp.mpf_floor(raw)))


def _expand_exact(fr: Fraction, max_terms: int) -> tuple[list[int], bool]:
    quotients = []
    while len(quotients) < max_terms:
        a = fr.numerator // fr.denominator
        quotients.append(a)
        rest = fr - a
        if rest == 0:
            return quotients, True
        fr = 1 / rest
    return quotients, False


def _expand_interval(x: PrecReal, max_terms: int) -> list[int]:
    iv = _iv_context(x.precision + _INTERVAL_GUARD)
    z = iv.mpf([x.lo, x.hi])
    quotients = []
    while len(quotients) < max_terms:
        lo, hi = z._mpi_
        a = _floor(lo)
        if a != _floor(hi):
            break
        quotients.append(a)
        frac = z - a
        if libmp.mpf_le(frac._mpi_[0], libmp.fzero):
            break
        z = 1 / frac
    return quotients


def cf_expand(x: PrecReal, max_terms: int = 200) -> ContinuedFraction:
    """Expand ``x > 0`` into at most ``max_terms`` certified partial quotients."""
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    terminated = False
    if x.exact is not None:
        if x.exact <= 0:
            raise ValueError("continued-fraction source must be positive")
        quotients, terminated = _expand_exact(x.exact, max_terms)
    else:
        if x.lo <= 0:
            raise ValueError("continued-fraction source must be certified positive")
        quotients = _expand_interval(x, max_terms)
    if not quotients:
        raise PrecisionExhausted("precision exhausted before the first partial quotient")
    return ContinuedFraction(x, tuple(quotients), _convergents(quotients), len(quotients), terminated)


def convergent(cf: ContinuedFraction, k: int) -> tuple[int, int]:
    """Exact k-th convergent (p_k, q_k), indexed from p_0/q_0 = a_0/1."""
    if not 0 <= k < cf.trusted_terms:
        raise UntrustedTerm(f"convergent {k} outside trusted range [0, {cf.trusted_terms})")
    return cf.convergents[k]


def first_q_above(cf: ContinuedFraction, threshold: int) -> tuple[int, int, int]:
    """Smallest trusted k with q_k > threshold, as (k, p_k, q_k)."""
    for k, (p, q) in enumerate(cf.convergents[: cf.trusted_terms]):
        if q > threshold:
            return k, p, q
    raise ExpansionExhausted(
        f"no trusted convergent denominator exceeds {threshold} "
        f"({cf.trusted_terms} terms available)")
