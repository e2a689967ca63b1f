"""High-precision reals with a tracked error radius and certified comparison.

A :class:`PrecReal` is an mpmath value computed at ``precision`` decimal
digits together with an absolute error radius ``err``.  Every value also
carries a *recipe*: a function that rebuilds the same quantity at any other
precision.  Certified comparisons use the recipe to evaluate both sides at
``P`` and ``P + 20`` digits and only answer when the two evaluations agree
and the gap is larger than the tracked error.

Error budget: each elementary operation adds at most ``|result| * 10**-P``
of rounding on top of the first-order propagated error of its operands.
Composite expressions used by this package (a dozen operations or fewer)
therefore stay within ``10**(-P + GUARD_DIGITS)`` relative error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

from mpmath import libmp
from mpmath.ctx_mp import MPContext

from .errors import PrecisionExhausted, UndecidableAtPrecision

MIN_PRECISION = 30
DEFAULT_PRECISION = 60
GUARD_DIGITS = 5
CERTIFY_EXTRA_DIGITS = 20

Number = Union["PrecReal", int, Fraction, str]


@lru_cache(maxsize=None)
def context(precision: int) -> MPContext:
    """Return a private mpmath context fixed at ``precision`` digits.

    Contexts are never mutated after creation, so sharing them between
    threads is safe.
    """
    ctx = MPContext()
    ctx.dps = precision
    return ctx


def _check_precision(precision: int) -> int:
    if not isinstance(precision, int) or precision < MIN_PRECISION:
        raise ValueError(f"precision must be an integer >= {MIN_PRECISION}, got {precision!r}")
    return precision


def _mpf_to_fraction(v) -> Fraction:
    sign, man, exp, _ = v._mpf_
    if not man:
        return Fraction(0)
    f = Fraction(man) * (Fraction(2) ** exp)
    return -f if sign else f


def _ulp(ctx: MPContext, v):
    return abs(v) * ctx.mpf(10) ** (-ctx.dps)


@dataclass(frozen=True, eq=False)
class PrecReal:
    """A real number carried to ``precision`` significant decimal digits."""

    value: object
    precision: int
    err: object
    exact: Fraction | None = None
    recipe: Callable[[int], "PrecReal"] | None = field(default=None, repr=False)

    # -- precision management -------------------------------------------------

    def at(self, precision: int) -> "PrecReal":
        """Recompute this quantity at another precision."""
        if precision == self.precision:
            return self
        if self.recipe is None:
            raise PrecisionExhausted("value has no recipe and cannot be re-evaluated")
        return self.recipe(_check_precision(precision))

    @property
    def ctx(self) -> MPContext:
        return context(self.precision)

    @property
    def lo(self):
        return self.value - self.err

    @property
    def hi(self):
        return self.value + self.err

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"PrecReal({self.to_string(20)}, P={self.precision})"

    def to_string(self, digits: int | None = None) -> str:
        """Decimal string with ``digits`` significant digits (default P - guard)."""
        if self.exact is not None and self.exact.denominator == 1:
            return str(self.exact.numerator)
        n = digits if digits is not None else self.precision - GUARD_DIGITS
        return libmp.to_str(self.value._mpf_, n)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other: Number) -> "PrecReal":
        if isinstance(other, PrecReal):
            return other
        return make_real(other, self.precision)

    def __add__(self, other: Number) -> "PrecReal":
        return _binary(self, self._coerce(other), "add")

    def __radd__(self, other: Number) -> "PrecReal":
        return _binary(self._coerce(other), self, "add")

    def __sub__(self, other: Number) -> "PrecReal":
        return _binary(self, self._coerce(other), "sub")

    def __rsub__(self, other: Number) -> "PrecReal":
        return _binary(self._coerce(other), self, "sub")

    def __mul__(self, other: Number) -> "PrecReal":
        return _binary(self, self._coerce(other), "mul")

    def __rmul__(self, other: Number) -> "PrecReal":
        return _binary(self._coerce(other), self, "mul")

    def __truediv__(self, other: Number) -> "PrecReal":
        return _binary(self, self._coerce(other), "div")

    def __rtruediv__(self, other: Number) -> "PrecReal":
        return _binary(self._coerce(other), self, "div")

    def __neg__(self) -> "PrecReal":
        return _binary(make_real(0, self.precision), self, "sub")

    def __abs__(self) -> "PrecReal":
        if self.exact is not None:
            return make_real(abs(self.exact), self.precision)
        if self.value < 0:
            return -self
        return self

    def __pow__(self, k: int) -> "PrecReal":
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        P = self.precision
        if self.exact is not None:
            if self.exact == 0 and k < 0:
                raise ZeroDivisionError("zero to a negative power")
            return make_real(self.exact**k, P)
        ctx = self.ctx
        if abs(self.value) <= self.err:
            raise PrecisionExhausted("base of power not separated from zero")
        v = self.value**k
        rel = self.err / (abs(self.value) - self.err)
        e = abs(v) * ((1 + rel) ** abs(k) - 1) + _ulp(ctx, v)
        return PrecReal(v, P, e, None, lambda Q: self.at(Q) ** k)

    # -- elementary functions --------------------------------------------------

    def log(self) -> "PrecReal":
        P = self.precision
        if self.exact == 1:
            return make_real(0, P)
        ctx = self.ctx
        if self.lo <= 0:
            raise PrecisionExhausted("logarithm argument not certified positive")
        v = ctx.log(self.value)
        e = self.err / (self.value - self.err) + _ulp(ctx, v)
        return PrecReal(v, P, e, None, lambda Q: self.at(Q).log())

    def sqrt(self) -> "PrecReal":
        P = self.precision
        ctx = self.ctx
        if self.lo <= 0:
            if self.exact == 0:
                return make_real(0, P)
            raise PrecisionExhausted("square-root argument not certified positive")
        v = ctx.sqrt(self.value)
        e = self.err / ctx.sqrt(self.value - self.err) + _ulp(ctx, v)
        return PrecReal(v, P, e, None, lambda Q: self.at(Q).sqrt())

    def exp(self) -> "PrecReal":
        P = self.precision
        ctx = self.ctx
        v = ctx.exp(self.value)
        e = abs(v) * ctx.expm1(self.err) + _ulp(ctx, v)
        return PrecReal(v, P, e, None, lambda Q: self.at(Q).exp())


def _binary(a: PrecReal, b: PrecReal, op: str) -> PrecReal:
    P = max(a.precision, b.precision)
    if a.exact is not None and b.exact is not None:
        if op == "add":
            return make_real(a.exact + b.exact, P)
        if op == "sub":
            return make_real(a.exact - b.exact, P)
        if op == "mul":
            return make_real(a.exact * b.exact, P)
        if b.exact == 0:
            raise ZeroDivisionError("division by exact zero")
        return make_real(a.exact / b.exact, P)

    ctx = context(P)
    x, y = ctx.mpf(a.value), ctx.mpf(b.value)
    ea, eb = ctx.mpf(a.err), ctx.mpf(b.err)
    if op == "add":
        v = x + y
        e = ea + eb
    elif op == "sub":
        v = x - y
        e = ea + eb
    elif op == "mul":
        v = x * y
        e = abs(x) * eb + abs(y) * ea + ea * eb
    elif op == "div":
        if abs(y) <= eb:
            raise PrecisionExhausted("divisor not separated from zero")
        v = x / y
        e = (abs(x) * eb + abs(y) * ea) / (abs(y) * (abs(y) - eb))
    else:  # pragma: no cover
        raise ValueError(op)
    e += _ulp(ctx, v)
    return PrecReal(v, P, e, None, lambda Q: _binary(a.at(Q), b.at(Q), op))


def _parse_literal(literal) -> Fraction:
    if isinstance(literal, bool):
        raise TypeError("booleans are not numeric literals")
    if isinstance(literal, (int, Fraction)):
        return Fraction(literal)
    if isinstance(literal, tuple) and len(literal) == 2:
        num, den = literal
        if not (isinstance(num, int) and isinstance(den, int)) or den == 0:
            raise ValueError(f"malformed ratio {literal!r}")
        return Fraction(num, den)
    if isinstance(literal, str):
        try:
            return Fraction(literal.strip().replace("_", ""))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed decimal literal {literal!r}") from exc
    raise TypeError(f"unsupported literal type {type(literal).__name__}; use a decimal string")


def make_real(literal, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """Build a :class:`PrecReal` from an exact decimal string, int, Fraction or ``(p, q)``.

    Binary floats are rejected: they would smuggle a hidden rounding into
    values that are supposed to be exact.
    """
    P = _check_precision(precision)
    fr = _parse_literal(literal)
    ctx = context(P)
    v = ctx.mpf(fr.numerator) / fr.denominator
    e = ctx.zero if _mpf_to_fraction(v) == fr else _ulp(ctx, v)
    return PrecReal(v, P, e, fr, lambda Q: make_real(fr, Q))


# -- constant catalog ------------------------------------------------------------


def _from_ctx(P: int, compute: Callable[[MPContext], object], ulps: int, rebuild) -> PrecReal:
    ctx = context(P)
    v = compute(ctx)
    return PrecReal(v, P, ulps * _ulp(ctx, v), None, rebuild)


@lru_cache(maxsize=None)
def const_sqrt5(precision: int = DEFAULT_PRECISION) -> PrecReal:
    P = _check_precision(precision)
    return _from_ctx(P, lambda c: c.sqrt(5), 1, const_sqrt5)


@lru_cache(maxsize=None)
def const_alpha(precision: int = DEFAULT_PRECISION) -> PrecReal:
    """The golden ratio (1 + sqrt 5) / 2."""
    P = _check_precision(precision)
    return _from_ctx(P, lambda c: (1 + c.sqrt(5)) / 2, 2, const_alpha)


@lru_cache(maxsize=None)
def _const_log(base, precision: int) -> PrecReal:
    if base == "alpha":
        return _from_ctx(precision, lambda c: c.log((1 + c.sqrt(5)) / 2), 3,
                         lambda Q: const_log("alpha", Q))
    return _from_ctx(precision, lambda c: c.log(base), 1, lambda Q: const_log(base, Q))


def const_log(base, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """Natural logarithm of 2, 3, 5 or the golden ratio (``"alpha"``)."""
    P = _check_precision(precision)
    if base in ("alpha", "α"):
        return _const_log("alpha", P)
    if base in (2, 3, 5):
        return _const_log(int(base), P)
    raise ValueError(f"no catalog logarithm for base {base!r}")


# -- nearest-integer distance and certified comparison ---------------------------------


def dist_nearest_int(x: PrecReal) -> PrecReal:
    """Distance from ``x`` to the nearest integer, in [0, 1/2]."""
    P = x.precision
    if x.exact is not None:
        fr = x.exact
        frac = fr - math.floor(fr)
        return make_real(min(frac, 1 - frac), P)
    ctx = x.ctx
    if x.err >= ctx.mpf(1) / 4:
        raise PrecisionExhausted("integer part consumes the available digits")
    m = ctx.nint(x.value)
    d = abs(x.value - m)
    if ctx.mpf(1) / 2 - d <= x.err:
        raise PrecisionExhausted("value is within its error bound of a half-integer")
    e = x.err + _ulp(ctx, d)
    return PrecReal(d, P, e, None, lambda Q: dist_nearest_int(x.at(Q)))


@dataclass(frozen=True)
class CertifiedBool:
    verdict: bool
    margin: PrecReal
    confirmed_at: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.verdict


def _as_real(x: Number, precision: int) -> PrecReal:
    return x if isinstance(x, PrecReal) else make_real(x, precision)


def certified_less(a: Number, b: Number) -> CertifiedBool:
    """Decide ``a < b`` at P and P + 20 digits.

    Raises :class:`UndecidableAtPrecision` when either evaluation cannot
    separate the two values or the evaluations disagree.
    """
    P = max(x.precision for x in (a, b) if isinstance(x, PrecReal)) if any(
        isinstance(x, PrecReal) for x in (a, b)) else DEFAULT_PRECISION
    a_, b_ = _as_real(a, P), _as_real(b, P)
    gaps = []
    for Q in (P, P + CERTIFY_EXTRA_DIGITS):
        gap = b_.at(Q) - a_.at(Q)
        if abs(gap.value) <= gap.err:
            raise UndecidableAtPrecision(
                f"difference {gap.to_string(10)} not resolved at {Q} digits")
        gaps.append(gap)
    if (gaps[0].value > 0) != (gaps[1].value > 0):
        raise UndecidableAtPrecision("evaluations at two precisions disagree")
    return CertifiedBool(bool(gaps[0].value > 0), abs(gaps[0]), (P, P + CERTIFY_EXTRA_DIGITS))


def certified_max(*values: PrecReal) -> PrecReal:
    """Largest of ``values``; ties within error resolve to the larger upper end."""
    best = values[0]
    for v in values[1:]:
        try:
            if certified_less(best, v):
                best = v
        except UndecidableAtPrecision:
            if v.hi > best.hi:
                best = v
    return best


def floor_upper(x: PrecReal) -> int:
    """``floor`` of the upper end of ``x``: an integer that is certainly >= floor(x)."""
    if x.exact is not None:
        return math.floor(x.exact)
    return int(x.ctx.floor(x.hi))


def ceil_upper(x: PrecReal) -> int:
    if x.exact is not None:
        return math.ceil(x.exact)
    return int(x.ctx.ceil(x.hi))
