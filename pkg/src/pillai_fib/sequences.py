"""Exact Fibonacci numbers and 2-adic facts about powers of three."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PrecisionExhausted
from .numerics import DEFAULT_PRECISION, PrecReal, const_alpha, const_sqrt5


def fib(n: int) -> int:
    """Exact n-th Fibonacci number with F(1) = F(2) = 1 (fast doubling)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"Fibonacci index must be a positive integer, got {n!r}")
    return _fib_pair(n)[0]


def _fib_pair(n: int) -> tuple[int, int]:
    # (F(n), F(n+1))
    if n == 0:
        return 0, 1
    a, b = _fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if n & 1:
        return d, c + d
    return c, d


def binet_real(n: int, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """Evaluate Binet's formula (alpha^n - (-alpha)^-n) / sqrt 5 at ``precision`` digits.

    Raises :class:`PrecisionExhausted` once the error radius reaches 1/2,
    i.e. when rounding could no longer recover ``fib(n)``.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"Fibonacci index must be a positive integer, got {n!r}")
    alpha = const_alpha(precision)
    tail = alpha ** (-n)
    if n % 2:
        tail = -tail
    value = (alpha**n - tail) / const_sqrt5(precision)
    if value.err >= 0.5:
        raise PrecisionExhausted(f"{precision} digits cannot resolve F({n}) to the nearest integer")
    return value


def nu2(m: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if m == 0:
        raise ValueError("valuation of zero is undefined")
    m = abs(m)
    return (m & -m).bit_length() - 1


@dataclass(frozen=True)
class FactoredPowerDiff:
    """3**t - 1 == 2**valuation * cofactor with cofactor odd."""

    t: int
    valuation: int
    cofactor: int


@dataclass(frozen=True)
class FactoredPowerSum:
    """3**t + 1 == 2**valuation * cofactor with cofactor odd."""

    t: int
    valuation: int
    cofactor: int


def nu2_pow3_minus1(t: int) -> FactoredPowerDiff:
    """Split 3**t - 1 into its power of two and odd cofactor.

    The valuation is 1 for odd t and 2 + nu2(t) for even t; the cofactor
    is then obtained by exact division and checked to be odd.
    """
    if not isinstance(t, int) or t < 1:
        raise ValueError(f"exponent must be a positive integer, got {t!r}")
    v = 1 if t % 2 else 2 + nu2(t)
    total = 3**t - 1
    cofactor = total >> v
    if cofactor << v != total or not cofactor & 1:
        raise ArithmeticError(f"valuation rule failed for t={t}")
    return FactoredPowerDiff(t, v, cofactor)


def nu2_pow3_plus1(t: int) -> FactoredPowerSum:
    """Split 3**t + 1; the valuation is 2 for odd t and 1 for even t."""
    if not isinstance(t, int) or t < 1:
        raise ValueError(f"exponent must be a positive integer, got {t!r}")
    v = 2 if t % 2 else 1
    total = 3**t + 1
    cofactor = total >> v
    if cofactor << v != total or not cofactor & 1:
        raise ArithmeticError(f"valuation rule failed for t={t}")
    return FactoredPowerSum(t, v, cofactor)


def ord3_mod_2l(l: int) -> int:
    """Multiplicative order of 3 modulo 2**l."""
    if not isinstance(l, int) or l < 1:
        raise ValueError(f"modulus exponent must be >= 1, got {l!r}")
    if l == 1:
        return 1
    if l == 2:
        return 2
    return 1 << (l - 2)


def min_x_for_y(y: int) -> int:
    """Least x with 2**y | 3**x - 1; every such x is a multiple of it."""
    return ord3_mod_2l(y)


def _is_square(m: int) -> bool:
    if m < 0:
        return False
    r = math.isqrt(m)
    return r * r == m


def fib_indices(m: int) -> tuple[int, ...]:
    """All n >= 1 with fib(n) == m (two indices for m == 1, else at most one)."""
    if m < 1:
        return ()
    if m == 1:
        return (1, 2)
    s = 5 * m * m
    if not (_is_square(s + 4) or _is_square(s - 4)):
        return ()
    a, b, n = 1, 2, 3
    while b < m:
        a, b, n = b, a + b, n + 1
    return (n,) if b == m else ()


def is_fibonacci(m: int) -> tuple[bool, int | None]:
    """Membership test via 5m^2 +- 4 being a perfect square; returns the smallest index."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"membership test needs a positive integer, got {m!r}")
    idx = fib_indices(m)
    return (True, idx[0]) if idx else (False, None)
