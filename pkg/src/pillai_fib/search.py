"""Exact search for 3^x - F_n 2^y = 1 and the small-y special cases."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import InconsistencyError
from .sequences import fib, fib_indices, min_x_for_y, nu2, nu2_pow3_minus1

SIEVE_PRIMES = (2147483647, 2147483629)


class SolutionTriple(NamedTuple):
    x: int
    y: int
    n: int


def verify_triple(x: int, y: int, n: int) -> bool:
    """Exact check of 3^x - F_n 2^y == 1."""
    if min(x, y, n) < 1:
        raise ValueError("x, y and n must be positive")
    return 3**x - fib(n) * 2**y == 1


@dataclass(frozen=True)
class SearchBox:
    """y_min <= y <= y_max, n_min <= n <= n_max, 1 <= x < x_max."""

    y_min: int
    y_max: int
    n_min: int
    n_max: int
    x_max: int

    def __post_init__(self):
        if min(self.y_min, self.n_min, self.x_max) < 1:
            raise ValueError("box bounds must be positive")
        if self.y_min > self.y_max or self.n_min > self.n_max:
            raise ValueError("empty box")

    @classmethod
    def from_n_bound(cls, y_min: int, y_max: int, n_min: int, n_max: int,
                     factor: Fraction = Fraction(11, 10)) -> "SearchBox":
        """Box whose x cap is ceil(1.1 n_max), following x < 1.1 n."""
        return cls(y_min, y_max, n_min, n_max, math.ceil(factor * n_max))


def _sort_key(t: SolutionTriple):
    return (t.y, t.x, t.n)


def search_box(box: SearchBox) -> list[SolutionTriple]:
    """All solutions in ``box``.

    For each y only multiples of ord(3 mod 2^y) are tried as x, since 2^y
    must divide 3^x - 1; the quotient is then tested for Fibonacci
    membership.
    """
    found = []
    for y in range(box.y_min, box.y_max + 1):
        step = min_x_for_y(y)
        for x in range(step, box.x_max, step):
            total = 3**x - 1
            m = total >> y
            if m << y != total:
                continue
            for n in fib_indices(m):
                if box.n_min <= n <= box.n_max:
                    found.append(SolutionTriple(x, y, n))
    return sorted(found, key=_sort_key)


def _residues(values, mods) -> np.ndarray:
    return np.array([[v % m for v in values] for m in mods], dtype=np.int64)


def sieve_box(box: SearchBox) -> list[SolutionTriple]:
    """Full (x, y, n) enumeration without divisibility pruning.

    A two-prime residue sieve flags candidates and each flag is confirmed
    with exact integers.  Independent of :func:`search_box`.
    """
    xs = range(1, box.x_max)
    ys = range(box.y_min, box.y_max + 1)
    ns = range(box.n_min, box.n_max + 1)
    mods = np.array(SIEVE_PRIMES, dtype=np.int64)
    p3 = _residues([pow(3, x) for x in xs], SIEVE_PRIMES)
    p2 = _residues([pow(2, y) for y in ys], SIEVE_PRIMES)
    pf = _residues([fib(n) for n in ns], SIEVE_PRIMES)
    hits = _kernels.residue_hits(p3, p2, pf, mods)
    found = [SolutionTriple(xs[i], ys[j], ns[k]) for i, j, k in hits.tolist()]
    return sorted((t for t in found if verify_triple(*t)), key=_sort_key)


SPECIAL_CASES = ("1.3", "1.4", "1.5", "herschfeld")


def scan_special_case(case: str, x_max: int = 120, n_max: int = 300) -> list[tuple[int, int]]:
    """Finite-window scan of a small-y family.

    ``"1.3"``: F_n = (3^x - 1)/2 -> pairs (x, n), x <= x_max.
    ``"1.4"``: F_n = (9^k - 1)/4 -> pairs (k, n), 2k <= x_max.
    ``"1.5"``: F_n = (9^k - 1)/8 -> pairs (k, n), 2k <= x_max.
    ``"herschfeld"``: 3^x - 2^y = 1 -> pairs (x, y), x <= x_max.
    """
    if x_max < 1 or n_max < 1:
        raise ValueError("scan window must be positive")
    out = []
    if case == "herschfeld":
        for x in range(1, x_max + 1):
            d = 3**x - 1
            if d & (d - 1) == 0:
                out.append((x, d.bit_length() - 1))
        return out
    if case == "1.3":
        exponents, divisor = range(1, x_max + 1), 2
    elif case in ("1.4", "1.5"):
        exponents, divisor = range(1, x_max // 2 + 1), 4 if case == "1.4" else 8
    else:
        raise ValueError(f"unknown special case {case!r}; expected one of {SPECIAL_CASES}")
    for e in exponents:
        num = 3**e - 1 if case == "1.3" else 9**e - 1
        if num % divisor:
            continue
        out.extend((e, n) for n in fib_indices(num // divisor) if n <= n_max)
    return sorted(out)


@dataclass(frozen=True)
class OddExponentReport:
    """nu2(3^(2k-1) - 1) for k = 1..k_max; all equal 1, so 4 never divides."""

    k_max: int
    valuations: tuple[int, ...]
    exact_agreement: bool

    @property
    def branch_empty(self) -> bool:
        return self.exact_agreement and all(v == 1 for v in self.valuations)


def rule_out_odd_exponent_cases(k_max: int = 64) -> OddExponentReport:
    """Show y in {2, 3} with odd x is impossible: 3^odd - 1 has exactly one factor 2."""
    vals, agree = [], True
    for k in range(1, k_max + 1):
        t = 2 * k - 1
        v = nu2_pow3_minus1(t).valuation
        agree &= v == nu2(3**t - 1)
        vals.append(v)
    return OddExponentReport(k_max, tuple(vals), agree)


def assemble_theorem(search_results, special_case_results) -> list[SolutionTriple]:
    """Merge the y >= 4 box results with the y <= 3 families into (x, y, n) triples.

    ``special_case_results`` maps case names from :data:`SPECIAL_CASES` to the
    pairs returned by :func:`scan_special_case`.  Herschfeld pairs stand for
    F_n = 1, i.e. n in {1, 2}.
    """
    triples = set(SolutionTriple(*t) for t in search_results)
    for case, pairs in special_case_results.items():
        for a, b in pairs:
            if case == "1.3":
                triples.add(SolutionTriple(a, 1, b))
            elif case == "1.4":
                triples.add(SolutionTriple(2 * a, 2, b))
            elif case == "1.5":
                triples.add(SolutionTriple(2 * a, 3, b))
            elif case == "herschfeld":
                triples.update(SolutionTriple(a, b, n) for n in (1, 2))
            else:
                raise ValueError(f"unknown special case {case!r}")
    for t in triples:
        if not verify_triple(*t):
            raise InconsistencyError(f"assembled triple {t} does not solve the equation")
    return sorted(triples)
