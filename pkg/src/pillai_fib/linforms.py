"""Logarithmic heights, the Matveev lower-bound constant and the n-bound solver."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import NonConvergence
from .numerics import (
    DEFAULT_PRECISION,
    PrecReal,
    ceil_upper,
    certified_less,
    certified_max,
    const_alpha,
    const_log,
    const_sqrt5,
    make_real,
)

LOWER_A = "0.16"
MATVEEV_FACTOR = "1.4"
# The published chain absorbs the log(sqrt 5) / log(alpha) term by replacing 1.4 with 1.5.
ABSORBED_FACTOR = "1.5"
COEFF_BOUND_FACTOR = Fraction(11, 10)
MAX_ITERATIONS = 200


class Tag(enum.Enum):
    THREE = "3"
    SQRT5 = "sqrt5"
    ALPHA = "alpha"
    TWO = "2"


@dataclass(frozen=True)
class AlgebraicConstant:
    """A positive real algebraic number from the fixed catalog.

    ``min_poly`` lists the integer coefficients of the minimal polynomial,
    leading coefficient first.
    """

    tag: Tag
    min_poly: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def value(self, precision: int = DEFAULT_PRECISION) -> PrecReal:
        if self.tag is Tag.THREE:
            return make_real(3, precision)
        if self.tag is Tag.TWO:
            return make_real(2, precision)
        if self.tag is Tag.SQRT5:
            return const_sqrt5(precision)
        return const_alpha(precision)

    def log_value(self, precision: int = DEFAULT_PRECISION) -> PrecReal:
        if self.tag is Tag.THREE:
            return const_log(3, precision)
        if self.tag is Tag.TWO:
            return const_log(2, precision)
        if self.tag is Tag.SQRT5:
            return const_log(5, precision) / 2
        return const_log("alpha", precision)

    def conjugates(self, precision: int = DEFAULT_PRECISION) -> list[PrecReal]:
        if self.degree == 1:
            a0, a1 = self.min_poly
            return [make_real(Fraction(-a1, a0), precision)]
        a, b, c = self.min_poly
        root = make_real(b * b - 4 * a * c, precision).sqrt()
        return [(root - b) / (2 * a), (-root - b) / (2 * a)]


CATALOG = {
    Tag.THREE: AlgebraicConstant(Tag.THREE, (1, -3)),
    Tag.SQRT5: AlgebraicConstant(Tag.SQRT5, (1, 0, -5)),
    Tag.ALPHA: AlgebraicConstant(Tag.ALPHA, (1, -1, -1)),
    Tag.TWO: AlgebraicConstant(Tag.TWO, (1, -2)),
}
CONSTANT_ORDER = (Tag.THREE, Tag.SQRT5, Tag.ALPHA, Tag.TWO)


def height(const: AlgebraicConstant | Tag, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """Absolute logarithmic height from the minimal polynomial and its conjugates."""
    if isinstance(const, Tag):
        const = CATALOG[const]
    total = make_real(const.min_poly[0], precision).log()
    for z in const.conjugates(precision):
        size = abs(z)
        if certified_less(1, size):
            total = total + size.log()
    return total / const.degree


def a_coefficients(constants, field_degree: int = 2,
                   precision: int = DEFAULT_PRECISION) -> list[PrecReal]:
    """A_j = max(d_L h(gamma_j), |log gamma_j|, 0.16) for each constant."""
    out = []
    for const in constants:
        if isinstance(const, Tag):
            const = CATALOG[const]
        out.append(certified_max(
            field_degree * height(const, precision),
            abs(const.log_value(precision)),
            make_real(LOWER_A, precision),
        ))
    return out


@dataclass(frozen=True)
class MatveevInstance:
    num_logs: int
    field_degree: int
    coeff_bound_factor: Fraction
    a_coeffs: tuple[PrecReal, ...]

    def __post_init__(self):
        if self.num_logs < 1 or self.field_degree < 1:
            raise ValueError("need at least one logarithm and a field of degree >= 1")
        if len(self.a_coeffs) != self.num_logs:
            raise ValueError(f"expected {self.num_logs} A-coefficients, got {len(self.a_coeffs)}")
        for a in self.a_coeffs:
            if a.hi < make_real(LOWER_A, a.precision).value:
                raise ValueError(f"A-coefficient {a} is below 0.16")

    @property
    def precision(self) -> int:
        return max(a.precision for a in self.a_coeffs)


def standard_instance(precision: int = DEFAULT_PRECISION) -> MatveevInstance:
    """gamma = (3, sqrt 5, alpha, 2) in Q(sqrt 5) with T = 1.1 n."""
    coeffs = a_coefficients([CATALOG[t] for t in CONSTANT_ORDER], 2, precision)
    return MatveevInstance(4, 2, COEFF_BOUND_FACTOR, tuple(coeffs))


def matveev_coefficient(inst: MatveevInstance) -> PrecReal:
    """C = 1.4 * 30^(k+3) * k^4.5 * d^2 * (1 + log d) * prod(A_j) for k logarithms.

    Matveev's bound then reads ``log |Lambda| > -C (1 + log T)``.
    """
    P = inst.precision
    k, d = inst.num_logs, inst.field_degree
    k_real = make_real(k, P)
    c = make_real(MATVEEV_FACTOR, P) * (30 ** (k + 3)) * (k_real**4 * k_real.sqrt())
    c = c * (d * d) * (1 + make_real(d, P).log())
    for a in inst.a_coeffs:
        c = c * a
    return c


def combine_with_lambda_bound(C: PrecReal) -> PrecReal:
    """Coefficient K in ``n < K (1 + log(1.1 n))``.

    Comparing ``-C (1 + log T)`` with ``log(sqrt5) - n log(alpha)`` divides by
    log(alpha); the constant term is absorbed by scaling 1.4 up to 1.5.
    """
    P = C.precision
    scale = make_real(ABSORBED_FACTOR, P) / make_real(MATVEEV_FACTOR, P)
    return C * scale / const_log("alpha", P)


@dataclass(frozen=True)
class BoundResult:
    K: PrecReal
    n_bound: int
    trace: tuple[str, ...] = field(default=(), repr=False)


def solve_n_bound(K: PrecReal, c=COEFF_BOUND_FACTOR) -> BoundResult:
    """Largest integer n that can satisfy ``n < K (1 + log(c n))``.

    Iterates N <- K (1 + log(c N)) from N = K until consecutive iterates
    differ by less than one, rounds up, then steps forward until the
    integer itself fails the inequality.
    """
    P = K.precision
    c = c if isinstance(c, PrecReal) else make_real(c, P)
    if not certified_less(0, K) or not certified_less(0, c):
        raise ValueError("K and c must be positive")

    def step(N):
        return K * (1 + (c * N).log())

    N = K
    trace = [N.to_string(25)]
    for _ in range(MAX_ITERATIONS):
        nxt = step(N)
        trace.append(nxt.to_string(25))
        done = abs(nxt.value - N.value) < 1
        N = nxt
        if done:
            break
    else:
        raise NonConvergence(f"no fixed point within {MAX_ITERATIONS} iterations")

    n_bound = max(1, ceil_upper(N))
    while True:
        rhs = step(make_real(n_bound, P))
        if rhs.hi <= n_bound:
            break
        n_bound += 1
    return BoundResult(K, n_bound, tuple(trace))


def derive_y_bound(N: int, c=COEFF_BOUND_FACTOR) -> int:
    """Largest y with 2^(y-2) < c N (from x >= 2^(y-2) and x < c n <= c N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    bound = Fraction(c) * N
    largest_below = -(-bound.numerator // bound.denominator) - 1  # ceil(bound) - 1
    return 2 + largest_below.bit_length() - 1


@dataclass(frozen=True)
class LinearFormScan:
    """Result of scanning Gamma = n log a - x log 3 + y log 2 - log sqrt 5 over a box."""

    min_abs_gamma: PrecReal
    argmin: tuple[int, int, int]
    implication_violations: int
    triples_scanned: int


def gamma_value(x: int, y: int, n: int, precision: int = DEFAULT_PRECISION) -> PrecReal:
    return (n * const_log("alpha", precision) - x * const_log(3, precision)
            + y * const_log(2, precision) - const_log(5, precision) / 2)


def scan_linear_form(x_max: int, y_range: tuple[int, int], n_range: tuple[int, int],
                     precision: int = DEFAULT_PRECISION) -> LinearFormScan:
    """Check Lambda != 0 and |Gamma| < 2 sqrt5 / alpha^n on a box.

    The float kernel finds the triple with smallest |Gamma| and counts
    triples where |e^Gamma - 1| < sqrt5 / alpha^n < 1/2 does not imply the
    bound on |Gamma|.  The minimiser is then re-evaluated and certified
    nonzero at ``precision`` digits.
    """
    xs = np.arange(1, x_max, dtype=np.int64)
    ys = np.arange(y_range[0], y_range[1] + 1, dtype=np.int64)
    ns = np.arange(n_range[0], n_range[1] + 1, dtype=np.int64)
    l3, l2 = float(const_log(3)), float(const_log(2))
    la, l5 = float(const_log("alpha")), float(const_log(5))
    _, bx, by, bn, bad = _kernels.linear_form_scan(xs, ys, ns, l3, l2, la, 0.5 * l5, 5 ** 0.5)
    g = abs(gamma_value(int(bx), int(by), int(bn), precision))
    # Float error of the kernel is below 1e-12; the certified minimiser must clear it.
    certified_less(make_real("1e-10", precision), g)
    return LinearFormScan(g, (int(bx), int(by), int(bn)), int(bad), xs.size * ys.size * ns.size)
