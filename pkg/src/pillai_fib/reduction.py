"""Baker-Davenport reduction in the Dujella-Petho form.

If p/q is a convergent of gamma with q > 6M and
``eps = ||mu q|| - M ||gamma q|| > 0``, then ``0 < |u gamma - v + mu| < A B^-w``
has no solution with ``u <= M`` and ``w >= log(A q / eps) / log B``.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .contfrac import ContinuedFraction, cf_expand, convergent, first_q_above
from .errors import ExpansionExhausted, PrecisionExhausted, UndecidableAtPrecision
from .numerics import (
    DEFAULT_PRECISION,
    PrecReal,
    certified_less,
    const_alpha,
    const_log,
    dist_nearest_int,
    floor_upper,
    make_real,
)


class Status(enum.Enum):
    OK = "OK"
    EPSILON_NONPOSITIVE = "EPSILON_NONPOSITIVE"
    PRECISION_EXHAUSTED = "PRECISION_EXHAUSTED"


@dataclass(frozen=True)
class ReductionInstance:
    gamma: PrecReal
    mu: PrecReal
    M: int
    A: PrecReal
    B: PrecReal
    y_label: int | None = None

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.A.lo <= 0:
            raise ValueError("A must be positive")
        if self.B.lo <= 1:
            raise ValueError("B must exceed 1")


@dataclass(frozen=True)
class ReductionOutcome:
    q_used: int
    epsilon: PrecReal | None
    omega_bound: int | None
    status: Status
    k: int | None = None
    y_label: int | None = None


def gamma_ratio(precision: int = DEFAULT_PRECISION) -> PrecReal:
    """log(alpha) / log(3)."""
    return const_log("alpha", precision) / const_log(3, precision)


def mu_for_y(y: int, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """(y log 2 - log sqrt 5) / log 3."""
    return (y * const_log(2, precision) - const_log(5, precision) / 2) / const_log(3, precision)


def build_instance(y: int, M: int, precision: int = DEFAULT_PRECISION) -> ReductionInstance:
    """The linear form n gamma - x + mu with |.| < 5 / alpha^n for a fixed y."""
    return ReductionInstance(
        gamma=gamma_ratio(precision),
        mu=mu_for_y(y, precision),
        M=M,
        A=make_real(5, precision),
        B=const_alpha(precision),
        y_label=y,
    )


def _lifted(x: PrecReal, precision: int) -> PrecReal:
    return x.at(precision) if x.recipe is not None else x


def epsilon_parts(inst: ReductionInstance, q: int) -> tuple[PrecReal, PrecReal]:
    """(||mu q||, M ||gamma q||).

    Multiplying by q and M eats about log10(q M) digits, so mu and gamma are
    re-evaluated with that many extra digits first; the results then carry
    roughly the instance precision in absolute terms.
    """
    P = max(inst.mu.precision, inst.gamma.precision)
    lift = P + len(str(q)) + len(str(inst.M))
    mu, gamma = _lifted(inst.mu, lift), _lifted(inst.gamma, lift)
    return dist_nearest_int(mu * q), inst.M * dist_nearest_int(gamma * q)


def epsilon_of(inst: ReductionInstance, q: int) -> PrecReal:
    if q < 1:
        raise ValueError("q must be a positive integer")
    mu_part, gamma_part = epsilon_parts(inst, q)
    return mu_part - gamma_part


def omega_bound(A: PrecReal, B: PrecReal, q: int, eps: PrecReal) -> int:
    """floor(log(A q / eps) / log B), rounded towards the safe side."""
    return floor_upper((A * q / eps).log() / B.log())


def reduce_once(inst: ReductionInstance, q: int, k: int | None = None) -> ReductionOutcome:
    """Apply the lemma with denominator ``q``; solutions then have omega <= omega_bound."""
    if q <= 6 * inst.M:
        raise ValueError(f"q = {q} does not exceed 6M = {6 * inst.M}")
    try:
        eps = epsilon_of(inst, q)
        positive = certified_less(0, eps).verdict
    except UndecidableAtPrecision:
        return ReductionOutcome(q, None, None, Status.EPSILON_NONPOSITIVE, k, inst.y_label)
    except PrecisionExhausted:
        return ReductionOutcome(q, None, None, Status.PRECISION_EXHAUSTED, k, inst.y_label)
    if not positive:
        return ReductionOutcome(q, eps, None, Status.EPSILON_NONPOSITIVE, k, inst.y_label)
    return ReductionOutcome(q, eps, omega_bound(inst.A, inst.B, q, eps), Status.OK, k, inst.y_label)


def reduce_with_cf(inst: ReductionInstance, cf: ContinuedFraction) -> ReductionOutcome:
    """Start at the first q > 6M and advance through convergents until eps > 0."""
    k, _, q = first_q_above(cf, 6 * inst.M)
    while True:
        outcome = reduce_once(inst, q, k)
        if outcome.status is Status.OK:
            return outcome
        if outcome.status is Status.PRECISION_EXHAUSTED:
            raise PrecisionExhausted(f"y={inst.y_label}: cannot resolve eps at q={q}")
        k += 1
        try:
            q = convergent(cf, k)[1]
        except IndexError as exc:
            raise ExpansionExhausted(
                f"y={inst.y_label}: eps never positive within the trusted expansion") from exc


@dataclass(frozen=True)
class SweepResult:
    global_bound: int
    rows: tuple[ReductionOutcome, ...]

    @property
    def min_epsilon(self) -> PrecReal:
        return min((r.epsilon for r in self.rows), key=lambda e: e.value)


def sweep_y(y_range, M: int, cf: ContinuedFraction,
            precision: int | None = None) -> SweepResult:
    """Reduce every y in ``y_range``; the new bound on n is the maximum over y.

    Rows come back ordered by y regardless of evaluation order.
    """
    ys = sorted(set(y_range))
    if not ys:
        raise ValueError("y range is empty")
    P = precision or cf.source.precision
    rows = tuple(reduce_with_cf(build_instance(y, M, P), cf) for y in ys)
    return SweepResult(max(r.omega_bound for r in rows), rows)


@dataclass(frozen=True)
class EpsilonRow:
    y: int
    mu_dist: PrecReal
    gamma_term: PrecReal
    epsilon: PrecReal


def epsilon_table(y_range, M: int, q: int,
                  precision: int = DEFAULT_PRECISION) -> list[EpsilonRow]:
    """||mu_y q||, M ||gamma q|| and eps_y for a fixed q, without any expansion."""
    rows = []
    for y in y_range:
        inst = build_instance(y, M, precision)
        mu_part, gamma_part = epsilon_parts(inst, q)
        rows.append(EpsilonRow(y, mu_part, gamma_part, mu_part - gamma_part))
    return rows


# -- desk-scale soundness of the lemma ---------------------------------------------------


@dataclass(frozen=True)
class SoundnessTrial:
    gamma: PrecReal
    mu: PrecReal
    M: int
    A: Fraction
    B: Fraction
    q: int
    epsilon: PrecReal
    omega_start: int
    omega_stop: int
    hits_below_threshold: int
    violations: tuple[tuple[int, int, int], ...]


def _random_irrational(rng: random.Random, precision: int) -> PrecReal:
    choice = rng.randrange(3)
    if choice == 0:
        r = rng.choice([m for m in range(2, 60) if math.isqrt(m) ** 2 != m])
        return make_real(r, precision).sqrt() / rng.randint(1, 7)
    if choice == 1:
        a, b = rng.sample([2, 3, 5, 7, 11, 13], 2)
        return make_real(a, precision).log() / make_real(b, precision).log()
    return make_real(rng.randint(1, 9), precision).exp() / rng.randint(3, 30)


def soundness_trial(rng: random.Random, precision: int = 40,
                    extra_omega: int = 10) -> SoundnessTrial | None:
    """Draw a small instance, reduce it and enumerate (u, v, omega) exhaustively.

    Returns ``None`` when the drawn instance never yields eps > 0 within its
    expansion (the caller simply draws again).
    """
    gamma = _random_irrational(rng, precision)
    mu = make_real(Fraction(rng.randint(-5000, 5000), rng.randint(1, 997)), precision)
    M = rng.randint(1, 50)
    A = Fraction(rng.randint(11, 100), 10)
    B = Fraction(rng.randint(11, 100), 10)
    inst = ReductionInstance(gamma, mu, M, make_real(A, precision), make_real(B, precision))
    cf = cf_expand(gamma, 60)
    try:
        out = reduce_with_cf(inst, cf)
    except (ExpansionExhausted, PrecisionExhausted):
        return None
    w0 = (inst.A * out.q_used / out.epsilon).log() / inst.B.log()
    start = max(1, math.ceil(float(w0.lo)))
    stop = start + extra_omega
    # Enumerate from omega = 1 so hits below the threshold show the search is live.
    flags = _kernels.lemma_flags(float(gamma), float(mu), M, float(A), float(B), 1, stop)

    A_r, B_r = make_real(A, precision), make_real(B, precision)
    below, violations = 0, []
    for u, v, w in flags.tolist():
        lhs = abs(gamma * u - v + mu)
        if w < start:
            below += 1
            continue
        try:
            if certified_less(0, lhs) and certified_less(lhs, A_r * B_r ** (-w)):
                violations.append((u, v, w))
        except UndecidableAtPrecision:
            violations.append((u, v, w))  # unresolved counts against the lemma
    return SoundnessTrial(gamma, mu, M, A, B, out.q_used, out.epsilon, start, stop,
                          below, tuple(violations))
