import math
import random
from decimal import Decimal

import pytest

from pillai_fib.contfrac import cf_expand
from pillai_fib.numerics import certified_less, const_alpha, make_real
from pillai_fib.reduction import (
    ReductionInstance,
    Status,
    build_instance,
    epsilon_of,
    epsilon_table,
    gamma_ratio,
    mu_for_y,
    omega_bound,
    reduce_once,
    reduce_with_cf,
    soundness_trial,
    sweep_y,
)

M = 216 * 10**14
PUBLISHED_Q = 1116972345258589541
Q38 = 142606363712992701
Q39 = 194873196309119368


@pytest.fixture(scope="module")
def cf():
    return cf_expand(gamma_ratio(60), 200)


@pytest.fixture(scope="module")
def sweep(cf):
    return sweep_y(range(4, 57), M, cf)


class TestInstance:
    def test_gamma(self, dec):
        g = dec["ctx"].divide(dec["lnalpha"], dec["ln3"])
        assert abs(Decimal(gamma_ratio(60).to_string(50)) - g) < Decimal("1e-48")

    @pytest.mark.parametrize("y", [0, 4, 17, 56])
    def test_mu(self, dec, y):
        ctx = dec["ctx"]
        num = ctx.subtract(ctx.multiply(y, dec["ln2"]), ctx.divide(dec["ln5"], 2))
        assert abs(Decimal(mu_for_y(y).to_string(50)) - ctx.divide(num, dec["ln3"])) < Decimal("1e-48")

    def test_mu_examples(self):
        assert mu_for_y(4).to_string(6) == "1.79123"
        assert mu_for_y(0).to_string(5) == "-0.73249"

    def test_build(self):
        inst = build_instance(4, M)
        assert inst.A.exact == 5 and inst.y_label == 4
        assert inst.B.to_string(30) == const_alpha(60).to_string(30)

    @pytest.mark.parametrize("A,B,m", [(0, 2, 1), (1, 1, 1), (1, 2, 0)])
    def test_validation(self, A, B, m):
        with pytest.raises(ValueError):
            ReductionInstance(gamma_ratio(40), make_real(0, 40), m, make_real(A, 40), make_real(B, 40))


class TestEpsilon:
    def test_integer_products(self):
        inst = ReductionInstance(make_real((1, 2), 40), make_real(0, 40), 1,
                                 make_real(1, 40), make_real(2, 40))
        assert epsilon_of(inst, 2).exact == 0

    def test_nonpositive_q(self):
        with pytest.raises(ValueError):
            epsilon_of(build_instance(4, M), 0)

    def test_dual_precision_at_published_q(self):
        P = 60
        for y in range(4, 57):
            a = epsilon_of(build_instance(y, M, P), PUBLISHED_Q)
            b = epsilon_of(build_instance(y, M, P + 20), PUBLISHED_Q)
            assert abs(a.value - b.value) < make_real(10, P).value ** (-P + 25)

    def test_gamma_term_at_published_q(self):
        row = epsilon_table([4], M, PUBLISHED_Q)[0]
        assert certified_less(row.gamma_term, "0.02").verdict
        assert row.gamma_term.to_string(4) == "0.001902"


class TestBound:
    def test_log_only(self):
        one, e = make_real(1, 40), make_real(1, 40).exp()
        assert omega_bound(one, e, math.ceil(math.exp(10)), one) == 10
        assert omega_bound(one, e, math.floor(math.exp(10)), one) == 9

    def test_displayed_expression(self):
        # floor(log(5 q / 0.0096) / log alpha) evaluated directly.
        assert omega_bound(make_real(5), const_alpha(60), PUBLISHED_Q, make_real("0.0096")) == 99

    def test_monotone(self):
        A, B = make_real(5), const_alpha(60)
        eps = [make_real(s) for s in ("0.0001", "0.001", "0.01", "0.1")]
        bounds = [omega_bound(A, B, PUBLISHED_Q, e) for e in eps]
        assert bounds == sorted(bounds, reverse=True)
        qs = [Q38, Q39, PUBLISHED_Q, 10**30]
        assert [omega_bound(A, B, q, eps[2]) for q in qs] == sorted(omega_bound(A, B, q, eps[2]) for q in qs)
        As = [make_real(a) for a in (1, 5, 50, 5000)]
        assert [omega_bound(a, B, PUBLISHED_Q, eps[2]) for a in As] == sorted(
            omega_bound(a, B, PUBLISHED_Q, eps[2]) for a in As)

    def test_doubling_epsilon(self):
        A, B = make_real(5), const_alpha(60)
        drop = math.log(2) / float(B.log())
        for s in ("0.0003", "0.004", "0.05"):
            e = make_real(s)
            d = omega_bound(A, B, PUBLISHED_Q, e) - omega_bound(A, B, PUBLISHED_Q, e * 2)
            assert d in (math.floor(drop), math.ceil(drop))


class TestReduce:
    def test_q_too_small(self):
        with pytest.raises(ValueError):
            reduce_once(build_instance(4, M), 6 * M)

    def test_y4(self, cf):
        out = reduce_with_cf(build_instance(4, M), cf)
        assert (out.k, out.q_used, out.status, out.omega_bound) == (38, Q38, Status.OK, 87)

    def test_advances_on_nonpositive(self, cf):
        outcomes = {y: reduce_once(build_instance(y, M), Q38).status for y in range(4, 57)}
        skipped = [y for y, s in outcomes.items() if s is Status.EPSILON_NONPOSITIVE]
        assert len(skipped) == 10
        for y in skipped:
            assert reduce_with_cf(build_instance(y, M), cf).q_used == Q39

    def test_sweep(self, sweep):
        assert sweep.global_bound == 101
        assert [r.y_label for r in sweep.rows] == list(range(4, 57))
        assert all(r.status is Status.OK and certified_less(0, r.epsilon) for r in sweep.rows)
        assert sum(r.k == 38 for r in sweep.rows) == 43
        assert sweep.min_epsilon.to_string(3) == "0.000353"

    def test_singleton_and_order(self, cf, sweep):
        single = sweep_y([4], M, cf)
        assert len(single.rows) == 1 and single.global_bound == single.rows[0].omega_bound
        shuffled = sweep_y([30, 5, 12], M, cf)
        assert [r.y_label for r in shuffled.rows] == [5, 12, 30]

    def test_empty(self, cf):
        with pytest.raises(ValueError):
            sweep_y([], M, cf)


def test_soundness_sample():
    rng = random.Random(7)
    trials = []
    while len(trials) < 20:
        t = soundness_trial(rng)
        if t is not None:
            trials.append(t)
    assert all(not t.violations for t in trials)
    assert all(t.q > 6 * t.M for t in trials)
    assert sum(t.hits_below_threshold for t in trials) > 0
