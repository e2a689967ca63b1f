import pytest
from hypothesis import given
from hypothesis import strategies as st

from pillai_fib.errors import PrecisionExhausted
from pillai_fib.numerics import certified_less, const_alpha, make_real
from pillai_fib.sequences import (
    binet_real,
    fib,
    fib_indices,
    is_fibonacci,
    min_x_for_y,
    nu2,
    nu2_pow3_minus1,
    nu2_pow3_plus1,
    ord3_mod_2l,
)


def fib_table(n_max):
    out = [0, 1, 1]
    while len(out) <= n_max:
        out.append(out[-1] + out[-2])
    return out


FIBS = fib_table(500)


def brute_nu2(m):
    v = 0
    while m % 2 == 0:
        m //= 2
        v += 1
    return v


class TestFib:
    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (5, 5), (7, 13), (20, 6765)])
    def test_examples(self, n, expected):
        assert fib(n) == expected

    def test_fib_100(self):
        assert fib(100) == 354224848179261915075

    def test_matches_recurrence(self):
        assert all(fib(n) == FIBS[n] for n in range(1, 501))
        assert all(fib(n) == fib(n - 1) + fib(n - 2) for n in range(3, 501))

    @pytest.mark.parametrize("bad", [0, -3])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            fib(bad)


class TestBinet:
    @pytest.mark.parametrize("n", [1, 2, 10, 50, 100])
    def test_rounds_to_fib(self, n):
        v = binet_real(n, 60)
        assert abs(v.value - fib(n)) < 0.5

    def test_precision_exhausted(self):
        with pytest.raises(PrecisionExhausted):
            binet_real(400, 40)

    def test_bounds_up_to_500(self):
        alpha = const_alpha(60)
        one = make_real(1, 60)
        for n in range(1, 501):
            f = make_real(fib(n), 60)
            lower = one if n == 2 else alpha ** (n - 2)
            upper = one if n == 1 else alpha ** (n - 1)
            if n == 2:
                assert f.exact == 1  # alpha^0 = 1 = F_2
            else:
                assert certified_less(lower, f).verdict
            if n == 1:
                assert f.exact == 1  # F_1 = 1 = alpha^0
            else:
                assert certified_less(f, upper).verdict


class TestValuations:
    @pytest.mark.parametrize("t,expected", [(1, 1), (2, 3), (4, 4), (8, 5)])
    def test_examples(self, t, expected):
        assert nu2_pow3_minus1(t).valuation == expected

    def test_minus_one_up_to_64(self):
        for t in range(1, 65):
            r = nu2_pow3_minus1(t)
            assert r.valuation == brute_nu2(3**t - 1)
            assert r.cofactor % 2 == 1
            assert r.cofactor * 2**r.valuation == 3**t - 1

    def test_plus_one_up_to_64(self):
        for t in range(1, 65):
            r = nu2_pow3_plus1(t)
            assert r.valuation == brute_nu2(3**t + 1)
            assert r.cofactor % 2 == 1
            assert r.cofactor * 2**r.valuation == 3**t + 1

    @given(st.integers(1, 2**200))
    def test_nu2(self, m):
        assert nu2(m) == brute_nu2(m)
        assert nu2(-m) == nu2(m)

    def test_nu2_zero(self):
        with pytest.raises(ValueError):
            nu2(0)

    def test_rejects_bad_exponent(self):
        with pytest.raises(ValueError):
            nu2_pow3_minus1(0)


class TestOrder:
    def test_brute_force_up_to_20(self):
        for l in range(1, 21):
            mod = 2**l
            t = next(t for t in range(1, mod + 1) if pow(3, t, mod) == 1)
            assert ord3_mod_2l(l) == t
            assert 2 ** (l - 1) % t == 0

    @pytest.mark.parametrize("y,expected", [(1, 1), (4, 4), (6, 16)])
    def test_min_x(self, y, expected):
        assert min_x_for_y(y) == expected

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            ord3_mod_2l(0)


class TestMembership:
    @pytest.mark.parametrize("m,expected", [(13, (True, 7)), (4, (False, None)), (6765, (True, 20)),
                                            (1, (True, 1)), (2, (True, 3))])
    def test_examples(self, m, expected):
        assert is_fibonacci(m) == expected

    def test_fib_values(self):
        for n in range(3, 91):
            assert is_fibonacci(FIBS[n]) == (True, n)

    def test_non_fib_values(self):
        fibset = set(FIBS[:31])
        for m in range(1, FIBS[30]):
            if m not in fibset:
                assert not is_fibonacci(m)[0]

    def test_indices_of_one(self):
        assert fib_indices(1) == (1, 2)
        assert fib_indices(0) == ()

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            is_fibonacci(0)
