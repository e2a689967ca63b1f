from fractions import Fraction

import pytest

from pillai_fib.contfrac import cf_expand, convergent, first_q_above
from pillai_fib.errors import ExpansionExhausted, PrecisionExhausted, UntrustedTerm
from pillai_fib.numerics import certified_less, const_alpha, const_sqrt5, make_real
from pillai_fib.reduction import gamma_ratio

PUBLISHED_Q = 1116972345258589541


def exact_expansion(fr: Fraction, n: int) -> list[int]:
    out = []
    for _ in range(n):
        a = fr.numerator // fr.denominator
        out.append(a)
        if fr == a:
            break
        fr = 1 / (fr - a)
    return out


@pytest.fixture(scope="module")
def gamma_cf():
    return cf_expand(gamma_ratio(60), 200)


def test_alpha_all_ones():
    cf = cf_expand(const_alpha(60), 200)
    assert cf.trusted_terms > 100
    assert set(cf.quotients) == {1}
    assert convergent(cf, 5) == (13, 8)


def test_rational_terminates():
    cf = cf_expand(make_real("2.75", 40), 20)
    assert cf.quotients == (2, 1, 3)
    assert cf.terminated
    assert convergent(cf, 2) == (11, 4)


def test_gamma_matches_decimal_oracle(gamma_cf, dec):
    g = dec["ctx"].divide(dec["lnalpha"], dec["ln3"])
    oracle = exact_expansion(Fraction(g), 70)
    n = gamma_cf.trusted_terms
    assert n >= 50
    # 80 oracle digits cover far more terms than the 60-digit expansion trusts.
    assert list(gamma_cf.quotients) == oracle[:n]


def test_published_denominator_present(gamma_cf):
    qs = [q for _, q in gamma_cf.convergents]
    assert PUBLISHED_Q in qs
    assert qs.index(PUBLISHED_Q) == 40


def test_first_q_above_6M(gamma_cf):
    k, p, q = first_q_above(gamma_cf, 6 * 216 * 10**14)
    assert (k, q) == (38, 142606363712992701)
    assert gamma_cf.convergents[k - 1][1] <= 6 * 216 * 10**14 < q


def test_first_q_alpha():
    k, p, q = first_q_above(cf_expand(const_alpha(60), 50), 10)
    assert (p, q) == (21, 13) and k == 6


def test_first_q_rational_exhausted():
    with pytest.raises(ExpansionExhausted):
        first_q_above(cf_expand(make_real("2.75", 40), 20), 100)


def test_untrusted_index(gamma_cf):
    with pytest.raises(UntrustedTerm):
        convergent(gamma_cf, gamma_cf.trusted_terms)
    with pytest.raises(IndexError):
        convergent(gamma_cf, -1)


def test_bad_inputs():
    with pytest.raises(ValueError):
        cf_expand(make_real(-1, 40), 5)
    with pytest.raises(ValueError):
        cf_expand(const_alpha(40), 0)


def test_precision_exhausted_before_first_term():
    # An interval straddling 2 has no certified integer part.
    x = make_real(2, 30) + (const_sqrt5(30) - const_sqrt5(30))
    x = type(x)(x.value, 30, make_real("0.1", 30).value)
    with pytest.raises(PrecisionExhausted):
        cf_expand(x, 5)


@pytest.mark.parametrize("source", ["alpha", "gamma", "sqrt5"])
def test_convergent_invariants(source):
    P = 60
    x = {"alpha": const_alpha, "gamma": gamma_ratio, "sqrt5": const_sqrt5}[source](P)
    cf = cf_expand(x, 200)
    conv = cf.convergents
    for k in range(1, cf.trusted_terms):
        (p0, q0), (p1, q1) = conv[k - 1], conv[k]
        assert p1 * q0 - p0 * q1 == (-1) ** (k - 1)
        assert q1 > q0 or k == 1
        assert cf.quotients[k] >= 1
    for p, q in conv[: cf.trusted_terms]:
        gap = abs(x - make_real(Fraction(p, q), P))
        assert gap.hi < make_real((1, q * q), P).lo


@pytest.mark.parametrize("P", [30, 60, 100])
def test_stable_under_more_digits(P):
    lo = cf_expand(gamma_ratio(P), 400)
    hi = cf_expand(gamma_ratio(P + 20), 400)
    assert hi.trusted_terms > lo.trusted_terms
    assert hi.quotients[: lo.trusted_terms] == lo.quotients


def test_rational_final_convergent():
    for fr in [Fraction(355, 113), Fraction(1, 7), Fraction(987, 610)]:
        cf = cf_expand(make_real(fr, 40), 50)
        assert cf.terminated
        assert Fraction(*cf.convergents[-1]) == fr


def test_certified_gap_distinguishes_convergents(gamma_cf):
    p, q = convergent(gamma_cf, 40)
    assert certified_less(make_real(0, 60), abs(gamma_cf.source - make_real((p, q), 60))).verdict
