from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weylsymp.errors import AlgebraError, FormatError
from weylsymp.rings import (GF, QQ, HbarSeriesRing, Zp2, integer_scaled, is_prime,
                            reduce_rational, ring_from_tag, unscale)

from strategies import small_rationals


def test_qq_normalises_integral_fractions():
    assert QQ(Fraction(4, 2)) == 2
    assert type(QQ(Fraction(4, 2))) is int
    assert QQ("3/6") == Fraction(1, 2)
    assert QQ.to_str(Fraction(-3, 2)) == "-3/2"
    assert QQ.to_str(5) == "5"


def test_qq_bad_literal():
    with pytest.raises(FormatError):
        QQ.parse("1/x")


def test_field_and_zp2():
    f5 = GF(5)
    assert f5.name == "Fp" and f5(7) == 2
    assert f5(Fraction(1, 2)) == 3
    assert f5.inv(2) == 3
    z = Zp2(3)
    assert z.name == "Zp2" and z.modulus == 9
    assert z.tag() == {"ring": "Zp2", "p": 3}
    with pytest.raises(ZeroDivisionError):
        z(Fraction(1, 3))
    with pytest.raises(AlgebraError):
        GF(4)


def test_ring_tags():
    assert ring_from_tag("Q") is QQ
    assert ring_from_tag("Fp", 7) == GF(7)
    with pytest.raises(FormatError):
        ring_from_tag("R")


def test_reduce_rational():
    assert reduce_rational(Fraction(1, 3), GF(7)) == 5
    with pytest.raises(ZeroDivisionError):
        reduce_rational(Fraction(1, 7), GF(7))


def test_primes():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_hbar_series_truncates():
    R = HbarSeriesRing(QQ, 2)
    a = R((1, 1))
    assert R.mul(a, a) == (1, 2, 1)
    assert R.mul(R.mul(a, a), a) == (1, 3, 3)
    inv = R.inv(a)
    assert inv == (1, -1, 1)
    assert R.mul(a, inv) == (1,)
    assert R.valuation(R.hbar(2)) == 2
    assert R.to_json((0, Fraction(1, 2))) == {"1": "1/2"}


def test_hbar_polynomials_not_invertible_without_order():
    R = HbarSeriesRing(QQ)
    assert R.inv((2,)) == (Fraction(1, 2),)
    with pytest.raises(AlgebraError):
        R.inv((1, 1))


@given(st.dictionaries(st.integers(0, 5), small_rationals))
def test_integer_scaling_round_trips(terms):
    ints, den = integer_scaled(terms)
    assert all(isinstance(v, int) for v in ints.values())
    assert unscale(ints, den, QQ) == {k: QQ(v) for k, v in terms.items() if v}


@given(st.integers(-50, 50), st.integers(-50, 50), st.sampled_from([2, 3, 5, 7]))
def test_gf_is_a_ring_hom(a, b, p):
    F = GF(p)
    assert F.add(F(a), F(b)) == F(a + b)
    assert F.mul(F(a), F(b)) == F(a * b)
