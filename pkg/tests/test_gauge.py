import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from weylsymp.errors import ArityMismatch, FormatError, GaugeOrderError, PreconditionX
from weylsymp.gauge import (TruncatedAuto, conjugate_by_unit, defect_order, gauge_conjugate,
                            gauge_unit, normalize, normalize_trace, planted_defect_auto)
from weylsymp.parse import parse_weyl
from weylsymp.star import lift_tame
from weylsymp.weyl import WeylAuto, WeylElt, weyl_auto_check

from strategies import seeds, tame_words, weyl_elts

K = 6


def auto(y_image, K=K):
    return TruncatedAuto([parse_weyl("X", 1, order=K), parse_weyl(y_image, 1, order=K)], K)


def w(text, K=K):
    return parse_weyl(text, 1, order=K)


def test_zero_gauge_is_identity():
    psi = TruncatedAuto.from_auto(lift_tame(_word()), K)
    assert gauge_conjugate(psi, WeylElt.zero(1, order=K)) == psi


def _word():
    from weylsymp.poly import Poly
    from weylsymp.symplectic import TameWord, Transvection
    x, p = Poly.gens(2)
    return TameWord([Transvection(1, x * x), Transvection(0, p * p)], 2)


def test_leading_defect_is_second_order():
    psi = TruncatedAuto.from_auto(lift_tame(_word()), K)
    out = gauge_conjugate(psi, w("X^2*Y + Y^3"))
    for a, b in zip(out.images, psi.images):
        diff = a - b
        assert diff.hbar_valuation() >= 2


def test_second_order_term_cancels():
    # [q(X), Y] = -h q'(X), so conjugating by 1 + h q kills h^2 q'(X)
    psi = auto("Y + h^2*(X^2 + 3*X)")
    out = gauge_conjugate(psi, w("1/3*X^3 + 3/2*X^2"))
    img = out.images[1]
    assert all(key[2] >= 3 for key in (img - w("Y")).terms)


def test_defect_order_examples():
    assert defect_order(auto("Y")) is None
    assert defect_order(auto("Y + h^2*(X^3 + X*Y)")) == 2
    assert defect_order(auto("Y + h^3*X^2*Y")) is None
    with pytest.raises(PreconditionX):
        defect_order(TruncatedAuto([w("X + Y^2"), w("Y")], K))
    with pytest.raises(ArityMismatch):
        defect_order(TruncatedAuto.from_auto(WeylAuto.identity(2), K))


def test_normalize_examples():
    gauges, out = normalize(auto("Y"))
    assert gauges == [] and out == auto("Y")
    gauges, out, orders = normalize_trace(auto("Y + h^2*X^2"))
    assert gauges[0] == w("1/3*X^3")
    assert orders[0] == 2
    assert defect_order(out) is None
    assert weyl_auto_check(out)


def test_normalize_three_steps():
    # the first conjugation creates -h^4 X^5/4, hence a third step at order 4
    gauges, out, orders = normalize_trace(auto("Y + h^2*X + h^3*X^2", 4), 4)
    assert orders == [2, 3, 4]
    assert gauges == [w("1/2*X^2", 4), w("h*(1/8*X^4 + 1/3*X^3)", 4), w("-1/24*h^2*X^6", 4)]
    assert defect_order(out) is None
    assert all(key[1] > 0 for key in (out.images[1] - w("Y", 4)).terms)


def test_order_one_defect_rejected():
    with pytest.raises(GaugeOrderError):
        normalize(auto("Y + h*X"))


@pytest.mark.parametrize("seed", range(10))
def test_planted_defects(seed):
    psi = planted_defect_auto(random.Random(seed))
    assert weyl_auto_check(psi)
    gauges, out, orders = normalize_trace(psi)
    assert defect_order(out) is None
    assert orders == sorted(set(orders)) and orders[0] == 2
    assert len(gauges) <= K
    assert weyl_auto_check(out)


@given(tame_words(n=1, length=(1, 3), degree_cap=6), weyl_elts(1, 2, hbar_max=2))
@settings(max_examples=25)
def test_relations_preserved(word, Q):
    psi = TruncatedAuto.from_auto(lift_tame(word), 5)
    assert weyl_auto_check(gauge_conjugate(psi, Q.with_order(5)))


@given(weyl_elts(1, 2, hbar_max=1), weyl_elts(1, 2, hbar_max=1))
@settings(max_examples=25)
def test_gauge_composition(Q1, Q2):
    psi = TruncatedAuto.from_auto(lift_tame(_word()), 5)
    Q1, Q2 = Q1.with_order(5), Q2.with_order(5)
    twice = gauge_conjugate(gauge_conjugate(psi, Q1), Q2)
    combined = gauge_unit(Q2, 5).mul(gauge_unit(Q1, 5))
    assert twice == conjugate_by_unit(psi, combined, 5)


def test_truncated_json():
    psi = auto("Y + h^2*X^2")
    data = psi.to_json()
    assert data["K"] == K
    assert TruncatedAuto.from_json(data) == psi
    del data["K"]
    with pytest.raises(FormatError):
        TruncatedAuto.from_json(data)
