import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weylsymp import corpus, linalg
from weylsymp.errors import ArityMismatch, NotSymplectic, SingularMatrix
from weylsymp.poly import Poly
from weylsymp.symplectic import (Endo, Linear, PoissonStructure, TameWord, Transvection,
                                 distance, elementary_is_symplectic, endo_apply, endo_compose,
                                 hamiltonian_shear, height_of, is_automorphism_certificate,
                                 is_symplectomorphism, jacobian_is_unit_constant, nagata,
                                 nagata_x_variant, nagata_delta, poisson_bracket,
                                 symplectic_transvection, tame_evaluate, tame_invert)

from oracles import oracle_bracket, oracle_compose
from strategies import polys, tame_words

P1, P2 = PoissonStructure(1), PoissonStructure(2)
x, p = Poly.gens(2)
x1, x2, p1, p2 = Poly.gens(4)


def test_bracket_table():
    assert poisson_bracket(P1, x, p) == Poly.const(2, -1)
    assert poisson_bracket(P1, p, x) == Poly.one(2)
    assert poisson_bracket(P1, x * x, p) == x.scale(-2)
    assert poisson_bracket(P2, x1, p2).is_zero()
    for i in range(4):
        for j in range(4):
            assert P2.b(i, j) == -P2.b(j, i)


def test_compose_examples():
    phi = Endo([x + p * p, p])
    assert endo_compose(phi, Endo.identity(2)) == phi
    assert endo_compose(phi, Endo([x, p + x * x])) == Endo([x + (p + x * x) ** 2, p + x * x])
    assert endo_apply(phi, x) == x + p * p
    with pytest.raises(ArityMismatch):
        endo_compose(phi, Endo.identity(4))


def test_height_and_distance():
    assert distance(Endo([x + x ** 3, p]), Endo.identity(2)) == (3, "e^-3")
    assert distance(Endo.identity(2), Endo.identity(2)) == (math.inf, "0")
    assert distance(Endo([x + 1, p]), Endo.identity(2)) == (0, "1")


def test_automorphism_certificates():
    assert is_automorphism_certificate(Endo([x, p + x * x]), Endo([x, p - x * x]))
    assert not is_automorphism_certificate(Endo([x * x, p]), Endo.identity(2))
    phi, inv = nagata()
    assert is_automorphism_certificate(phi, inv)
    assert oracle_compose(phi, inv) == list(Poly.gens(3))


def test_jacobian_unit():
    assert jacobian_is_unit_constant(Endo.identity(2))
    assert not jacobian_is_unit_constant(Endo([2 * x, p]))
    assert jacobian_is_unit_constant(Endo([x + p * p, p]))


def test_symplectomorphism_examples():
    assert is_symplectomorphism(P1, Endo([x + p * p, p]))
    assert not is_symplectomorphism(P2, Endo([x1 + p2, x2, p1, p2]))
    assert not is_symplectomorphism(P1, Endo([2 * x, p]))
    # frozen from the sympy bracket oracle
    assert oracle_bracket(x1 + p2, x2) == Poly.one(4)


def test_elementary_examples():
    assert elementary_is_symplectic(P1, Linear([[1, 1], [0, 1]]))
    assert not elementary_is_symplectic(P2, Transvection(0, p2))
    assert elementary_is_symplectic(P1, Transvection(0, p ** 3))
    with pytest.raises(NotSymplectic):
        symplectic_transvection(2, 0, p2)
    assert symplectic_transvection(2, 0, p1 ** 2).poly == p1 ** 2


def test_hamiltonian_shear_is_symplectic():
    F = p1 * p2 ** 2 + p1 ** 3
    phi = hamiltonian_shear(P2, F)
    assert is_symplectomorphism(P2, phi) and jacobian_is_unit_constant(phi)
    with pytest.raises(NotSymplectic):
        hamiltonian_shear(P2, x1 * p2)


def test_tame_words():
    assert tame_evaluate(TameWord([], 2)) == Endo.identity(2)
    w = TameWord([Transvection(0, p * p)])
    assert tame_invert(w) == TameWord([Transvection(0, -(p * p))])
    w = TameWord([Transvection(1, x * x), Transvection(0, p * p)])
    ev = tame_evaluate(w)
    assert endo_compose(ev, tame_evaluate(tame_invert(w))) == Endo.identity(2)
    # word order: the first factor is applied to the images of the rest
    assert ev == Endo(oracle_compose(Endo([x, p + x * x]), Endo([x + p * p, p])))


def test_singular_linear_factor():
    with pytest.raises(SingularMatrix):
        tame_invert(TameWord([Linear([[1, 1], [1, 1]])]))


def test_nagata():
    phi, inv = nagata()
    d = nagata_delta()
    assert d.substitute(list(phi.images)) == d
    assert endo_compose(phi, inv) == Endo.identity(3)
    variant = nagata_x_variant()
    assert d.substitute(list(variant.images)) != d


def test_word_json_round_trip():
    w = TameWord([Linear([[1, 2], [0, 1]]), Transvection(1, x.scale(Fraction(1, 2)))])
    assert TameWord.from_json(w.to_json()) == w
    assert Endo.from_json(tame_evaluate(w).to_json()) == tame_evaluate(w)


def test_symplectic_completion():
    rows = linalg.symplectic_completion([1, 2, -1, 3], 2)
    assert rows[0] == [1, 2, -1, 3]
    assert linalg.is_symplectic_matrix(rows, 2)


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4).filter(any))
def test_completion_property(form):
    rows = linalg.symplectic_completion(form, 2)
    assert rows[0] == form and linalg.is_symplectic_matrix(rows, 2)


@given(tame_words())
def test_words_are_symplectic(w):
    P = PoissonStructure(w.nvars // 2)
    assert all(elementary_is_symplectic(P, e) for e in w)
    phi = tame_evaluate(w)
    assert is_symplectomorphism(P, phi)
    assert jacobian_is_unit_constant(phi)
    assert endo_compose(phi, tame_evaluate(tame_invert(w))) == Endo.identity(w.nvars)


@given(tame_words(n=1, degree_cap=6), tame_words(n=1, degree_cap=6))
def test_composition_of_symplectomorphisms(w1, w2):
    phi = endo_compose(tame_evaluate(w1), tame_evaluate(w2))
    assert is_symplectomorphism(P1, phi)
    assert phi == tame_evaluate(w1 + w2)


@given(polys(), polys(), polys(), polys(), polys(), polys())
def test_metric_axioms(a, b, c, d, e, f):
    phi, psi, chi = Endo([a, b]), Endo([c, d]), Endo([e, f])
    assert (height_of(phi, psi) == math.inf) == (phi == psi)
    assert height_of(phi, psi) == height_of(psi, phi)
    assert height_of(phi, psi) >= min(height_of(phi, chi), height_of(chi, psi))


@given(polys(nvars=4), polys(nvars=4))
def test_bracket_matches_oracle(f, g):
    assert poisson_bracket(P2, f, g) == oracle_bracket(f, g)


@given(st.integers(0, 10 ** 6))
def test_near_identity_heights(seed):
    rng = random.Random(seed)
    phi = corpus.near_identity_symplecto(rng, 1)
    psi = corpus.near_identity_symplecto(rng, 1)
    ident = Endo.identity(2)
    assert height_of(endo_compose(phi, psi), ident) >= min(height_of(phi, ident),
                                                           height_of(psi, ident))
