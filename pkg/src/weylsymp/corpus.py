"""Deterministic random corpora of symplectic objects.

Everything is driven by ``random.Random(seed)`` so that regeneration from a
(spec, seed) pair is bit-identical.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .poly import Poly
from .rings import QQ
from .symplectic import (Endo, Linear, PoissonStructure, TameWord, Transvection,
                         conjugate_index, endo_compose, hamiltonian_shear)
from .star import HbarPoly


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    n: int = 1
    word_length: tuple = (1, 6)
    degree: tuple = (1, 3)
    coeff_bound: int = 3
    primes: tuple = (2, 3)
    integer_only: bool = False
    # cap on the product of factor degrees; keeps composite degrees desk-sized
    degree_cap: int = 27
    extra: dict = field(default_factory=dict, compare=False, hash=False)


def _coeff(rng, bound, integer_only):
    num = rng.choice([k for k in range(-bound, bound + 1) if k])
    if integer_only:
        return num
    return QQ(Fraction(num, rng.choice([1, 1, 1, 2, 3])))


def random_symplectic_matrix(rng, n, bound=2, steps=None):
    """Integer matrix in Sp(2n) built from elementary symplectic shears."""
    size = 2 * n
    a = linalg.identity(size)
    for _ in range(steps if steps is not None else rng.randint(1, 3)):
        e = linalg.identity(size)
        kind = rng.randrange(3 if n > 1 else 2)
        c = rng.choice([k for k in range(-bound, bound + 1) if k])
        i = rng.randrange(n)
        if kind == 0:
            e[i][i + n] = c          # x_i -> x_i + c p_i
        elif kind == 1:
            e[i + n][i] = c          # p_i -> p_i + c x_i
        else:
            j = rng.choice([k for k in range(n) if k != i])
            e[i][j] = c              # x_i -> x_i + c x_j
            e[j + n][i + n] = -c     # p_j -> p_j - c p_i
        a = linalg.matmul(e, a)
    return a


def random_transvection(rng, n, degree, bound=3, integer_only=False, min_term_degree=1):
    target = rng.randrange(2 * n)
    var = conjugate_index(target, n)
    terms = {}
    exps = list(range(min_term_degree, degree + 1))
    chosen = {degree} | {d for d in exps if rng.random() < 0.5}
    for d in sorted(chosen):
        e = [0] * (2 * n)
        e[var] = d
        terms[tuple(e)] = _coeff(rng, bound, integer_only)
    return Transvection(target, Poly(2 * n, terms))


def random_word(rng, spec):
    n = spec.n
    length = rng.randint(*spec.word_length)
    factors = []
    budget = spec.degree_cap
    for _ in range(length):
        if rng.random() < 0.3:
            factors.append(Linear(random_symplectic_matrix(rng, n, 2)))
            continue
        top = min(spec.degree[1], budget)
        low = min(max(spec.degree[0], 1), top)
        d = rng.randint(low, top)
        if d == 1:
            factors.append(Linear(random_symplectic_matrix(rng, n, 2, steps=1)))
            continue
        factors.append(random_transvection(rng, n, d, spec.coeff_bound, spec.integer_only))
        budget //= d
    return TameWord(factors, 2 * n)


def word_corpus(spec, count):
    rng = random.Random(spec.seed)
    return [random_word(rng, spec) for _ in range(count)]


def mixed_word_corpus(seed, count, ns=(1, 2), **kwargs):
    """Corpus alternating over the half-dimensions in ``ns``."""
    rng = random.Random(seed)
    words = []
    for i in range(count):
        spec = CorpusSpec(seed=seed, n=ns[i % len(ns)], **kwargs)
        words.append(random_word(rng, spec))
    return words


def random_poly(rng, nvars, max_degree, terms=4, bound=3, integer_only=False, min_degree=0):
    out = {}
    for _ in range(terms):
        d = rng.randint(min_degree, max_degree)
        e = [0] * nvars
        for _ in range(d):
            e[rng.randrange(nvars)] += 1
        out[tuple(e)] = _coeff(rng, bound, integer_only)
    return Poly(nvars, out)


def random_hbar_poly(rng, nvars, max_degree, terms=4, hbar_degree=1, bound=3):
    coeffs = {k: random_poly(rng, nvars, max_degree, terms, bound) for k in range(hbar_degree + 1)}
    return HbarPoly(coeffs, nvars)


def monomial_flow(rng, n, degree, bound=2):
    """Exact time-one flow of ``c * m`` with ``m`` a monomial in x's only or p's only."""
    P = PoissonStructure(n)
    half = rng.randrange(2)
    e = [0] * (2 * n)
    for _ in range(degree):
        e[half * n + rng.randrange(n)] += 1
    c = rng.choice([k for k in range(-bound, bound + 1) if k])
    return hamiltonian_shear(P, Poly(2 * n, {tuple(e): c}))


def near_identity_symplecto(rng, n, flows=(2, 3), degrees=(3, 4)):
    """Composite of monomial Hamiltonian shears; linear part is the identity."""
    count = rng.randint(*flows)
    sigma = Endo.identity(2 * n)
    for _ in range(count):
        sigma = endo_compose(sigma, monomial_flow(rng, n, rng.randint(*degrees)))
    return sigma
