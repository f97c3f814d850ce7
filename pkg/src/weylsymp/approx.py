"""Tame approximation of near-identity polynomial symplectomorphisms.

Loop: strip the linear part, take the lowest homogeneous deviation of the
residual, integrate it to a Hamiltonian, write the Hamiltonian as a sum of
powers of linear forms and append the exact flow of every power as a short
tame word.  Each round raises the residual height by at least one.
"""

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (AlgebraError, IsIdentity, NonHamiltonian, NotHomogeneous,
                     NotSymplecticLinear, SamplerExhausted, ZeroForm, RingMismatch)
from .poly import INF, Poly
from .rings import QQ
from .symplectic import (Endo, Linear, PoissonStructure, TameWord, compose_word_with, merge_linear,
                         poisson_bracket, symplectic_transvection, tame_invert)


@dataclass(frozen=True)
class Deviation:
    height: int
    vector: tuple

    def __post_init__(self):
        if all(f.is_zero() for f in self.vector):
            raise IsIdentity("deviation vector is zero")
        if any(not f.is_zero() and (f.height() != self.height or not f.is_homogeneous())
               for f in self.vector):
            raise NotHomogeneous(f"deviation components must be homogeneous of degree {self.height}")


@dataclass(frozen=True)
class WaringDecomp:
    """``H = sum c * l^d`` with ``l`` given by its coefficient vector."""

    degree: int
    terms: tuple

    def expand(self, nvars):
        out = Poly.zero(nvars)
        for c, form in self.terms:
            out = out + linear_form(form).pow(self.degree).scale(c)
        return out


@dataclass
class ApproxResult:
    word: TameWord
    achieved_height: float
    target: int
    seed: int
    lower_bound: bool = False
    round_heights: list = field(default_factory=list)
    partial_words: list = field(default_factory=list)

    def partial_word(self, k):
        """First partial word whose residual height exceeds ``k``."""
        for h, w in zip(self.round_heights, self.partial_words):
            if h > k:
                return w
        if self.achieved_height > k:
            return self.word
        raise AlgebraError(f"no partial word reaches height {k}")

    def to_json(self):
        h = self.achieved_height
        out = {"word": self.word.to_json(),
               "achieved_height": "inf" if h == INF else int(h),
               "target": self.target, "seed": self.seed}
        if self.lower_bound:
            out["lower_bound"] = True
        return out


def linear_form(coeffs):
    nvars = len(coeffs)
    return Poly(nvars, {tuple(int(i == j) for j in range(nvars)): c
                        for i, c in enumerate(coeffs) if c})


def _identity_rows(size):
    return [[QQ(int(i == j)) for j in range(size)] for i in range(size)]


def linear_part(sigma):
    """Degree-one coefficient matrix (rows = images); must lie in Sp(2n)."""
    if sigma.ring != QQ:
        raise RingMismatch("approximation works over Q")
    size = sigma.nvars
    if size % 2:
        raise NotSymplecticLinear("odd number of variables")
    zero = (0,) * size
    if any(f.coeff(zero) for f in sigma.images):
        raise AlgebraError("translations are excluded: constant part must vanish")
    rows = []
    for f in sigma.images:
        rows.append([QQ(f.coeff(tuple(int(i == j) for j in range(size)))) for i in range(size)])
    if not linalg.is_symplectic_matrix(rows, size // 2):
        raise NotSymplecticLinear("linear part is not symplectic")
    return rows


def deviation(sigma):
    """Lowest homogeneous part of ``sigma - id`` (linear part must be the identity)."""
    size = sigma.nvars
    diff = sigma - Endo.identity(size, sigma.ring)
    k = diff.height()
    if k == INF:
        raise IsIdentity("map is the identity")
    if k < 2:
        raise AlgebraError("linear part must be the identity and the constant part zero")
    return Deviation(k, tuple(f.homogeneous_component(k) for f in diff.images))


def hamiltonian_of(d, P):
    """Homogeneous ``H`` of degree ``k+1`` with ``{H, v} = d_v`` for every generator ``v``."""
    n = P.n
    k = d.height
    vec = d.vector
    if len(vec) != P.nvars:
        raise AlgebraError("deviation and structure disagree on arity")
    gens = Poly.gens(P.nvars)
    # dH/dp_i = d_{x_i}, dH/dx_i = -d_{p_i}; Euler's formula integrates a closed form
    H = Poly.zero(P.nvars)
    for i in range(n):
        H = H + gens[i + n] * vec[i] - gens[i] * vec[i + n]
    H = H.scale(Fraction(1, k + 1))
    for v, target in zip(gens, vec):
        if poisson_bracket(P, H, v) != target:
            raise NonHamiltonian("deviation is not a Hamiltonian vector field")
    return H


def _monomials(nvars, d):
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def _multinomial_power(form, e, d):
    c = math.factorial(d)
    for k in e:
        c //= math.factorial(k)
    for a, k in zip(form, e):
        c *= a ** k
    return c


def _decompose_group(terms, support, d, rng, max_rounds):
    """Sampler for the part of H supported on ``support``; returns [(c, form)]."""
    m = len(support)
    basis = list(_monomials(m, d))
    index = {e: r for r, e in enumerate(basis)}
    rhs = [0] * len(basis)
    for e, c in terms.items():
        rhs[index[tuple(e[v] for v in support)]] = c
    count = len(basis) + 2
    bound = 1
    for _ in range(max_rounds):
        forms = []
        seen = set()
        while len(forms) < count:
            f = tuple(rng.randint(-bound, bound) for _ in range(m))
            if any(f) and f not in seen and tuple(-a for a in f) not in seen:
                seen.add(f)
                forms.append(f)
            elif len(seen) >= (2 * bound + 1) ** m // 2:
                bound += 1
        cols = [[_multinomial_power(f, e, d) for e in basis] for f in forms]
        sol = linalg.solve_rational(cols, rhs)
        if sol is not None:
            return [(c, f) for c, f in zip(sol, forms) if c]
        count += len(basis)
        bound += 1
    return None


def waring(H, seed=0, max_rounds=8):
    """Exact decomposition ``H = sum c * l^d`` with small integer forms ``l``.

    Terms of H are grouped by their variable support and each group is solved
    over its own variables; pure powers are returned as they are.
    """
    if H.ring != QQ:
        raise RingMismatch("decomposition works over Q")
    if H.is_zero():
        return WaringDecomp(0, ())
    if not H.is_homogeneous():
        raise NotHomogeneous("form must be homogeneous")
    d = H.degree()
    nvars = H.nvars
    rng = random.Random(seed)
    groups = {}
    for e, c in H.items():
        support = tuple(i for i, k in enumerate(e) if k)
        groups.setdefault(support, {})[e] = c
    # merge subsets into supersets so every group is solved once
    supports = sorted(groups, key=len, reverse=True)
    merged = {}
    for s in supports:
        home = next((t for t in merged if set(s) <= set(t)), s)
        merged.setdefault(home, {}).update(groups[s])
    out = []
    for support, terms in sorted(merged.items()):
        if len(support) == 1:
            (e, c), = terms.items()
            out.append((c, tuple(int(i == support[0]) for i in range(nvars))))
            continue
        part = _decompose_group(terms, support, d, rng, max_rounds)
        if part is None:
            raise SamplerExhausted(f"no decomposition found (seed {seed})", seed=seed)
        for c, f in part:
            full = [0] * nvars
            for v, a in zip(support, f):
                full[v] = a
            out.append((c, tuple(full)))
    dec = WaringDecomp(d, tuple(out))
    if dec.expand(nvars) != H:
        raise AlgebraError("decomposition failed verification")
    return dec


def flow_word(c, form, d, P):
    """Tame word whose evaluation is the time-one flow of ``c * l^d``."""
    n = P.n
    form = [QQ(a) for a in form]
    if len(form) != P.nvars:
        raise AlgebraError("form arity does not match the structure")
    support = [i for i, a in enumerate(form) if a]
    if not support:
        raise ZeroForm("linear form is zero")
    gens = Poly.gens(P.nvars)
    if len(support) == 1:
        v = support[0]
        a = form[v]
        coef = QQ(Fraction(c) * Fraction(a) ** d * d)
        mono = gens[v].pow(d - 1)
        if v < n:
            # {c v^d, p_v} = -c d v^(d-1)
            return TameWord([symplectic_transvection(n, v + n, mono.scale(-coef))], P.nvars)
        return TameWord([symplectic_transvection(n, v - n, mono.scale(coef))], P.nvars)
    s = linalg.symplectic_completion(form, n)
    e = symplectic_transvection(n, n, gens[0].pow(d - 1).scale(QQ(-Fraction(c) * d)))
    return TameWord([Linear(linalg.inverse(s)), e, Linear(s)], P.nvars)


def _residual_height(r):
    return (r - Endo.identity(r.nvars)).height()


def approximate(sigma, K, seed=0, exact_limit=64):
    """Tame word ``tau`` with ``Ht(tau^{-1} o sigma - id) > K``.

    Residual terms above degree ``K + 1`` are dropped; the final certificate
    is recomputed from the word alone, exactly when the degree bound is at most
    ``exact_limit`` and otherwise truncated (``lower_bound`` is then set when no
    deviation is visible below the cap).
    """
    size = sigma.nvars
    P = PoissonStructure(size // 2)
    a = linear_part(sigma)
    cap = K + 1
    factors = []
    if a != _identity_rows(size):
        factors.append(Linear(a))
    word = TameWord(factors, size)
    residual = compose_word_with(tame_invert(word), sigma, cap)
    heights = [_residual_height(residual)]
    partials = [word]
    rnd = 0
    while heights[-1] <= K:
        dev = deviation(residual)
        H = hamiltonian_of(dev, P)
        dec = waring(H, seed * 1000003 + rnd)
        factors = []
        for c, form in dec.terms:
            factors += flow_word(c, form, dec.degree, P).factors
        step = TameWord(merge_linear(factors), size)
        word = TameWord(merge_linear(word.factors + step.factors), size)
        residual = compose_word_with(tame_invert(step), residual, cap)
        h = _residual_height(residual)
        if h <= heights[-1]:
            raise AlgebraError(f"residual height did not increase ({heights[-1]} -> {h})")
        heights.append(h)
        partials.append(word)
        rnd += 1
    achieved, lower = certificate(word, sigma, K, exact_limit)
    return ApproxResult(word, achieved, K, seed, lower, heights, partials)


def certificate(word, sigma, K, exact_limit=64):
    """``(height, is_lower_bound)`` of ``tau^{-1} o sigma - id`` from scratch."""
    bound = word.degree_bound() * max(1, sigma.degree())
    if bound <= exact_limit:
        return _residual_height(compose_word_with(tame_invert(word), sigma)), False
    cap = K + 1
    h = _residual_height(compose_word_with(tame_invert(word), sigma, cap))
    if h == INF:
        return cap + 1, True
    return h, False
