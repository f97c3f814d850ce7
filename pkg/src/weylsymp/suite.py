"""Seeded property suite shared by the CLI ``suite`` command and the tests."""

import random
from dataclasses import dataclass

from . import corpus
from .approx import approximate
from .gauge import defect_order, gauge_conjugate, normalize_trace, planted_defect_auto
from .parse import parse_poly
from .poly import Poly
from .rings import GF
from .star import (StarOrdering, classical_limit, lift_tame, ordering_transform, star)
from .symplectic import (Endo, PoissonStructure, elementary_is_symplectic, endo_compose,
                         height_of, is_symplectomorphism, jacobian_is_unit_constant,
                         poisson_bracket, tame_evaluate, tame_invert)
from .weyl import (WeylElt, induced_poisson_bracket, is_central, restrict_to_center,
                   weyl_auto_check)


def _word(rng, n=None, integer_only=False):
    n = n or rng.choice((1, 2))
    spec = corpus.CorpusSpec(n=n, integer_only=integer_only, word_length=(1, 4))
    return corpus.random_word(rng, spec)


def prop_poly_ring_laws(rng):
    f, g, h = (corpus.random_poly(rng, 4, 3) for _ in range(3))
    return (f * g == g * f and (f * g) * h == f * (g * h) and f * (g + h) == f * g + f * h)


def prop_parse_round_trip(rng):
    f = corpus.random_poly(rng, 4, 4, terms=5)
    return parse_poly(f.format(), 4) == f


def prop_json_round_trip(rng):
    f = corpus.random_poly(rng, 2, 4)
    return Poly.from_json(f.to_json()) == f


def prop_word_symplectic(rng):
    w = _word(rng)
    phi = tame_evaluate(w)
    P = PoissonStructure(w.nvars // 2)
    return (all(elementary_is_symplectic(P, e) for e in w)
            and is_symplectomorphism(P, phi) and jacobian_is_unit_constant(phi))


def prop_word_inverse(rng):
    w = _word(rng)
    ident = Endo.identity(w.nvars)
    return endo_compose(tame_evaluate(w), tame_evaluate(tame_invert(w))) == ident


def prop_bracket_antisymmetry(rng):
    P = PoissonStructure(2)
    f, g = corpus.random_poly(rng, 4, 3), corpus.random_poly(rng, 4, 3)
    return poisson_bracket(P, f, g) == -poisson_bracket(P, g, f)


def prop_weyl_associative(rng):
    n = rng.choice((1, 2))
    a, b, c = (WeylElt.from_poly(corpus.random_poly(rng, 2 * n, 3, terms=3)) for _ in range(3))
    return (a * b) * c == a * (b * c)


def prop_star_associative(rng):
    n = rng.choice((1, 2))
    ordering = rng.choice(list(StarOrdering))
    f, g, h = (corpus.random_poly(rng, 2 * n, 3, terms=3) for _ in range(3))
    return star(star(f, g, ordering), h, ordering) == star(f, star(g, h, ordering), ordering)


def prop_star_first_order(rng):
    n = rng.choice((1, 2))
    f, g = corpus.random_poly(rng, 2 * n, 3), corpus.random_poly(rng, 2 * n, 3)
    comm = star(f, g, StarOrdering.MOYAL) - star(g, f, StarOrdering.MOYAL)
    return comm.coefficient(1) == poisson_bracket(PoissonStructure(n), f, g)


def prop_ordering_intertwines(rng):
    n = rng.choice((1, 2))
    f, g = corpus.random_poly(rng, 2 * n, 3), corpus.random_poly(rng, 2 * n, 3)
    lhs = ordering_transform(star(f, g, StarOrdering.MOYAL))
    rhs = star(ordering_transform(f), ordering_transform(g), StarOrdering.NORMAL)
    return lhs == rhs


def prop_lift_round_trip(rng):
    w = _word(rng)
    psi = lift_tame(w)
    return classical_limit(psi) == tame_evaluate(w) and weyl_auto_check(psi)


def prop_center_powers(rng):
    p = rng.choice((2, 3, 5))
    n = rng.choice((1, 2))
    gens = WeylElt.gens(n, GF(p), hbar=False)
    i, j = rng.randrange(n), rng.randrange(n)
    X, Y = gens[i].pow(p), gens[n + j].pow(p)
    br = induced_poisson_bracket(Y, X, p)
    return is_central(X) and is_central(Y) and br == Poly.const(2 * n, int(i == j), GF(p))


def prop_center_restriction_functorial(rng):
    p = rng.choice((2, 3))
    w1, w2 = _word(rng, 1, True), _word(rng, 1, True)
    lhs = restrict_to_center(lift_tame(w1 + w2).specialize(GF(p)))
    a = restrict_to_center(lift_tame(w1).specialize(GF(p)))
    b = restrict_to_center(lift_tame(w2).specialize(GF(p)))
    return lhs == endo_compose(a, b)


def prop_gauge_relations(rng):
    K = 5
    psi = lift_tame(_word(rng, 1), order=K)
    Q = WeylElt.from_poly(corpus.random_poly(rng, 2, 3, terms=3), order=K)
    return weyl_auto_check(gauge_conjugate(psi, Q, K))


def prop_normalize(rng):
    psi = planted_defect_auto(rng)
    gauges, out, orders = normalize_trace(psi)
    return (defect_order(out) is None and weyl_auto_check(out)
            and all(a < b for a, b in zip(orders, orders[1:])))


def prop_approximation(rng):
    n = rng.choice((1, 2))
    sigma = corpus.near_identity_symplecto(rng, n)
    res = approximate(sigma, 5, seed=rng.randrange(1 << 30))
    return res.achieved_height > 5


@dataclass(frozen=True)
class Property:
    name: str
    fn: object
    cases: int


PROPERTIES = [
    Property("algebra-kernel.ring_laws", prop_poly_ring_laws, 20),
    Property("algebra-kernel.parse_round_trip", prop_parse_round_trip, 20),
    Property("algebra-kernel.json_round_trip", prop_json_round_trip, 20),
    Property("symplectic.bracket_antisymmetry", prop_bracket_antisymmetry, 20),
    Property("symplectic.word_symplectic", prop_word_symplectic, 20),
    Property("symplectic.word_inverse", prop_word_inverse, 20),
    Property("weyl.associativity", prop_weyl_associative, 20),
    Property("weyl.center_powers", prop_center_powers, 20),
    Property("weyl.center_restriction_functorial", prop_center_restriction_functorial, 10),
    Property("star-lift.associativity", prop_star_associative, 20),
    Property("star-lift.first_order_bracket", prop_star_first_order, 20),
    Property("star-lift.ordering_intertwines", prop_ordering_intertwines, 20),
    Property("star-lift.lift_round_trip", prop_lift_round_trip, 20),
    Property("gauge.relations_preserved", prop_gauge_relations, 10),
    Property("gauge.normalize", prop_normalize, 10),
    Property("tame-approx.certificate", prop_approximation, 5),
]


def run_suite(seed, scale=1, only=None):
    """Run every property; returns ``[(name, passed, total, first_failure)]``.

    Case ``i`` of property ``k`` uses ``Random(f"{seed}:{name}:{i}")`` so that
    results do not depend on execution order.
    """
    report = []
    for prop in PROPERTIES:
        if only and not prop.name.startswith(only):
            continue
        passed, failure = 0, None
        total = max(1, prop.cases * scale)
        for i in range(total):
            rng = random.Random(f"{seed}:{prop.name}:{i}")
            try:
                ok = prop.fn(rng)
                detail = None if ok else "property returned false"
            except Exception as exc:  # a crash counts as a failing case
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            if ok:
                passed += 1
            elif failure is None:
                failure = {"case": i, "detail": detail}
        report.append((prop.name, passed, total, failure))
    return report


def height_bound_holds(res, sigma, k):
    """``d(tau_k, sigma) <= e^{-k}``, i.e. ``Ht(tau_k - sigma) >= k``."""
    tau = res.partial_word(k)
    return height_of(tame_evaluate(tau, cap=k + 1), sigma.truncate(k + 1)) >= k

