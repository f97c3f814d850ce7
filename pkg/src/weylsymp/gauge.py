"""Gauge conjugation of truncated hbar-series automorphisms and the n=1 normalisation."""

from fractions import Fraction

from .errors import ArityMismatch, FormatError, GaugeOrderError, PreconditionX, AlgebraError
from .poly import Poly
from .rings import QQ
from .weyl import WeylAuto, WeylElt, weyl_auto_check


class TruncatedAuto(WeylAuto):
    """Weyl automorphism whose images are computed modulo ``hbar^(K+1)``."""

    __slots__ = ()

    def __init__(self, images, K=None):
        images = list(images)
        if K is None:
            K = images[0].order
        if K is None:
            raise ArityMismatch("truncated automorphism needs an order K")
        super().__init__([u.with_order(K) if u.order != K else u for u in images])

    @property
    def K(self):
        return self.order

    @classmethod
    def from_auto(cls, psi, K):
        return cls([u.with_order(K) for u in psi.images], K)

    def relations_hold(self):
        return weyl_auto_check(self)

    @classmethod
    def from_json(cls, data):
        if "K" not in data:
            raise FormatError("truncated automorphism JSON needs K")
        psi = WeylAuto.from_json(data)
        return cls(psi.images, int(data["K"]))


def _unit_inverse(u, K):
    """Inverse of a unit ``1 + hbar*R`` as the finite geometric series."""
    one = WeylElt.one(u.n, u.ring, True, K)
    d = u - one
    if d.hbar_valuation() is not None and d.hbar_valuation() < 1:
        raise AlgebraError("unit is not unipotent in hbar")
    out = one
    term = one
    for _ in range(K):
        term = -(term.mul(d))
        if term.is_zero():
            break
        out = out + term
    return out


def gauge_unit(Q, K):
    """``1 + hbar*Q`` truncated at order K."""
    Q = Q.with_order(K)
    return WeylElt.one(Q.n, Q.ring, True, K) + Q.shift_hbar(1)


def conjugate_by_unit(psi, u, K):
    u = u.with_order(K)
    u_inv = _unit_inverse(u, K)
    return TruncatedAuto([u.mul(img.with_order(K)).mul(u_inv) for img in psi.images], K)


def gauge_conjugate(psi, Q, K=None):
    """``(1 + hbar Q) Psi_l (1 + hbar Q)^{-1}`` for every image, modulo ``hbar^(K+1)``."""
    K = psi.order if K is None else K
    if Q.n != psi.n:
        raise ArityMismatch(f"gauge in W_{Q.n} for automorphism of W_{psi.n}")
    return conjugate_by_unit(psi, gauge_unit(Q, K), K)


def _check_n1(psi):
    if psi.n != 1:
        raise ArityMismatch("the normalisation is implemented for n = 1 only")
    X = WeylElt.gen(1, 0, psi.ring, True, psi.order)
    if psi.images[0] != X:
        raise PreconditionX("image of x must be x itself")


def defect_order(psi):
    """Least ``k >= 1`` whose ``hbar^k`` part of ``Psi(y)`` has a y-free monomial."""
    _check_n1(psi)
    ks = sorted({key[2] for key in psi.images[1].terms if key[2] >= 1 and key[1] == 0})
    return ks[0] if ks else None


def _primitive_in_x(c):
    """x-primitive with zero constant term of a polynomial in x only."""
    out = {}
    for (a, b), v in c.terms.items():
        out[(a + 1, b)] = QQ(Fraction(v) / (a + 1))
    return Poly(2, out, c.ring)


def normalize(psi, K=None):
    """Remove y-free terms from ``Psi(y)`` order by order.

    Returns ``(gauges, psi')`` where ``gauges`` lists the ``Q`` used at each
    step.  Each step takes the y-free part ``c(x)`` at the current defect
    order ``k`` and conjugates by ``1 + hbar * hbar^(k-2) q(x)``, ``q' = c``.
    """
    K = psi.order if K is None else K
    psi = TruncatedAuto.from_auto(psi, K)
    gauges, orders = [], []
    k = defect_order(psi)
    while k is not None:
        if k < 2:
            raise GaugeOrderError("a y-free term at order hbar^1 cannot be removed by 1 + hbar Q")
        sym = psi.images[1].hbar_coefficient(k)
        c = Poly(2, {e: v for e, v in sym.terms.items() if e[1] == 0}, sym.ring)
        q = _primitive_in_x(c)
        Q = WeylElt.from_poly(q, hbar_power=k - 2, order=K)
        psi = gauge_conjugate(psi, Q, K)
        gauges.append(Q)
        orders.append(k)
        nxt = defect_order(psi)
        if nxt is not None and nxt <= k:
            raise AlgebraError(f"defect order did not increase ({k} -> {nxt})")
        k = nxt
    normalize.last_orders = orders
    return gauges, psi


def normalize_trace(psi, K=None):
    """Like :func:`normalize` but also returns the defect order before each step."""
    gauges, out = normalize(psi, K)
    return gauges, out, list(normalize.last_orders)


def planted_defect_auto(rng, K=6, orders=(2, 3, 4), max_degree=3, bound=3):
    """``x -> x``, ``y -> y + sum_k hbar^k c_k(x)`` with random nonzero ``c_k``."""
    X, Y = WeylElt.gens(1, QQ, True, K)
    img = Y
    for k in orders:
        terms = {}
        for d in range(rng.randint(0, max_degree) + 1):
            if rng.random() < 0.7 or not terms:
                c = rng.choice([v for v in range(-bound, bound + 1) if v])
                terms[(d, 0, k)] = QQ(Fraction(c, rng.choice([1, 2])))
        img = img + WeylElt(1, terms, QQ, True, K)
    return TruncatedAuto([X, img], K)
