"""Terminating star products on P_n and lifting of tame symplectomorphisms."""

from enum import Enum
from fractions import Fraction
from itertools import product
from math import factorial

from .errors import ArityMismatch, FormatError, IndexOutOfRange, NotSymplectic, RingMismatch
from .poly import Poly
from .rings import QQ
from .symplectic import (Endo, Linear, PoissonStructure, TameWord, elementary_is_symplectic,
                         tame_invert)
from .weyl import WeylAuto, WeylElt


class StarOrdering(Enum):
    NORMAL = "normal"
    MOYAL = "moyal"


class HbarPoly:
    """``sum_k hbar^k f_k`` with commutative polynomial coefficients ``f_k``."""

    __slots__ = ("nvars", "ring", "coeffs")

    def __init__(self, coeffs, nvars=None, ring=QQ):
        clean = {}
        for k, f in dict(coeffs).items():
            k = int(k)
            if k < 0:
                raise FormatError("negative hbar power")
            if nvars is None:
                nvars, ring = f.nvars, f.ring
            if f.nvars != nvars:
                raise ArityMismatch(f"coefficient arity {f.nvars} vs {nvars}")
            if f.ring != ring:
                raise RingMismatch(f"coefficient ring {f.ring} vs {ring}")
            if not f.is_zero():
                clean[k] = clean[k] + f if k in clean else f
                if clean[k].is_zero():
                    del clean[k]
        if nvars is None:
            raise ArityMismatch("empty HbarPoly needs nvars")
        if nvars % 2:
            raise ArityMismatch("HbarPoly lives on an even number of variables")
        self.nvars = nvars
        self.ring = ring
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def from_poly(cls, f, power=0):
        return cls({power: f}, f.nvars, f.ring)

    @classmethod
    def zero(cls, nvars, ring=QQ):
        return cls({}, nvars, ring)

    @property
    def n(self):
        return self.nvars // 2

    def coefficient(self, k):
        return self.coeffs.get(k, Poly.zero(self.nvars, self.ring))

    def hbar_degree(self):
        return max(self.coeffs, default=-1)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = HbarPoly.from_poly(other)
        return (isinstance(other, HbarPoly) and self.nvars == other.nvars
                and self.ring == other.ring and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.nvars, tuple(self.coeffs.items())))

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, f in other.coeffs.items():
            out[k] = out[k] + f if k in out else f
        return HbarPoly(out, self.nvars, self.ring)

    def __neg__(self):
        return HbarPoly({k: -f for k, f in self.coeffs.items()}, self.nvars, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return HbarPoly({k: f.scale(c) for k, f in self.coeffs.items()}, self.nvars, self.ring)

    def shift(self, power):
        return HbarPoly({k + power: f for k, f in self.coeffs.items()}, self.nvars, self.ring)

    def map(self, fn):
        return HbarPoly({k: fn(f) for k, f in self.coeffs.items()}, self.nvars, self.ring)

    def commutative_mul(self, other):
        out = {}
        for a, f in self.coeffs.items():
            for b, g in other.coeffs.items():
                h = f * g
                out[a + b] = out[a + b] + h if a + b in out else h
        return HbarPoly(out, self.nvars, self.ring)

    def to_weyl(self, order=None):
        """Normal-order quantisation (identity on exponent data)."""
        terms = {}
        for k, f in self.coeffs.items():
            for e, c in f.terms.items():
                terms[e + (k,)] = c
        return WeylElt(self.n, terms, self.ring, True, order)

    @classmethod
    def from_weyl(cls, u):
        if not u.hbar:
            raise RingMismatch("symbol map needs an hbar-algebra element")
        return cls(u.symbol(), 2 * u.n, u.ring)

    def format(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, f in self.coeffs.items():
            s = f.format()
            if k == 0:
                parts.append(s)
                continue
            h = "h" if k == 1 else f"h^{k}"
            if s == "1":
                parts.append(h)
            elif s == "-1":
                parts.append("-" + h)
            else:
                parts.append(f"{h}*({s})")
        return " + ".join(parts)

    def __repr__(self):
        return f"HbarPoly({self.format()!r})"

    def to_json(self):
        return {"n": self.n, "coeffs": {str(k): f.to_json() for k, f in self.coeffs.items()}}

    @classmethod
    def from_json(cls, data):
        try:
            n = int(data["n"])
            coeffs = {int(k): Poly.from_json(v) for k, v in data["coeffs"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed HbarPoly JSON: {exc}") from exc
        return cls(coeffs, 2 * n)


def _as_hbar(f):
    return HbarPoly.from_poly(f) if isinstance(f, Poly) else f


def _multi_derivative(f, counts):
    for i, k in enumerate(counts):
        for _ in range(k):
            f = f.derivative(i)
            if f.is_zero():
                return f
    return f


def _multi_indices(n, bound):
    """All ``gamma`` in ``N^n`` with each ``gamma_i <= bound[i]``."""
    return product(*(range(b + 1) for b in bound))


def _max_degrees(f):
    """Per-variable maximum exponents across all hbar coefficients."""
    top = [0] * f.nvars
    for g in f.coeffs.values():
        for e in g.terms:
            top = [max(a, b) for a, b in zip(top, e)]
    return top


def star(f, g, ordering=StarOrdering.NORMAL):
    """Star product of two HbarPoly (or Poly) values.

    NORMAL: ``sum_gamma hbar^|gamma| / gamma! (d_p^gamma f)(d_x^gamma g)``.
    MOYAL: ``exp((hbar/2) sum_i (d_{p_i} (x) d_{x_i} - d_{x_i} (x) d_{p_i}))``.
    """
    f, g = _as_hbar(f), _as_hbar(g)
    if f.nvars != g.nvars:
        raise ArityMismatch(f"arity {f.nvars} vs {g.nvars}")
    if f.ring != g.ring:
        raise RingMismatch(f"ring {f.ring} vs {g.ring}")
    ordering = StarOrdering(ordering)
    n = f.n
    fmax, gmax = _max_degrees(f), _max_degrees(g)
    out = HbarPoly.zero(f.nvars, f.ring)
    if ordering is StarOrdering.NORMAL:
        # d_p on the left meets d_x on the right
        bound = [min(fmax[n + i], gmax[i]) for i in range(n)]
        for gamma in _multi_indices(n, bound):
            left_counts = [0] * n + list(gamma)
            right_counts = list(gamma) + [0] * n
            weight = Fraction(1)
            for k in gamma:
                weight /= factorial(k)
            df = f.map(lambda h: _multi_derivative(h, left_counts))
            dg = g.map(lambda h: _multi_derivative(h, right_counts))
            if df.is_zero() or dg.is_zero():
                continue
            out = out + df.commutative_mul(dg).scale(weight).shift(sum(gamma))
        return out
    bound_a = [min(fmax[n + i], gmax[i]) for i in range(n)]
    bound_b = [min(fmax[i], gmax[n + i]) for i in range(n)]
    for gamma in _multi_indices(n, bound_a):
        for delta in _multi_indices(n, bound_b):
            left_counts = list(delta) + list(gamma)
            right_counts = list(gamma) + list(delta)
            order = sum(gamma) + sum(delta)
            weight = Fraction((-1) ** sum(delta), 2 ** order)
            for k in gamma + delta:
                weight /= factorial(k)
            df = f.map(lambda h: _multi_derivative(h, left_counts))
            dg = g.map(lambda h: _multi_derivative(h, right_counts))
            if df.is_zero() or dg.is_zero():
                continue
            out = out + df.commutative_mul(dg).scale(weight).shift(order)
    return out


def ordering_transform(f, direction="moyal_to_normal"):
    """Apply ``T = exp((hbar/2) sum_i d^2/dx_i dp_i)`` or its inverse.

    ``moyal_to_normal`` applies T: ``T(a *_M b) = T(a) *_N T(b)``.
    """
    f = _as_hbar(f)
    if direction in ("moyal_to_normal", "to_normal", "forward"):
        sign = 1
    elif direction in ("normal_to_moyal", "to_moyal", "inverse"):
        sign = -1
    else:
        raise ValueError(f"unknown direction {direction!r}")
    n = f.n
    fmax = _max_degrees(f)
    bound = [min(fmax[i], fmax[n + i]) for i in range(n)]
    out = HbarPoly.zero(f.nvars, f.ring)
    for gamma in _multi_indices(n, bound):
        counts = list(gamma) + list(gamma)
        k = sum(gamma)
        weight = Fraction(sign ** k, 2 ** k)
        for m in gamma:
            weight /= factorial(m)
        df = f.map(lambda h: _multi_derivative(h, counts))
        if not df.is_zero():
            out = out + df.scale(weight).shift(k)
    return out


# lifting --------------------------------------------------------------------

def _check_symplectic(P, e):
    if not elementary_is_symplectic(P, e):
        raise NotSymplectic(f"factor {e!r} is not symplectic")


def lift_elementary(e, P=None, order=None):
    """Weyl automorphism with the same defining data as a symplectic factor."""
    n = e.nvars // 2
    P = P or PoissonStructure(n)
    _check_symplectic(P, e)
    gens = WeylElt.gens(n, QQ, True, order)
    if isinstance(e, Linear):
        images = []
        for row in e.matrix:
            img = WeylElt.zero(n, QQ, True, order)
            for c, g in zip(row, gens):
                if c:
                    img = img + g.scale(c)
            images.append(img)
        return WeylAuto(images)
    images = list(gens)
    images[e.target] = images[e.target] + WeylElt.from_poly(e.poly, order=order)
    return WeylAuto(images)


def lift_tame(w, P=None, order=None):
    """Composite of lifted factors, in word order."""
    n = w.nvars // 2
    P = P or PoissonStructure(n)
    if w.ring != QQ:
        raise RingMismatch("lifting is defined for rational words; reduce afterwards")
    result = WeylAuto.identity(n, QQ, True, order)
    for e in reversed(w.factors):
        lifted = lift_elementary(e, P, order)
        result = lifted.compose(result)
    return result


def classical_limit(psi):
    """``hbar -> 0`` part of every image, as commutative polynomials."""
    return Endo([u.hbar_coefficient(0) for u in psi.images])


def hbar_coefficient(psi, l, k):
    if not 0 <= l < len(psi.images):
        raise IndexOutOfRange(f"image index {l} outside 0..{len(psi.images) - 1}")
    if k < 0:
        raise IndexOutOfRange("negative hbar power")
    return psi.images[l].hbar_coefficient(k)


def transported_star(w, f, g, ordering=StarOrdering.NORMAL, P=None):
    """``f *_sigma g = Psi^{-1}(Psi(f) * Psi(g))`` for the lift ``Psi`` of ``w``.

    ``Psi`` acts on normal-order quantisations; the inverse comes from the
    inverted word.  For the Moyal ordering the product is conjugated by the
    ordering transform.
    """
    f, g = _as_hbar(f), _as_hbar(g)
    ordering = StarOrdering(ordering)
    if ordering is StarOrdering.MOYAL:
        f = ordering_transform(f, "moyal_to_normal")
        g = ordering_transform(g, "moyal_to_normal")
    psi = lift_tame(w, P)
    psi_inv = lift_tame(tame_invert(w), P)
    prod = psi.apply(f.to_weyl()).mul(psi.apply(g.to_weyl()))
    out = HbarPoly.from_weyl(psi_inv.apply(prod))
    if ordering is StarOrdering.MOYAL:
        out = ordering_transform(out, "normal_to_moyal")
    return out
