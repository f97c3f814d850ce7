"""Normal-ordered arithmetic in the Weyl algebra and its characteristic-p center.

A :class:`WeylElt` stores ``sum c * x^alpha y^beta hbar^k`` with every ``x``
left of every ``y``.  With ``hbar=True`` the relation is ``[y_i, x_j] = hbar
delta_ij`` (coefficients in the base ring, ``hbar`` tracked in the key,
optionally truncated above order ``K``); with ``hbar=False`` the relation is
``[y_i, x_j] = delta_ij``.
"""

from functools import lru_cache
from itertools import product
from math import comb, factorial

from .errors import (ArityMismatch, BadPrime, FormatError, IndexOutOfRange, NonDivisible,
                     NotCentral, RingMismatch, SingularMatrix)
from . import linalg
from .poly import Poly, evaluate_monomials
from .rings import GF, QQ, Zp2, integer_scaled, ring_from_tag, supports_int_kernel, unscale
from .symplectic import Endo, Linear, TameWord, Transvection


@lru_cache(maxsize=4096)
def _contractions(b, c):
    """Terms of ``y^b x^c`` in normal order: ``[(j, C(b,j) C(c,j) j!)]``."""
    return tuple((j, comb(b, j) * comb(c, j) * factorial(j)) for j in range(min(b, c) + 1))


def _int_mul(ta, tb, n, hbar, order):
    """Normal-ordered product of integer-coefficient term maps."""
    out = {}
    get = out.get
    if n == 1:
        for (a0, b0, ha), ca in ta.items():
            for (g0, d0, hb), cb in tb.items():
                h = ha + hb
                if order is not None and h > order:
                    continue
                base = ca * cb
                xe, ye = a0 + g0, b0 + d0
                for j, wt in _contractions(b0, g0):
                    hk = h + j if hbar else 0
                    if order is not None and hk > order:
                        break
                    key = (xe - j, ye - j, hk)
                    out[key] = get(key, 0) + base * wt
        return out
    for ka, ca in ta.items():
        alpha, beta, ha = ka[:n], ka[n:2 * n], ka[-1]
        for kb, cb in tb.items():
            h = ha + kb[-1]
            if order is not None and h > order:
                continue
            gamma, delta = kb[:n], kb[n:2 * n]
            base = ca * cb
            xe = [alpha[i] + gamma[i] for i in range(n)]
            ye = [beta[i] + delta[i] for i in range(n)]
            tables = [_contractions(beta[i], gamma[i]) for i in range(n)]
            for choice in product(*tables):
                js = [t[0] for t in choice]
                hk = h + sum(js) if hbar else 0
                if order is not None and hk > order:
                    continue
                wt = base
                for t in choice:
                    wt *= t[1]
                key = (tuple(xe[i] - js[i] for i in range(n))
                       + tuple(ye[i] - js[i] for i in range(n)) + (hk,))
                out[key] = get(key, 0) + wt
    return out


class WeylElt:
    __slots__ = ("n", "ring", "hbar", "order", "_terms")

    def __init__(self, n, terms=None, ring=QQ, hbar=True, order=None, *, _trusted=False):
        self.n = n
        self.ring = ring
        self.hbar = hbar
        self.order = order if hbar else None
        if _trusted:
            self._terms = terms
            return
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                key = tuple(int(e) for e in key)
                if len(key) == 2 * n:
                    key = key + (0,)
                if len(key) != 2 * n + 1:
                    raise ArityMismatch(f"Weyl monomial key {key} does not fit n={n}")
                if not hbar and key[-1]:
                    raise RingMismatch("hbar power in an algebra without hbar")
                if self.order is not None and key[-1] > self.order:
                    continue
                c = ring(c)
                if key in clean:
                    c = ring.add(clean[key], c)
                if ring.is_zero(c):
                    clean.pop(key, None)
                else:
                    clean[key] = c
        self._terms = clean

    # constructors ---------------------------------------------------------

    def _like(self, terms):
        return WeylElt(self.n, terms, self.ring, self.hbar, self.order, _trusted=True)

    @classmethod
    def zero(cls, n, ring=QQ, hbar=True, order=None):
        return cls(n, {}, ring, hbar, order, _trusted=True)

    @classmethod
    def const(cls, n, c, ring=QQ, hbar=True, order=None, hbar_power=0):
        return cls(n, {(0,) * (2 * n) + (hbar_power,): c}, ring, hbar, order)

    @classmethod
    def one(cls, n, ring=QQ, hbar=True, order=None):
        return cls.const(n, 1, ring, hbar, order)

    @classmethod
    def gen(cls, n, i, ring=QQ, hbar=True, order=None):
        """Generator ``i``: ``x_{i+1}`` for ``i < n``, ``y_{i-n+1}`` otherwise."""
        if not 0 <= i < 2 * n:
            raise IndexOutOfRange(f"generator index {i} outside 0..{2 * n - 1}")
        key = [0] * (2 * n + 1)
        key[i] = 1
        return cls(n, {tuple(key): ring.one}, ring, hbar, order, _trusted=True)

    @classmethod
    def gens(cls, n, ring=QQ, hbar=True, order=None):
        return [cls.gen(n, i, ring, hbar, order) for i in range(2 * n)]

    @classmethod
    def hbar_elt(cls, n, ring=QQ, order=None, power=1):
        return cls.const(n, 1, ring, True, order, hbar_power=power)

    @classmethod
    def from_poly(cls, f, hbar_power=0, hbar=True, order=None):
        """Normal-order quantisation of a commutative symbol in ``x..., p...``."""
        if f.nvars % 2:
            raise ArityMismatch("symbol must have an even number of variables")
        n = f.nvars // 2
        return cls(n, {e + (hbar_power,): c for e, c in f.terms.items()}, f.ring, hbar, order)

    # access -----------------------------------------------------------------

    @property
    def terms(self):
        return self._terms

    def items(self):
        return sorted(self._terms.items(), reverse=True)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, WeylElt):
            return (self.n == other.n and self.ring == other.ring and self.hbar == other.hbar
                    and self._terms == other._terms)
        if isinstance(other, int):
            return self == WeylElt.const(self.n, other, self.ring, self.hbar, self.order)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.ring, self.hbar, frozenset(self._terms.items())))

    def _check(self, other):
        if not isinstance(other, WeylElt):
            return WeylElt.const(self.n, other, self.ring, self.hbar, self.order)
        if other.n != self.n:
            raise ArityMismatch(f"W_{self.n} vs W_{other.n}")
        if other.ring != self.ring or other.hbar != self.hbar:
            raise RingMismatch(f"{self.ring}/hbar={self.hbar} vs {other.ring}/hbar={other.hbar}")
        return other

    def hbar_valuation(self):
        return min((k[-1] for k in self._terms), default=None)

    def degree(self):
        """Total degree in the generators (hbar not counted)."""
        return max((sum(k[:-1]) for k in self._terms), default=-1)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        ring = self.ring
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = ring.add(out[k], c)
                if ring.is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.neg
        return self._like({k: neg(c) for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        ring = self.ring
        c = ring(c)
        out = {}
        for k, a in self._terms.items():
            v = ring.mul(a, c)
            if not ring.is_zero(v):
                out[k] = v
        return self._like(out)

    def shift_hbar(self, power):
        """Multiply by ``hbar**power``."""
        if not self.hbar:
            raise RingMismatch("no hbar in this algebra")
        order = self.order
        return self._like({k[:-1] + (k[-1] + power,): c for k, c in self._terms.items()
                           if order is None or k[-1] + power <= order})

    def mul(self, other):
        other = self._check(other)
        ring = self.ring
        if supports_int_kernel(ring):
            ta, da = integer_scaled(self._terms)
            tb, db = integer_scaled(other._terms)
            raw = _int_mul(ta, tb, self.n, self.hbar, self.order)
            return self._like(unscale(raw, da * db, ring))
        return self._generic_mul(other)

    def _generic_mul(self, other):
        n = self.n
        ring = self.ring
        add, mul, from_int, is_zero = ring.add, ring.mul, ring.from_int, ring.is_zero
        hbar, order = self.hbar, self.order
        out = {}
        for ka, ca in self._terms.items():
            alpha, beta, ha = ka[:n], ka[n:2 * n], ka[-1]
            for kb, cb in other._terms.items():
                hb = ha + kb[-1]
                if order is not None and hb > order:
                    continue
                gamma, delta = kb[:n], kb[n:2 * n]
                base = mul(ca, cb)
                tables = [_contractions(beta[i], gamma[i]) for i in range(n)]
                for choice in product(*tables):
                    js = [t[0] for t in choice]
                    hk = hb + sum(js) if hbar else 0
                    if order is not None and hk > order:
                        continue
                    weight = 1
                    for t in choice:
                        weight *= t[1]
                    v = mul(base, from_int(weight))
                    if is_zero(v):
                        continue
                    key = (tuple(alpha[i] + gamma[i] - js[i] for i in range(n))
                           + tuple(beta[i] + delta[i] - js[i] for i in range(n)) + (hk,))
                    if key in out:
                        out[key] = add(out[key], v)
                    else:
                        out[key] = v
        return self._like({k: c for k, c in out.items() if not is_zero(c)})

    def __mul__(self, other):
        if isinstance(other, WeylElt):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def pow(self, e):
        result = WeylElt.one(self.n, self.ring, self.hbar, self.order)
        base = self
        while e:
            if e & 1:
                result = result.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return result

    __pow__ = pow

    # conversions ------------------------------------------------------------

    def hbar_coefficient(self, k):
        """Commutative symbol (Poly in ``x..., p...``) of the ``hbar^k`` part."""
        return Poly(2 * self.n, {key[:-1]: c for key, c in self._terms.items() if key[-1] == k},
                    self.ring)

    def symbol(self):
        """``{k: Poly}`` of normal-order symbols by hbar power."""
        out = {}
        for key, c in self._terms.items():
            out.setdefault(key[-1], {})[key[:-1]] = c
        return {k: Poly(2 * self.n, t, self.ring) for k, t in sorted(out.items())}

    def specialize(self, ring, hbar_value=1):
        """Set ``hbar`` to a constant and map coefficients into ``ring``."""
        out = {}
        for key, c in self._terms.items():
            try:
                v = ring.mul(ring(c), ring.pow(ring(hbar_value), key[-1]))
            except ZeroDivisionError as exc:
                raise BadPrime(str(exc)) from exc
            k2 = key[:-1] + (0,)
            out[k2] = ring.add(out.get(k2, ring.zero), v)
        return WeylElt(self.n, out, ring, hbar=False)

    def change_ring(self, ring):
        try:
            return WeylElt(self.n, {k: ring(c) for k, c in self._terms.items()}, ring,
                           self.hbar, self.order)
        except ZeroDivisionError as exc:
            raise BadPrime(str(exc)) from exc

    def with_order(self, order):
        return WeylElt(self.n, self._terms, self.ring, self.hbar, order)

    def substitute(self, images):
        """Image under the algebra map sending generator ``i`` to ``images[i]``."""
        if len(images) != 2 * self.n:
            raise ArityMismatch(f"{len(images)} images for {2 * self.n} generators")
        target = images[0]
        zero = WeylElt.zero(target.n, target.ring, target.hbar, target.order)
        one = WeylElt.one(target.n, target.ring, target.hbar, target.order)
        total = zero
        # group by hbar power: hbar is central
        by_h = {}
        for key, c in self._terms.items():
            by_h.setdefault(key[-1], {})[key[:-1]] = c
        for h, terms in by_h.items():
            part = evaluate_monomials(terms, images, target.n, target.ring,
                                      mul=lambda a, b: a.mul(b), one=one, zero=zero,
                                      scale=lambda a, c: a.scale(c))
            total = total + (part.shift_hbar(h) if h else part)
        return total

    # text / JSON -------------------------------------------------------------

    def format(self):
        n = self.n
        names = [f"X{i}" for i in range(1, n + 1)] + [f"Y{i}" for i in range(1, n + 1)] + ["h"]
        if not self._terms:
            return "0"
        pieces = []
        for key, c in self.items():
            mono = "*".join(names[i] if k == 1 else f"{names[i]}^{k}"
                            for i, k in enumerate(key) if k)
            text = self.ring.to_str(c)
            neg = text.startswith("-")
            if neg:
                text = text[1:]
            if mono:
                text = mono if text == "1" else f"{text}*{mono}"
            if pieces:
                pieces.append((" - " if neg else " + ") + text)
            else:
                pieces.append(("-" if neg else "") + text)
        return "".join(pieces)

    def __repr__(self):
        return f"WeylElt({self.format()!r})"

    def ring_tag(self):
        if self.hbar:
            return {"ring": "Q[h]"} if self.ring == QQ else dict(self.ring.tag(), hbar=True)
        return self.ring.tag()

    def to_json(self):
        n = self.n
        grouped = {}
        for key, c in self._terms.items():
            grouped.setdefault(key[:-1], {})[key[-1]] = c
        terms = []
        for mono in sorted(grouped, reverse=True):
            coeffs = grouped[mono]
            if self.hbar:
                coeff = {str(k): self.ring.to_str(v) for k, v in sorted(coeffs.items())}
            else:
                coeff = self.ring.to_str(coeffs[0])
            terms.append({"x_exp": list(mono[:n]), "y_exp": list(mono[n:]), "coeff": coeff})
        out = {"n": n, "terms": terms}
        out.update(self.ring_tag())
        if self.order is not None:
            out["K"] = self.order
        return out

    @classmethod
    def from_json(cls, data, order=None):
        try:
            n = int(data["n"])
            tag = data.get("ring", "Q[h]")
            hbar = tag == "Q[h]" or bool(data.get("hbar", False))
            ring = ring_from_tag(tag, data.get("p"))
            order = data.get("K", order)
            terms = []
            for t in data["terms"]:
                mono = tuple(t["x_exp"]) + tuple(t["y_exp"])
                coeff = t["coeff"]
                if isinstance(coeff, dict):
                    for k, v in coeff.items():
                        terms.append((mono + (int(k),), ring.parse(str(v))))
                else:
                    terms.append((mono + (0,), ring.parse(str(coeff))))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed Weyl element JSON: {exc}") from exc
        return cls(n, terms, ring, hbar, order)


def weyl_mul(u, v):
    return u.mul(v)


def weyl_commutator(u, v):
    return u.mul(v) - v.mul(u)


def relation_constant(u):
    """The element ``[y_i, x_i]`` of the algebra ``u`` lives in."""
    if u.hbar:
        return WeylElt.hbar_elt(u.n, u.ring, u.order)
    return WeylElt.one(u.n, u.ring, hbar=False)


def is_central(u):
    gens = WeylElt.gens(u.n, u.ring, u.hbar, u.order)
    return all(weyl_commutator(u, g).is_zero() for g in gens)


class WeylAuto:
    """Images of ``x_1..x_n, y_1..y_n`` under an endomorphism of the Weyl algebra."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if not images or len(images) % 2:
            raise ArityMismatch("need 2n images")
        first = images[0]
        for u in images:
            first._check(u)
        if len(images) != 2 * first.n:
            raise ArityMismatch(f"{len(images)} images in W_{first.n}")
        self.images = images

    @classmethod
    def identity(cls, n, ring=QQ, hbar=True, order=None):
        return cls(WeylElt.gens(n, ring, hbar, order))

    @property
    def n(self):
        return self.images[0].n

    @property
    def ring(self):
        return self.images[0].ring

    @property
    def hbar(self):
        return self.images[0].hbar

    @property
    def order(self):
        return self.images[0].order

    def __eq__(self, other):
        return isinstance(other, WeylAuto) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __getitem__(self, i):
        return self.images[i]

    def __repr__(self):
        return "WeylAuto(" + ", ".join(u.format() for u in self.images) + ")"

    def apply(self, u):
        return u.substitute(list(self.images))

    def compose(self, other):
        """``self o other``: images of ``other`` substituted into those of ``self``."""
        return WeylAuto([u.substitute(list(other.images)) for u in self.images])

    def specialize(self, ring):
        return WeylAuto([u.specialize(ring) for u in self.images])

    def to_json(self):
        out = {"n": self.n, "images": [u.to_json() for u in self.images]}
        out.update(self.images[0].ring_tag())
        if self.order is not None:
            out["K"] = self.order
        return out

    @classmethod
    def from_json(cls, data):
        try:
            order = data.get("K")
            defaults = {k: data[k] for k in ("ring", "p", "hbar") if k in data}
            images = []
            for img in data["images"]:
                merged = dict(defaults, **img)
                merged.setdefault("n", data.get("n"))
                images.append(WeylElt.from_json(merged, order))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed Weyl automorphism JSON: {exc}") from exc
        return cls(images)


def weyl_auto_check(psi):
    n = psi.n
    c = relation_constant(psi.images[0])
    zero = c - c
    ims = psi.images
    for i in range(n):
        for j in range(n):
            want = c if i == j else zero
            if weyl_commutator(ims[n + i], ims[j]) != want:
                return False
        for j in range(i + 1, n):
            if not weyl_commutator(ims[i], ims[j]).is_zero():
                return False
            if not weyl_commutator(ims[n + i], ims[n + j]).is_zero():
                return False
    return True


# characteristic p ----------------------------------------------------------

def center_to_poly(u, p):
    """Express a central element of ``W_n(F_p)`` in ``X_i = x_i^p, Y_i = y_i^p``."""
    out = {}
    for key, c in u.terms.items():
        mono = key[:-1]
        if any(e % p for e in mono):
            raise NotCentral(f"monomial {mono} is not a p-th power")
        out[tuple(e // p for e in mono)] = c
    return Poly(2 * u.n, out, u.ring)


def poly_to_center(f, ring, hbar=False):
    """Lift ``f(X, Y)`` to ``f(x^p, y^p)`` with least non-negative representatives."""
    p = f.ring.characteristic
    n = f.nvars // 2
    return WeylElt(n, {tuple(e * p for e in exp) + (0,): ring(int(c))
                       for exp, c in f.terms.items()}, ring, hbar=hbar)


def raw_induced_bracket(a, b, p):
    """``([a~, b~] / p) mod p`` for lifts to ``Z/p^2``, as a Poly in the central variables."""
    a, b = _as_center_poly(a, p), _as_center_poly(b, p)
    if a.nvars != b.nvars:
        raise ArityMismatch("central data on different numbers of variables")
    zp2 = Zp2(p)
    fp = GF(p)
    comm = weyl_commutator(poly_to_center(a, zp2), poly_to_center(b, zp2))
    out = {}
    for key, c in comm.terms.items():
        if c % p:
            raise NonDivisible(f"commutator coefficient {c} not divisible by {p}")
        out[key] = (c // p) % p
    reduced = WeylElt(comm.n, out, fp, hbar=False)
    return center_to_poly(reduced, p)


def induced_poisson_bracket(a, b, p):
    """Bracket on ``F_p[x^p, y^p]`` induced by the Z/p^2 commutator.

    The raw quotient ``[a~, b~]/p`` satisfies ``{Y, X} = (p-1)! = -1``; it is
    rescaled by ``-1`` so that ``{Y_i, X_j} = delta_ij`` matches the
    commutative table ``{p, x} = +1``.
    """
    return -raw_induced_bracket(a, b, p)


def _as_center_poly(a, p):
    if isinstance(a, WeylElt):
        if a.ring != GF(p) or a.hbar:
            raise RingMismatch(f"central element must live in W_n(F_{p})")
        if not is_central(a):
            raise NotCentral("element is not central")
        return center_to_poly(a, p)
    if a.ring != GF(p):
        try:
            a = a.change_ring(GF(p))
        except ZeroDivisionError as exc:
            raise BadPrime(str(exc)) from exc
    return a


def reduce_mod_p(w, p):
    """Coefficientwise reduction of a rational tame word."""
    fp = GF(p)
    factors = []
    for e in w.factors:
        try:
            if isinstance(e, Linear):
                m = [[fp(c) for c in row] for row in e.matrix]
                if fp.is_zero(linalg.determinant(m, fp)):
                    raise BadPrime(f"linear factor is singular mod {p}")
                factors.append(Linear(m, fp))
            else:
                factors.append(Transvection(e.target, e.poly.change_ring(fp)))
        except ZeroDivisionError as exc:
            raise BadPrime(f"coefficient denominator divisible by {p}") from exc
        except SingularMatrix as exc:
            raise BadPrime(str(exc)) from exc
    return TameWord(factors, w.nvars, fp)


def restrict_to_center(psi):
    """Polynomial map induced on ``F_p[X, Y]`` by ``x_i -> Psi(x_i)^p``."""
    if psi.hbar:
        raise RingMismatch("restriction needs the relation constant 1 (hbar specialised)")
    p = psi.ring.characteristic
    if not psi.ring.is_field:
        raise RingMismatch("restriction is defined over F_p")
    images = []
    for u in psi.images:
        v = u.pow(p)
        if not is_central(v):
            raise NotCentral("p-th power of an image is not central; input is not an automorphism")
        images.append(center_to_poly(v, p))
    return Endo(images)


def frobenius_twist(phi, p):
    """Coefficients raised to the p-th power, variables read as ``X_i, Y_i``."""
    fp = GF(p)
    try:
        return Endo([f.map_coeffs(lambda c: fp.pow(fp(c), p), fp) for f in phi.images])
    except ZeroDivisionError as exc:
        raise BadPrime(str(exc)) from exc
