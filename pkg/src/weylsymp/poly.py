"""Sparse multivariate polynomials over an exact coefficient ring."""

import math
import operator
from fractions import Fraction

from .errors import AlgebraError, ArityMismatch, FormatError, IndexOutOfRange, RingMismatch
from .rings import QQ, Ring, integer_scaled, ring_from_tag, supports_int_kernel, unscale

INF = math.inf
NEG_INF = -math.inf

_add = operator.add


def default_names(nvars):
    """``x1..xn, p1..pn`` for even arity, ``v1..vN`` otherwise."""
    if nvars % 2 == 0 and nvars > 0:
        n = nvars // 2
        return [f"x{i}" for i in range(1, n + 1)] + [f"p{i}" for i in range(1, n + 1)]
    return [f"v{i}" for i in range(1, nvars + 1)]


def center_names(nvars):
    n = nvars // 2
    return [f"X{i}" for i in range(1, n + 1)] + [f"Y{i}" for i in range(1, n + 1)]


def _int_poly_mul(ta, tb, cap):
    out = {}
    get = out.get
    if cap is None:
        b_items = list(tb.items())
        for ea, ca in ta.items():
            for eb, cb in b_items:
                e = tuple(map(_add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return out
    b_items = sorted(((sum(e), e, c) for e, c in tb.items()), key=operator.itemgetter(0))
    for ea, ca in ta.items():
        room = cap - sum(ea)
        if room < 0:
            continue
        for db, eb, cb in b_items:
            if db > room:
                break
            e = tuple(map(_add, ea, eb))
            out[e] = get(e, 0) + ca * cb
    return out


class Poly:
    """Immutable sparse polynomial: ``{exponent tuple: coefficient}``."""

    __slots__ = ("nvars", "ring", "_terms", "_hash")

    def __init__(self, nvars, terms=None, ring=QQ, *, _trusted=False):
        self.nvars = nvars
        self.ring = ring
        self._hash = None
        if _trusted:
            self._terms = terms
            return
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for exp, c in items:
                exp = tuple(int(e) for e in exp)
                if len(exp) != nvars:
                    raise ArityMismatch(f"exponent {exp} has length {len(exp)}, expected {nvars}")
                if any(e < 0 for e in exp):
                    raise AlgebraError(f"negative exponent in {exp}")
                c = ring(c)
                if exp in clean:
                    c = ring.add(clean[exp], c)
                if ring.is_zero(c):
                    clean.pop(exp, None)
                else:
                    clean[exp] = c
        self._terms = clean

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars, ring=QQ):
        return cls(nvars, {}, ring, _trusted=True)

    @classmethod
    def const(cls, nvars, c, ring=QQ):
        c = ring(c)
        if ring.is_zero(c):
            return cls.zero(nvars, ring)
        return cls(nvars, {(0,) * nvars: c}, ring, _trusted=True)

    @classmethod
    def one(cls, nvars, ring=QQ):
        return cls.const(nvars, 1, ring)

    @classmethod
    def var(cls, nvars, i, ring=QQ):
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable index {i} outside 0..{nvars - 1}")
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): ring.one}, ring, _trusted=True)

    @classmethod
    def gens(cls, nvars, ring=QQ):
        return [cls.var(nvars, i, ring) for i in range(nvars)]

    @classmethod
    def monomial(cls, exp, c=1, ring=QQ):
        return cls(len(exp), {tuple(exp): c}, ring)

    # basic access ---------------------------------------------------------

    @property
    def terms(self):
        return self._terms

    def items(self):
        """Terms in canonical order: descending lexicographic on exponents."""
        return sorted(self._terms.items(), reverse=True)

    def coeff(self, exp):
        return self._terms.get(tuple(exp), self.ring.zero)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, self.ring.zero)

    def variables(self):
        """Indices of variables that occur."""
        used = set()
        for exp in self._terms:
            used.update(i for i, e in enumerate(exp) if e)
        return sorted(used)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return (self.nvars == other.nvars and self.ring == other.ring
                    and self._terms == other._terms)
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other, self.ring)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.ring, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other, self.ring)
        if other.nvars != self.nvars:
            raise ArityMismatch(f"arity {self.nvars} vs {other.nvars}")
        if other.ring != self.ring:
            raise RingMismatch(f"ring {self.ring} vs {other.ring}")
        return other

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        ring = self.ring
        out = dict(self._terms)
        for e, c in other._terms.items():
            if e in out:
                s = ring.add(out[e], c)
                if ring.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(self.nvars, out, ring, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.neg
        return Poly(self.nvars, {e: neg(c) for e, c in self._terms.items()}, self.ring,
                    _trusted=True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        ring = self.ring
        c = ring(c)
        if ring.is_zero(c):
            return Poly.zero(self.nvars, ring)
        mul = ring.mul
        out = {}
        for e, a in self._terms.items():
            v = mul(a, c)
            if not ring.is_zero(v):
                out[e] = v
        return Poly(self.nvars, out, ring, _trusted=True)

    def mul(self, other, cap=None):
        """Product; with ``cap`` every term of total degree > cap is dropped."""
        other = self._check(other)
        ring = self.ring
        if supports_int_kernel(ring):
            ta, da = integer_scaled(self._terms)
            tb, db = integer_scaled(other._terms)
            raw = _int_poly_mul(ta, tb, cap)
            return Poly(self.nvars, unscale(raw, da * db, ring), ring, _trusted=True)
        add, mul, is_zero = ring.add, ring.mul, ring.is_zero
        out = {}
        b_items = sorted(((sum(e), e, c) for e, c in other._terms.items()),
                         key=operator.itemgetter(0))
        for ea, ca in self._terms.items():
            room = INF if cap is None else cap - sum(ea)
            for db, eb, cb in b_items:
                if db > room:
                    break
                e = tuple(map(_add, ea, eb))
                v = mul(ca, cb)
                out[e] = add(out[e], v) if e in out else v
        return Poly(self.nvars, {e: c for e, c in out.items() if not is_zero(c)}, ring,
                    _trusted=True)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def pow(self, e, cap=None):
        if e < 0:
            raise AlgebraError("negative power")
        result = Poly.one(self.nvars, self.ring)
        base = self
        while e:
            if e & 1:
                result = result.mul(base, cap)
            e >>= 1
            if e:
                base = base.mul(base, cap)
        return result

    def __pow__(self, e):
        return self.pow(e)

    def truncate(self, cap):
        """Drop terms of total degree > cap."""
        return Poly(self.nvars, {e: c for e, c in self._terms.items() if sum(e) <= cap},
                    self.ring, _trusted=True)

    # calculus and gradings ------------------------------------------------

    def derivative(self, i):
        if not 0 <= i < self.nvars:
            raise IndexOutOfRange(f"variable index {i} outside 0..{self.nvars - 1}")
        ring = self.ring
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                v = ring.mul(c, ring.from_int(k))
                if not ring.is_zero(v):
                    ne = list(e)
                    ne[i] = k - 1
                    out[tuple(ne)] = v
        return Poly(self.nvars, out, ring, _trusted=True)

    def homogeneous_component(self, k):
        return Poly(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == k},
                    self.ring, _trusted=True)

    def degree(self):
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def height(self):
        """Least total degree of a nonzero term; ``inf`` for zero."""
        if not self._terms:
            return INF
        return min(sum(e) for e in self._terms)

    def is_homogeneous(self):
        return len({sum(e) for e in self._terms}) <= 1

    # substitution ---------------------------------------------------------

    def substitute(self, images, cap=None):
        """Evaluate at ``images`` (one Poly per variable)."""
        if len(images) != self.nvars:
            raise ArityMismatch(f"{len(images)} images for {self.nvars} variables")
        if not images:
            return self
        target = images[0]
        return evaluate_monomials(self._terms, images, target.nvars, target.ring, cap)

    def map_coeffs(self, fn, ring):
        out = {}
        for e, c in self._terms.items():
            v = ring(fn(c))
            if not ring.is_zero(v):
                out[e] = v
        return Poly(self.nvars, out, ring, _trusted=True)

    def change_ring(self, ring):
        """Coefficientwise image in ``ring`` (e.g. reduction of a rational polynomial)."""
        return self.map_coeffs(lambda c: c, ring)

    def embed(self, nvars, positions):
        """Rename variable ``i`` to ``positions[i]`` inside an ``nvars``-variable ring."""
        out = {}
        for e, c in self._terms.items():
            ne = [0] * nvars
            for i, k in enumerate(e):
                ne[positions[i]] += k
            out[tuple(ne)] = c
        return Poly(nvars, out, self.ring)

    # text and JSON --------------------------------------------------------

    def format(self, names=None):
        names = names or default_names(self.nvars)
        if not self._terms:
            return "0"
        ring = self.ring
        pieces = []
        for e, c in self.items():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
            text = ring.to_str(c)
            negative = text.startswith("-")
            if negative:
                text = text[1:]
            if mono:
                text = mono if text == "1" else f"{text}*{mono}"
            if not pieces:
                pieces.append(("-" if negative else "") + text)
            else:
                pieces.append((" - " if negative else " + ") + text)
        return "".join(pieces)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.format()!r}, nvars={self.nvars}, ring={self.ring!r})"

    def to_json(self):
        out = {"n_vars": self.nvars,
               "terms": [{"exp": list(e), "coeff": self.ring.to_str(c)} for e, c in self.items()]}
        if self.ring != QQ:
            out.update(self.ring.tag())
        return out

    @classmethod
    def from_json(cls, data, ring=None):
        try:
            if ring is None:
                ring = ring_from_tag(data.get("ring"), data.get("p"))
            n = int(data["n_vars"])
            terms = [(t["exp"], ring.parse(str(t["coeff"]))) for t in data["terms"]]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed polynomial JSON: {exc}") from exc
        return cls(n, terms, ring)


def evaluate_monomials(terms, images, nvars, ring, cap=None, mul=None, one=None, zero=None,
                       scale=None):
    """Evaluate ``sum c * prod images[i]^e_i`` with shared prefix products.

    ``mul``/``one``/``zero``/``scale`` let non-commutative element types reuse
    the routine; products are formed left to right in variable order.
    """
    if mul is None:
        mul = (lambda a, b: a.mul(b, cap))
        one = Poly.one(nvars, ring)
        zero = Poly.zero(nvars, ring)
        scale = (lambda a, c: a.scale(c))
    nv = len(images)
    powers = [{0: one, 1: images[i]} for i in range(nv)]

    def power(i, k):
        table = powers[i]
        if k not in table:
            table[k] = mul(power(i, k - 1), images[i])
        return table[k]

    prefix = {(): one}
    total = zero
    for exp, c in sorted(terms.items()):
        # longest cached prefix
        key = tuple(exp)
        j = nv
        while j > 0 and key[:j] not in prefix:
            j -= 1
        acc = prefix[key[:j]]
        while j < nv:
            k = key[j]
            if k:
                acc = mul(acc, power(j, k))
            j += 1
            prefix[key[:j]] = acc
        total = total + scale(acc, c)
    return total


def exact_div(f, g):
    """Quotient ``f / g`` assuming ``g`` divides ``f`` exactly."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    ring = f.ring
    lead_g = max(g.terms)
    lc_g = g.terms[lead_g]
    quotient = Poly.zero(f.nvars, ring)
    rem = f
    while not rem.is_zero():
        lead = max(rem.terms)
        shift = tuple(a - b for a, b in zip(lead, lead_g))
        if any(s < 0 for s in shift):
            raise AlgebraError("polynomial division is not exact")
        t = Poly(f.nvars, {shift: ring.div(rem.terms[lead], lc_g)}, ring, _trusted=True)
        quotient = quotient + t
        rem = rem - t.mul(g)
    return quotient


def jacobian_matrix(images):
    n = len(images)
    for f in images:
        if f.nvars != n:
            raise ArityMismatch(f"image with {f.nvars} variables in a {n}-variable map")
    return [[f.derivative(j) for j in range(n)] for f in images]


def bareiss_det(matrix):
    """Fraction-free determinant of a square matrix of polynomials."""
    m = [list(row) for row in matrix]
    size = len(m)
    if size == 0:
        raise ArityMismatch("empty matrix")
    nv, ring = m[0][0].nvars, m[0][0].ring
    sign = 1
    prev = Poly.one(nv, ring)
    for k in range(size - 1):
        if m[k][k].is_zero():
            swap = next((r for r in range(k + 1, size) if not m[r][k].is_zero()), None)
            if swap is None:
                return Poly.zero(nv, ring)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = exact_div(pivot * m[i][j] - m[i][k] * m[k][j], prev)
        prev = pivot
    det = m[size - 1][size - 1]
    return det if sign == 1 else -det


def jacobian_det(images):
    """Determinant of the matrix of partials ``d images[i] / d x_j``."""
    if not images:
        raise ArityMismatch("empty image list")
    ring = images[0].ring
    if any(f.ring != ring for f in images):
        raise RingMismatch("images over different rings")
    return bareiss_det(jacobian_matrix(images))


def check_same(polys):
    polys = list(polys)
    if not polys:
        return
    n, ring = polys[0].nvars, polys[0].ring
    for f in polys:
        if f.nvars != n:
            raise ArityMismatch(f"arity {f.nvars} vs {n}")
        if f.ring != ring:
            raise RingMismatch(f"ring {f.ring} vs {ring}")


def as_ring(ring):
    if not isinstance(ring, Ring):
        raise RingMismatch(f"{ring!r} is not a coefficient ring")
    return ring
