"""Poisson structure, polynomial endomorphisms, tame words and the height metric.

Conventions
-----------
Variables of ``P_n`` are ordered ``x_1..x_n, p_1..p_n`` (indices ``0..2n-1``).
The bracket table is ``b(i, j) = delta(i, n+j) - delta(i+n, j)``, so
``{x_i, p_i} = -1`` and ``{p_i, x_i} = +1``.

An endomorphism is the tuple of generator images.  ``endo_compose(phi, psi)``
substitutes the images of ``psi`` into those of ``phi``; a tame word is
evaluated as ``compose(e_1, compose(e_2, ...))``.
"""

import math
from fractions import Fraction
from dataclasses import dataclass

from . import linalg
from .errors import (AlgebraError, ArityMismatch, IndexOutOfRange, NotSymplectic, FormatError,
                     RingMismatch, SingularMatrix)
from .poly import INF, Poly, check_same, jacobian_det
from .rings import QQ, integer_scaled, ring_from_tag, unscale


def conjugate_index(i, n):
    return i + n if i < n else i - n


class PoissonStructure:
    """The constant standard bracket on ``2n`` variables."""

    def __init__(self, n):
        if n < 1:
            raise AlgebraError("half-dimension must be positive")
        self.n = n
        self.nvars = 2 * n

    def b(self, i, j):
        n = self.n
        return int(i == n + j) - int(i + n == j)

    def matrix(self, ring=QQ):
        return linalg.bracket_matrix(self.n, ring)

    def bracket(self, f, g):
        return poisson_bracket(self, f, g)

    def __eq__(self, other):
        return isinstance(other, PoissonStructure) and other.n == self.n

    def __hash__(self):
        return hash(("poisson", self.n))

    def __repr__(self):
        return f"PoissonStructure(n={self.n})"


def poisson_bracket(P, f, g):
    """``sum_{i,j} b(i,j) df/dx_i dg/dx_j`` (only the conjugate pairs contribute)."""
    check_same([f, g])
    if f.nvars != P.nvars:
        raise ArityMismatch(f"bracket on {P.nvars} variables, got {f.nvars}")
    if f.ring.characteristic != 0:
        raise RingMismatch("the commutative bracket is defined here in characteristic 0 only")
    n = P.n
    out = Poly.zero(f.nvars, f.ring)
    for i in range(n):
        # b(i+n, i) = +1, b(i, i+n) = -1
        out = out + f.derivative(i + n) * g.derivative(i) - f.derivative(i) * g.derivative(i + n)
    return out


class Endo:
    """Polynomial endomorphism given by its generator images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if not images:
            raise ArityMismatch("an endomorphism needs at least one image")
        check_same(images)
        if images[0].nvars != len(images):
            raise ArityMismatch(f"{len(images)} images over {images[0].nvars} variables")
        self.images = images

    @classmethod
    def identity(cls, nvars, ring=QQ):
        return cls(Poly.gens(nvars, ring))

    @property
    def nvars(self):
        return len(self.images)

    @property
    def ring(self):
        return self.images[0].ring

    def __getitem__(self, i):
        return self.images[i]

    def __iter__(self):
        return iter(self.images)

    def __eq__(self, other):
        return isinstance(other, Endo) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __sub__(self, other):
        _check_pair(self, other)
        return Endo([a - b for a, b in zip(self.images, other.images)])

    def degree(self):
        return max(f.degree() for f in self.images)

    def height(self):
        return min(f.height() for f in self.images)

    def truncate(self, cap):
        return Endo([f.truncate(cap) for f in self.images])

    def change_ring(self, ring):
        return Endo([f.change_ring(ring) for f in self.images])

    def __repr__(self):
        return "Endo(" + ", ".join(str(f) for f in self.images) + ")"

    def format(self, names=None):
        return "(" + ", ".join(f.format(names) for f in self.images) + ")"

    def to_json(self):
        out = {"n_vars": self.nvars, "images": [f.to_json() for f in self.images]}
        if self.ring != QQ:
            out.update(self.ring.tag())
        return out

    @classmethod
    def from_json(cls, data):
        try:
            ring = ring_from_tag(data.get("ring"), data.get("p"))
            images = [Poly.from_json(img, ring) for img in data["images"]]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed endomorphism JSON: {exc}") from exc
        endo = cls(images)
        if "n_vars" in data and int(data["n_vars"]) != endo.nvars:
            raise ArityMismatch("n_vars disagrees with the number of images")
        return endo


def _check_pair(phi, psi):
    if phi.nvars != psi.nvars:
        raise ArityMismatch(f"arity {phi.nvars} vs {psi.nvars}")
    if phi.ring != psi.ring:
        raise RingMismatch(f"ring {phi.ring} vs {psi.ring}")


def endo_compose(phi, psi, cap=None):
    """Images of ``psi`` substituted into the images of ``phi``."""
    _check_pair(phi, psi)
    return Endo([f.substitute(psi.images, cap) for f in phi.images])


def endo_apply(phi, f, cap=None):
    if f.nvars != phi.nvars:
        raise ArityMismatch(f"arity {f.nvars} vs {phi.nvars}")
    return f.substitute(phi.images, cap)


def height_of(phi, psi):
    """``Ht(phi - psi)``: minimum coordinate height of the difference (``inf`` if equal)."""
    return (phi - psi).height()


def distance(phi, psi):
    """Exact height together with the display string ``e^{-Ht}``.

    Comparisons should use the height; the metric value is ``exp(-Ht)``.
    """
    h = height_of(phi, psi)
    if h == INF:
        return h, "0"
    return h, "1" if h == 0 else f"e^-{h}"


def is_automorphism_certificate(phi, psi_inv):
    _check_pair(phi, psi_inv)
    ident = Endo.identity(phi.nvars, phi.ring)
    return endo_compose(phi, psi_inv) == ident and endo_compose(psi_inv, phi) == ident


def jacobian(phi):
    return jacobian_det(list(phi.images))


def jacobian_is_unit_constant(phi):
    if phi.ring.characteristic != 0:
        raise RingMismatch("Jacobian normalisation check is for characteristic 0")
    return jacobian(phi) == Poly.one(phi.nvars, phi.ring)


def is_symplectomorphism(P, phi):
    if phi.nvars != P.nvars:
        raise ArityMismatch(f"map on {phi.nvars} variables, structure on {P.nvars}")
    ims = phi.images
    for i in range(P.nvars):
        for j in range(i + 1, P.nvars):
            br = poisson_bracket(P, ims[i], ims[j])
            if br != Poly.const(phi.nvars, P.b(i, j), phi.ring):
                return False
    return True


# elementary automorphisms and tame words ---------------------------------

@dataclass(frozen=True)
class Linear:
    """``x_i -> sum_j A[i][j] x_j``."""

    matrix: tuple

    def __init__(self, matrix, ring=QQ):
        object.__setattr__(self, "matrix", tuple(tuple(ring(c) for c in row) for row in matrix))
        linalg.check_square(self.matrix)

    @property
    def nvars(self):
        return len(self.matrix)

    def endo(self, ring=QQ):
        size = self.nvars
        gens = Poly.gens(size, ring)
        images = []
        for row in self.matrix:
            img = Poly.zero(size, ring)
            for c, g in zip(row, gens):
                if c:
                    img = img + g.scale(c)
            images.append(img)
        return Endo(images)

    def inverse(self, ring=QQ):
        return Linear(linalg.inverse([list(r) for r in self.matrix], ring), ring)

    def degree(self):
        return 1

    def to_json(self, ring=QQ):
        return {"linear": [[ring.to_str(c) for c in row] for row in self.matrix]}


@dataclass(frozen=True)
class Transvection:
    """``x_k -> x_k + f`` with ``f`` free of ``x_k``."""

    target: int
    poly: Poly

    def __post_init__(self):
        if not 0 <= self.target < self.poly.nvars:
            raise IndexOutOfRange(f"target {self.target} outside 0..{self.poly.nvars - 1}")
        if self.target in self.poly.variables():
            raise AlgebraError(f"transvection polynomial involves its own target x_{self.target}")

    @property
    def nvars(self):
        return self.poly.nvars

    def endo(self, ring=None):
        gens = Poly.gens(self.nvars, self.poly.ring)
        gens[self.target] = gens[self.target] + self.poly
        return Endo(gens)

    def inverse(self, ring=None):
        return Transvection(self.target, -self.poly)

    def degree(self):
        return max(1, self.poly.degree())

    def to_json(self, ring=None):
        return {"transvection": {"target": self.target, "poly": self.poly.to_json()}}


def symplectic_transvection(n, target, f):
    """Constructor enforcing the single-conjugate-variable condition."""
    conj = conjugate_index(target, n)
    if f.nvars != 2 * n:
        raise ArityMismatch(f"polynomial on {f.nvars} variables, expected {2 * n}")
    if any(v != conj for v in f.variables()):
        raise NotSymplectic(f"transvection of coordinate {target} may only use variable {conj}")
    return Transvection(target, f)


def hamiltonian_shear(P, F):
    """Exact time-one flow of a Hamiltonian depending only on x's (or only on p's).

    Returns the endomorphism ``g -> g + {F, g}`` on the generators; it is the
    simultaneous shear of all conjugate coordinates.
    """
    used = F.variables()
    n = P.n
    if not (all(v < n for v in used) or all(v >= n for v in used)):
        raise NotSymplectic("shear Hamiltonian must depend on one Lagrangian half only")
    gens = Poly.gens(P.nvars, F.ring)
    return Endo([g + poisson_bracket(P, F, g) for g in gens])


def elementary_is_symplectic(P, e):
    if e.nvars != P.nvars:
        raise ArityMismatch(f"factor on {e.nvars} variables, structure on {P.nvars}")
    if isinstance(e, Linear):
        return linalg.is_symplectic_matrix([list(r) for r in e.matrix], P.n)
    return is_symplectomorphism(P, e.endo())


class TameWord:
    """Sequence of elementary automorphisms, composed left to right."""

    __slots__ = ("factors", "nvars", "ring")

    def __init__(self, factors, nvars=None, ring=QQ):
        self.factors = tuple(factors)
        if self.factors:
            nvars = self.factors[0].nvars
            if any(f.nvars != nvars for f in self.factors):
                raise ArityMismatch("word factors act on different numbers of variables")
            rings = {f.poly.ring for f in self.factors if isinstance(f, Transvection)}
            if len(rings) > 1:
                raise RingMismatch("word factors over different rings")
            if rings:
                ring = rings.pop()
        if nvars is None:
            raise ArityMismatch("empty word needs an explicit number of variables")
        self.nvars = nvars
        self.ring = ring

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __add__(self, other):
        if other.nvars != self.nvars:
            raise ArityMismatch("words on different numbers of variables")
        return TameWord(self.factors + other.factors, self.nvars, self.ring)

    def __eq__(self, other):
        return (isinstance(other, TameWord) and self.nvars == other.nvars
                and self.factors == other.factors)

    def __hash__(self):
        return hash((self.nvars, self.factors))

    def __repr__(self):
        return f"TameWord({list(self.factors)!r})"

    def degree_bound(self):
        return math.prod(f.degree() for f in self.factors)

    def to_json(self):
        out = {"n_vars": self.nvars, "word": [f.to_json(self.ring) for f in self.factors]}
        if self.ring != QQ:
            out.update(self.ring.tag())
        return out

    @classmethod
    def from_json(cls, data, nvars=None):
        try:
            ring = ring_from_tag(data.get("ring"), data.get("p"))
            nvars = data.get("n_vars", nvars)
            factors = []
            for item in data["word"]:
                if "linear" in item:
                    factors.append(Linear([[ring.parse(str(c)) for c in row]
                                           for row in item["linear"]], ring))
                elif "transvection" in item:
                    t = item["transvection"]
                    if isinstance(t["poly"], str):
                        from .parse import parse_poly
                        f = parse_poly(t["poly"], None if nvars is None else int(nvars), ring)
                    else:
                        f = Poly.from_json(t["poly"], ring)
                    factors.append(Transvection(int(t["target"]), f))
                else:
                    raise FormatError(f"unknown word factor {item!r}")
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed word JSON: {exc}") from exc
        return cls(factors, None if nvars is None else int(nvars), ring)


def tame_evaluate(w, cap=None):
    """Endomorphism of the word; ``cap`` truncates every intermediate above that degree."""
    result = Endo.identity(w.nvars, w.ring)
    for e in reversed(w.factors):
        result = endo_compose(e.endo(w.ring), result, cap)
    return result


def _linear_combination(row, polys, ring):
    nvars = polys[0].nvars
    if ring.characteristic != 0:
        acc = {}
        add, mul = ring.add, ring.mul
        for c, g in zip(row, polys):
            if c:
                for e, a in g.terms.items():
                    acc[e] = add(acc[e], mul(a, c)) if e in acc else mul(a, c)
        return Poly(nvars, {e: v for e, v in acc.items() if not ring.is_zero(v)}, ring,
                    _trusted=True)
    # integer kernel: bring every c_j * g_j over one common denominator
    parts = []
    den = 1
    for c, g in zip(row, polys):
        if not c or g.is_zero():
            continue
        ints, d = integer_scaled(g.terms)
        c = Fraction(c)
        d *= c.denominator
        parts.append((ints, c.numerator, d))
        den = den * d // math.gcd(den, d)
    acc = {}
    for ints, num, d in parts:
        f = num * (den // d)
        for e, v in ints.items():
            acc[e] = acc.get(e, 0) + f * v
    return Poly(nvars, unscale(acc, den, ring), ring, _trusted=True)


def apply_factor(e, phi, ring, cap=None):
    """``endo_compose(e, phi)`` with shortcuts for sparse factors."""
    if isinstance(e, Linear):
        return Endo([_linear_combination(row, phi.images, ring) for row in e.matrix])
    images = list(phi.images)
    images[e.target] = images[e.target] + e.poly.substitute(phi.images, cap)
    return Endo(images)


def tame_invert(w):
    try:
        factors = [f.inverse(w.ring) for f in reversed(w.factors)]
    except SingularMatrix:
        raise
    return TameWord(factors, w.nvars, w.ring)


def merge_linear(factors, ring=QQ):
    """Multiply out runs of adjacent linear factors and drop identities."""
    out = []
    for e in factors:
        if isinstance(e, Linear) and out and isinstance(out[-1], Linear):
            prod = linalg.matmul([list(r) for r in out[-1].matrix], [list(r) for r in e.matrix], ring)
            out[-1] = Linear(prod, ring)
        else:
            out.append(e)
        last = out[-1]
        if isinstance(last, Linear) and [list(r) for r in last.matrix] == linalg.identity(last.nvars, ring):
            out.pop()
    return out


def compose_word_with(w, phi, cap=None):
    """``endo_compose(tame_evaluate(w), phi)`` factor by factor from the right."""
    result = phi
    for e in reversed(w.factors):
        result = apply_factor(e, result, w.ring, cap)
    return result


# Nagata ------------------------------------------------------------------

def _nagata_vars(ring=QQ):
    return Poly.gens(3, ring)


def nagata_delta(ring=QQ):
    x, y, z = _nagata_vars(ring)
    return x * x - y * z


def nagata(ring=QQ):
    """Corrected Nagata map ``(x + D z, y + 2 D x + D^2 z, z)``, ``D = x^2 - y z``,
    together with its inverse ``(x - D z, y - 2 D x + D^2 z, z)``."""
    x, y, z = _nagata_vars(ring)
    d = nagata_delta(ring)
    phi = Endo([x + d * z, y + 2 * d * x + d * d * z, z])
    inv = Endo([x - d * z, y - 2 * d * x + d * d * z, z])
    return phi, inv


def nagata_x_variant(ring=QQ):
    """The variant whose first coordinate is ``x + D x``; kept for comparison."""
    x, y, z = _nagata_vars(ring)
    d = nagata_delta(ring)
    return Endo([x + d * x, y + 2 * d * x + d * d * z, z])
