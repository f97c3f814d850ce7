"""Exact coefficient rings.

Elements are plain Python values so that polynomial kernels can stay generic:

* ``QQ``: ``int`` or ``fractions.Fraction`` (Fraction is always in lowest
  terms with a positive denominator; integral values may be stored as int).
* ``IntegerModRing(m)``: ``int`` in ``0..m-1``.
* ``HbarSeriesRing(base, K)``: tuple of base elements, index = power of hbar,
  trailing zeros stripped and nothing stored beyond ``K``.
"""

import operator
from fractions import Fraction
from math import gcd

from .errors import AlgebraError, FormatError, RingMismatch


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Ring:
    """Interface shared by all coefficient rings."""

    name = "?"
    characteristic = 0
    is_field = False

    zero = 0
    one = 1

    add = staticmethod(operator.add)
    sub = staticmethod(operator.sub)
    mul = staticmethod(operator.mul)
    neg = staticmethod(operator.neg)

    def __call__(self, value):
        raise NotImplementedError

    def is_zero(self, a):
        return a == 0

    def from_int(self, k):
        return self(k)

    def pow(self, a, e):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a):
        raise AlgebraError(f"{self.name} has no general inverse")

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_str(self, a):
        return str(a)

    def parse(self, s):
        raise NotImplementedError

    def tag(self):
        """JSON ring descriptor (dict)."""
        return {"ring": self.name}

    def __repr__(self):
        return self.name


class RationalField(Ring):
    name = "Q"
    is_field = True

    def __call__(self, value):
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else value
        if isinstance(value, str):
            return self.parse(value)
        raise RingMismatch(f"cannot coerce {value!r} into Q")

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return self(Fraction(1) / a)

    def div(self, a, b):
        return self(Fraction(a) / b)

    def to_str(self, a):
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def parse(self, s):
        try:
            return self(Fraction(s.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational literal {s!r}") from exc

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


class IntegerModRing(Ring):
    """Integers modulo ``m``; canonical representatives ``0..m-1``."""

    def __init__(self, modulus, prime=None):
        if modulus < 2:
            raise AlgebraError(f"modulus must be >= 2, got {modulus}")
        self.modulus = modulus
        self.characteristic = modulus
        self.prime = prime
        self.is_field = is_prime(modulus)
        if self.is_field:
            self.name = "Fp"
            self.prime = modulus
        elif prime is not None and modulus == prime * prime:
            self.name = "Zp2"
        else:
            self.name = f"Z/{modulus}"
        m = modulus
        self.add = lambda a, b: (a + b) % m
        self.sub = lambda a, b: (a - b) % m
        self.mul = lambda a, b: (a * b) % m
        self.neg = lambda a: (-a) % m

    def __call__(self, value):
        m = self.modulus
        if isinstance(value, int):
            return value % m
        if isinstance(value, Fraction):
            den = value.denominator
            if gcd(den, m) != 1:
                raise ZeroDivisionError(f"denominator {den} not invertible mod {m}")
            return value.numerator * pow(den, -1, m) % m
        if isinstance(value, str):
            return self.parse(value)
        raise RingMismatch(f"cannot coerce {value!r} into {self.name}")

    def inv(self, a):
        if gcd(a, self.modulus) != 1:
            raise ZeroDivisionError(f"{a} not invertible mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def parse(self, s):
        try:
            return self(Fraction(s.strip()))
        except ValueError as exc:
            raise FormatError(f"bad literal {s!r}") from exc

    def tag(self):
        return {"ring": self.name, "p": self.prime if self.prime else self.modulus}

    def __eq__(self, other):
        return isinstance(other, IntegerModRing) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("mod", self.modulus))

    def __repr__(self):
        return f"{self.name}({self.prime or self.modulus})"


def GF(p):
    if not is_prime(p):
        raise AlgebraError(f"{p} is not prime")
    return IntegerModRing(p)


def Zp2(p):
    if not is_prime(p):
        raise AlgebraError(f"{p} is not prime")
    return IntegerModRing(p * p, prime=p)


class HbarSeriesRing(Ring):
    """Truncated power series ``sum_{k<=K} c_k hbar^k`` over a base ring.

    ``order=None`` gives honest polynomials in hbar (no truncation).
    Products overflowing the order are dropped silently.
    """

    def __init__(self, base=QQ, order=None):
        self.base = base
        self.order = order
        self.characteristic = base.characteristic
        self.name = f"{base.name}[h]" if order is None else f"{base.name}[h]/h^{order + 1}"
        self.zero = ()
        self.one = (base.one,)

    def _trim(self, coeffs):
        coeffs = list(coeffs)
        if self.order is not None:
            del coeffs[self.order + 1:]
        z = self.base.is_zero
        while coeffs and z(coeffs[-1]):
            coeffs.pop()
        return tuple(coeffs)

    def __call__(self, value):
        if isinstance(value, tuple):
            return self._trim(self.base(c) for c in value)
        if isinstance(value, dict):
            top = max((int(k) for k in value), default=-1)
            out = [self.base.zero] * (top + 1)
            for k, c in value.items():
                out[int(k)] = self.base(c)
            return self._trim(out)
        return self._trim((self.base(value),))

    def hbar(self, k=1):
        return self._trim((self.base.zero,) * k + (self.base.one,))

    def is_zero(self, a):
        return not a

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        add = self.base.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return self._trim(out)

    def neg(self, a):
        return tuple(self.base.neg(c) for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        top = len(a) + len(b) - 2
        if self.order is not None:
            top = min(top, self.order)
        out = [self.base.zero] * (top + 1)
        add, mul = self.base.add, self.base.mul
        for i, x in enumerate(a):
            if i > top:
                break
            for j, y in enumerate(b):
                if i + j > top:
                    break
                out[i + j] = add(out[i + j], mul(x, y))
        return self._trim(out)

    def inv(self, a):
        if not a or self.base.is_zero(a[0]):
            raise ZeroDivisionError("series with zero constant term is not invertible")
        if self.order is None:
            if len(a) == 1:
                return (self.base.inv(a[0]),)
            raise AlgebraError("non-constant polynomial in hbar has no inverse without truncation")
        inv0 = self.base.inv(a[0])
        out = [inv0]
        for k in range(1, self.order + 1):
            s = self.base.zero
            for j in range(1, min(k, len(a) - 1) + 1):
                s = self.base.add(s, self.base.mul(a[j], out[k - j]))
            out.append(self.base.neg(self.base.mul(s, inv0)))
        return self._trim(out)

    def valuation(self, a):
        for i, c in enumerate(a):
            if not self.base.is_zero(c):
                return i
        return None

    def to_str(self, a):
        return "{" + ", ".join(f"{k}: {self.base.to_str(c)}" for k, c in enumerate(a)
                               if not self.base.is_zero(c)) + "}"

    def to_json(self, a):
        return {str(k): self.base.to_str(c) for k, c in enumerate(a) if not self.base.is_zero(c)}

    def __eq__(self, other):
        return (isinstance(other, HbarSeriesRing) and other.base == self.base
                and other.order == self.order)

    def __hash__(self):
        return hash(("hbar", self.base, self.order))


def ring_from_tag(tag, p=None):
    if tag in ("Q", "Q[h]", None):
        return QQ
    if tag == "Fp":
        return GF(int(p))
    if tag == "Zp2":
        return Zp2(int(p))
    raise FormatError(f"unknown ring tag {tag!r}")


def reduce_rational(c, ring):
    """Image of a rational ``c`` in ``ring``; ZeroDivisionError on bad denominators."""
    return ring(Fraction(c))


def integer_scaled(terms):
    """Split rational coefficients as ``ints / den``; returns ``(dict of ints, den)``."""
    den = 1
    for c in terms.values():
        if type(c) is Fraction:
            d = c.denominator
            den = den * d // gcd(den, d)
    if den == 1:
        return {k: int(c) for k, c in terms.items()}, 1
    out = {}
    for k, c in terms.items():
        if type(c) is Fraction:
            out[k] = c.numerator * (den // c.denominator)
        else:
            out[k] = c * den
    return out, den


def unscale(terms, den, ring):
    """Inverse of :func:`integer_scaled` (drops zeros); also reduces into mod rings."""
    if isinstance(ring, IntegerModRing):
        m = ring.modulus
        inv = pow(den, -1, m) if den != 1 else 1
        out = {}
        for k, v in terms.items():
            v = v * inv % m
            if v:
                out[k] = v
        return out
    if den == 1:
        return {k: v for k, v in terms.items() if v}
    out = {}
    for k, v in terms.items():
        if v:
            g = gcd(v, den)
            out[k] = v // den if g == den else Fraction(v // g, den // g)
    return out


def supports_int_kernel(ring):
    return isinstance(ring, (RationalField, IntegerModRing))
