"""Recursive-descent parser for the polynomial text format.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | NAME | "(" expr ")"

Names are ``x1..xn``, ``p1..pn`` (aliases ``X1..``, ``Y1..``), ``v1..vN`` and
``h`` for hbar.  A bare ``x``/``p``/``X``/``Y`` means index 1.
"""

import re
from fractions import Fraction

from .errors import ParseError
from .poly import Poly
from .rings import QQ

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z]*\d*)|(.))")
_NAME = re.compile(r"([xpvXYh])(\d*)$")


def tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = ("mul", node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.expect("int")
            node = ("pow", node, int(tok[1]))
        return node

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "int":
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.expect("int")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2])
                return ("num", Fraction(int(value), int(den[1])))
            return ("num", Fraction(int(value)))
        if kind == "name":
            m = _NAME.match(value)
            if m is None:
                raise ParseError(f"unknown variable {value!r}", pos)
            letter, idx = m.groups()
            if letter == "h":
                if idx:
                    raise ParseError(f"unknown variable {value!r}", pos)
                return ("hbar",)
            idx = int(idx) if idx else 1
            if idx < 1:
                raise ParseError(f"unknown variable {value!r}", pos)
            family = {"x": "x", "X": "x", "p": "p", "Y": "p", "v": "v"}[letter]
            return ("var", family, idx, pos)
        if (kind, value) == ("op", "("):
            node = self.expr()
            self.expect("op", ")")
            return node
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse_ast(text):
    return _Parser(text).parse()


def _scan(node, found):
    tag = node[0]
    if tag == "var":
        found.setdefault(node[1], 0)
        found[node[1]] = max(found[node[1]], node[2])
    elif tag == "hbar":
        found.setdefault("h", 0)
    elif tag in ("add", "sub", "mul"):
        _scan(node[1], found)
        _scan(node[2], found)
    elif tag in ("neg", "pow"):
        _scan(node[1], found)
    return found


def infer_layout(ast):
    """``("xp", n)`` or ``("v", N)`` from the variable names used."""
    found = _scan(ast, {})
    if "v" in found:
        if "x" in found or "p" in found:
            raise ParseError("cannot mix v-names with x/p names", 0)
        return "v", found["v"]
    return "xp", max(found.get("x", 0), found.get("p", 0), 1)


def _index(node, layout, size):
    _, family, idx, pos = node
    kind, count = layout
    if kind == "v":
        if family != "v" or idx > count:
            raise ParseError(f"unknown variable {family}{idx}", pos)
        return idx - 1
    if family == "v" or idx > count:
        raise ParseError(f"unknown variable {family}{idx}", pos)
    return idx - 1 if family == "x" else count + idx - 1


def evaluate(ast, layout, var, const, hbar=None):
    """Fold the tree with ``var(index)``, ``const(Fraction)`` and ring operators."""
    kind, count = layout
    size = count if kind == "v" else 2 * count

    def go(node):
        tag = node[0]
        if tag == "num":
            return const(node[1])
        if tag == "var":
            return var(_index(node, layout, size))
        if tag == "hbar":
            if hbar is None:
                raise ParseError("h is not allowed here", 0)
            return hbar()
        if tag == "add":
            return go(node[1]) + go(node[2])
        if tag == "sub":
            return go(node[1]) - go(node[2])
        if tag == "mul":
            a, b = go(node[1]), go(node[2])
            return a * b
        if tag == "neg":
            return -go(node[1])
        if tag == "pow":
            base = go(node[1])
            out = const(Fraction(1))
            for _ in range(node[2]):
                out = out * base
            return out
        raise ParseError(f"bad node {tag}", 0)

    return go(ast)


def _layout_for(ast, nvars):
    if nvars is None:
        return infer_layout(ast)
    found = _scan(ast, {})
    if "v" in found or nvars % 2:
        return "v", nvars
    return "xp", nvars // 2


def parse_poly(text, nvars=None, ring=QQ):
    """Commutative polynomial; ``nvars`` is inferred from the names when omitted."""
    ast = parse_ast(text)
    layout = _layout_for(ast, nvars)
    size = layout[1] if layout[0] == "v" else 2 * layout[1]
    gens = Poly.gens(size, ring)
    return evaluate(ast, layout, lambda i: gens[i], lambda c: Poly.const(size, ring(c), ring))


def parse_hbar_poly(text, nvars=None):
    """Commutative polynomial with hbar as an extra central symbol."""
    from .star import HbarPoly

    ast = parse_ast(text)
    layout = _layout_for(ast, nvars)
    if layout[0] == "v":
        raise ParseError("hbar polynomials use x/p names", 0)
    size = 2 * layout[1]
    # hbar is carried as one more commutative variable, then split off
    big = size + 1
    gens = Poly.gens(big)
    f = evaluate(ast, layout, lambda i: gens[i], lambda c: Poly.const(big, c),
                 hbar=lambda: gens[size])
    coeffs = {}
    for e, c in f.terms.items():
        coeffs.setdefault(e[-1], {})[e[:-1]] = c
    return HbarPoly({k: Poly(size, t) for k, t in coeffs.items()}, size)


def parse_weyl(text, n=None, ring=QQ, hbar=True, order=None):
    """Weyl algebra element; products are taken in the written (non-commutative) order."""
    from .weyl import WeylElt

    ast = parse_ast(text)
    layout = _layout_for(ast, None if n is None else 2 * n)
    if layout[0] == "v":
        raise ParseError("Weyl elements use X/Y (or x/p) names", 0)
    n = layout[1]
    gens = WeylElt.gens(n, ring, hbar, order)
    return evaluate(ast, layout, lambda i: gens[i],
                    lambda c: WeylElt.const(n, ring(c), ring, hbar, order),
                    hbar=(lambda: WeylElt.hbar_elt(n, ring, order)) if hbar else None)
