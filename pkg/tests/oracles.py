"""Independent reference implementations used to freeze expected values.

None of these share code with the package kernels: Weyl products are computed
by rewriting words generator by generator, commutative algebra goes through
sympy, and star products apply the bidifferential operator one step at a time.
"""

from fractions import Fraction

import sympy as sp

from weylsymp.poly import Poly


# Weyl algebra by word rewriting ---------------------------------------------
#
# A word is a tuple of letters (kind, i) with kind 0 for x_i and 1 for y_i.
# The defining relation y_i x_j = x_j y_i + h*delta_ij is applied to the first
# out-of-order adjacent pair until every word is normal ordered.

def _out_of_order(a, b):
    return a > b


def rewrite_normal(elem):
    """``{(word, hpow): coeff}`` -> same with every word normal ordered."""
    todo = dict(elem)
    done = {}
    while todo:
        (word, hp), c = todo.popitem()
        if c == 0:
            continue
        k = next((k for k in range(len(word) - 1) if _out_of_order(word[k], word[k + 1])), None)
        if k is None:
            done[(word, hp)] = done.get((word, hp), 0) + c
            continue
        a, b = word[k], word[k + 1]
        swapped = word[:k] + (b, a) + word[k + 2:]
        todo[(swapped, hp)] = todo.get((swapped, hp), 0) + c
        if a[0] == 1 and b[0] == 0 and a[1] == b[1]:
            shorter = word[:k] + word[k + 2:]
            todo[(shorter, hp + 1)] = todo.get((shorter, hp + 1), 0) + c
    return {key: c for key, c in done.items() if c != 0}


def weyl_to_words(u):
    out = {}
    n = u.n
    for key, c in u.terms.items():
        word = []
        for i in range(n):
            word += [(0, i)] * key[i]
        for i in range(n):
            word += [(1, i)] * key[n + i]
        out[(tuple(word), key[-1])] = Fraction(c)
    return out


def words_to_keys(elem, n):
    out = {}
    for (word, hp), c in elem.items():
        key = [0] * (2 * n) + [hp]
        for kind, i in word:
            key[kind * n + i] += 1
        out[tuple(key)] = c
    return {k: v for k, v in out.items() if v != 0}


def oracle_weyl_mul(u, v):
    """Product of two WeylElt as ``{key: Fraction}`` via concatenation and rewriting."""
    a, b = weyl_to_words(u), weyl_to_words(v)
    prod = {}
    for (wa, ha), ca in a.items():
        for (wb, hb), cb in b.items():
            key = (wa + wb, ha + hb)
            prod[key] = prod.get(key, 0) + ca * cb
    return words_to_keys(rewrite_normal(prod), u.n)


# sympy bridges ---------------------------------------------------------------

def symbols(nvars):
    return sp.symbols(f"v0:{nvars}")


def to_sympy(f, syms=None):
    syms = syms or symbols(f.nvars)
    expr = sp.Integer(0)
    for e, c in f.terms.items():
        c = Fraction(c)
        term = sp.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sp.expand(expr)


def from_sympy(expr, nvars, syms=None):
    syms = syms or symbols(nvars)
    expr = sp.expand(expr)
    if expr == 0:
        return Poly.zero(nvars)
    poly = sp.Poly(expr, *syms)
    return Poly(nvars, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def oracle_compose(phi, psi):
    """Images of psi substituted into phi via simultaneous sympy substitution."""
    syms = symbols(phi.nvars)
    sub = {s: to_sympy(g, syms) for s, g in zip(syms, psi.images)}
    return [from_sympy(to_sympy(f, syms).subs(sub, simultaneous=True), phi.nvars, syms)
            for f in phi.images]


def oracle_jacobian(images):
    syms = symbols(len(images))
    m = sp.Matrix([[sp.diff(to_sympy(f, syms), s) for s in syms] for f in images])
    return from_sympy(m.det(method="berkowitz"), len(images), syms)


def oracle_bracket(f, g):
    """``sum_i (df/dp_i dg/dx_i - df/dx_i dg/dp_i)`` in sympy."""
    n = f.nvars // 2
    syms = symbols(f.nvars)
    F, G = to_sympy(f, syms), to_sympy(g, syms)
    out = sum(sp.diff(F, syms[n + i]) * sp.diff(G, syms[i])
              - sp.diff(F, syms[i]) * sp.diff(G, syms[n + i]) for i in range(n))
    return from_sympy(out, f.nvars, syms)


# star products by iterating the bidifferential operator ---------------------

def oracle_star(f, g, ordering):
    """``sum_k c^k/k! D^k (f(u) g(w))|_{w=u}`` with D applied one step at a time.

    Normal: ``D = sum d/dp_i(u) d/dx_i(w)``, ``c = h``.
    Moyal: ``D = sum (d/dp_i(u) d/dx_i(w) - d/dx_i(u) d/dp_i(w))``, ``c = h/2``.
    Inputs are Poly; the result is ``{k: Poly}``.
    """
    nvars = f.nvars
    n = nvars // 2
    u = sp.symbols(f"u0:{nvars}")
    w = sp.symbols(f"w0:{nvars}")
    cur = sp.expand(to_sympy(f, u) * to_sympy(g, w))
    out = {}
    k = 0
    fact = 1
    while cur != 0:
        if k:
            fact *= k
        back = cur.subs({wi: ui for wi, ui in zip(w, u)}, simultaneous=True)
        weight = sp.Rational(1, fact) * (sp.Rational(1, 2 ** k) if ordering == "moyal" else 1)
        val = from_sympy(back * weight, nvars, u)
        if not val.is_zero():
            out[k] = val
        nxt = 0
        for i in range(n):
            nxt += sp.diff(cur, u[n + i], w[i])
            if ordering == "moyal":
                nxt -= sp.diff(cur, u[i], w[n + i])
        cur = sp.expand(nxt)
        k += 1
    return out
