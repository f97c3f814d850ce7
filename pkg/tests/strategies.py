"""Hypothesis strategies for the value types."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from weylsymp import corpus
from weylsymp.poly import Poly
from weylsymp.weyl import WeylElt

small_rationals = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
nonzero_rationals = small_rationals.filter(lambda c: c != 0)


@st.composite
def polys(draw, nvars=2, max_degree=3, max_terms=4):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_degree)] * nvars).filter(lambda e: sum(e) <= max_degree),
        small_rationals, max_size=max_terms))
    return Poly(nvars, terms)


@st.composite
def weyl_elts(draw, n=1, max_degree=3, hbar_max=1):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_degree)] * (2 * n), st.integers(0, hbar_max)),
        small_rationals, max_size=4))
    return WeylElt(n, terms)


def seeds():
    return st.integers(0, 2 ** 32 - 1)


@st.composite
def tame_words(draw, n=None, integer_only=False, length=(1, 4), degree_cap=27):
    seed = draw(seeds())
    n = n or draw(st.sampled_from((1, 2)))
    spec = corpus.CorpusSpec(n=n, integer_only=integer_only, word_length=length,
                             degree_cap=degree_cap)
    return corpus.random_word(random.Random(seed), spec)
