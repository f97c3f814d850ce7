"""Exact algebra for polynomial symplectomorphisms, Weyl algebra automorphisms and star products."""

from .errors import AlgebraError
from .rings import QQ, GF, Zp2, HbarSeriesRing
from .poly import Poly
from .symplectic import (Endo, Linear, PoissonStructure, TameWord, Transvection,
                         endo_compose, tame_evaluate, tame_invert, poisson_bracket)
from .weyl import WeylAuto, WeylElt
from .star import HbarPoly, StarOrdering, lift_tame, classical_limit, star

__all__ = [
    "AlgebraError", "QQ", "GF", "Zp2", "HbarSeriesRing", "Poly", "Endo", "Linear",
    "PoissonStructure", "TameWord", "Transvection", "endo_compose", "tame_evaluate",
    "tame_invert", "poisson_bracket", "WeylAuto", "WeylElt", "HbarPoly", "StarOrdering",
    "lift_tame", "classical_limit", "star",
]

__version__ = "0.1.0"
