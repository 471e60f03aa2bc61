from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cremona import families
from cremona.birmap import BirationalMap, linear_with_inverse, with_inverse
from cremona.poly import QQ, HomogPoly, monomials

F = Fraction

settings.register_profile("repo", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))


@st.composite
def polys(draw, nvars=3, degree=None, max_terms=4, allow_zero=True):
    d = draw(st.integers(0, 3)) if degree is None else degree
    monos = monomials(nvars, d)
    chosen = draw(st.lists(st.sampled_from(monos), min_size=0 if allow_zero else 1,
                           max_size=min(max_terms, len(monos)), unique=True))
    terms = {e: draw(fractions.filter(bool)) for e in chosen}
    return HomogPoly(nvars, d, terms, QQ)


def to_sympy(f: HomogPoly):
    xs = sympy.symbols(f"x0:{f.nvars}")
    expr = sympy.Integer(0)
    for e, c in f.terms.items():
        mono = sympy.Integer(1)
        for x, k in zip(xs, e):
            mono *= x**k
        expr += sympy.Rational(c.numerator, c.denominator) * mono
    return sympy.expand(expr), xs


def from_sympy(expr, nvars: int) -> HomogPoly:
    xs = sympy.symbols(f"x0:{nvars}")
    P = sympy.Poly(expr, *xs)
    terms = {m: Fraction(int(c.p), int(c.q)) for m, c in P.terms()}
    deg = P.total_degree() if terms else 0
    return HomogPoly(nvars, deg, terms, QQ)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def random_certified(rng) -> BirationalMap:
    # linear maps, quadratic shears and sigma, each with an exact inverse
    kind = rng.integers(0, 3)
    if kind == 0:
        while True:
            m = rng.integers(-2, 3, size=(3, 3)).tolist()
            if _det3(m) != 0:
                return linear_with_inverse(m)
    if kind == 1:
        a = F(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
        return families.quadratic_shear(a) if a not in (0, 1) else families.line_shift(a + 1)
    return with_inverse(families.sigma(), families.sigma())
