"""Named maps and parametric families of plane Cremona transformations."""

from __future__ import annotations

import math
from fractions import Fraction

from cremona.birmap import BirationalMap, MapTuple, identity, with_inverse
from cremona.poly import QQ, HomogPoly


def _xs(domain=QQ):
    return [HomogPoly.var(i, 3, domain) for i in range(3)]


def _map(comps, domain=QQ, inverse=None) -> BirationalMap:
    f = BirationalMap(MapTuple(comps), reduced=domain == QQ)
    if inverse is not None:
        return with_inverse(f, inverse)
    return f


def sigma() -> BirationalMap:
    """The standard quadratic involution ``[x1x2 : x0x2 : x0x1]``."""
    x0, x1, x2 = _xs()
    return _map([x1 * x2, x0 * x2, x0 * x1])


def pointwise_member(m, domain=QQ) -> BirationalMap:
    """``[x0^2 : x0x1 + x2^2/m : x0x2]``."""
    x0, x1, x2 = _xs(domain)
    c = Fraction(1, m) if domain == QQ else 1.0 / m
    return _map([x0 * x0, x0 * x1 + (x2 * x2).scale(c), x0 * x2], domain)


def factorial_member(m: int) -> MapTuple:
    """``[x0^m : x0^(m-1)x1 + x2^m/m! : x0^(m-1)x2]`` as a raw tuple."""
    x0, x1, x2 = _xs()
    lead = x0 ** (m - 1)
    return MapTuple([x0**m, lead * x1 + (x2**m).scale(Fraction(1, math.factorial(m))), lead * x2])


def line_shift(a) -> BirationalMap:
    """``[x0 + a*x1 : x1 : x2]``; inverse is ``line_shift(-a)``."""
    x0, x1, x2 = _xs()
    a = Fraction(a)
    f = _map([x0 + x1.scale(a), x1, x2])
    g = _map([x0 - x1.scale(a), x1, x2])
    return with_inverse(f, g)


def moving_line_shift(m: int) -> BirationalMap:
    """The shift used with the pointwise family so that the composite
    contracts ``{x0 + x1/m = 0}``."""
    return line_shift(Fraction(1, m))


def quadratic_shear(t, domain=QQ) -> BirationalMap:
    """``[x0^2 : x0x1 : x0x2 + t(1-t) x1^2]``."""
    x0, x1, x2 = _xs(domain)
    c = t * (1 - t)
    return _map([x0 * x0, x0 * x1, x0 * x2 + (x1 * x1).scale(c)], domain)


def nonlift_member(t, c, domain=QQ) -> BirationalMap:
    """``[x0 P : x1 P : x2 P + t x0 x1]`` with ``P = c x0 + x1``.

    At ``c = 0`` the factor ``x1`` is common to all components, so the
    tuple is left unreduced there.
    """
    x0, x1, x2 = _xs(domain)
    P = x0.scale(c) + x1
    comps = [x0 * P, x1 * P, x2 * P + (x0 * x1).scale(t)]
    if domain == QQ and c == 0:
        return BirationalMap(MapTuple(comps), reduced=False)
    return _map(comps, domain)


def de_jonquieres(A: HomogPoly, B: HomogPoly) -> BirationalMap:
    """``[x0 B : x1 B : x2 B + A]`` with ``A`` of degree ``deg B + 1`` in x0, x1.

    In the chart ``x0 = 1`` this is ``(x1, x2 + A/B)``; the inverse replaces
    ``A`` by ``-A``.
    """
    x0, x1, x2 = _xs()
    f = _map([x0 * B, x1 * B, x2 * B + A])
    g = _map([x0 * B, x1 * B, x2 * B - A])
    return with_inverse(f, g)


def id2() -> BirationalMap:
    return identity(2)
