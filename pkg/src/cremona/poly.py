"""Coefficient domains and homogeneous multivariate polynomials.

Four domains share one small contract (``convert``, ``is_zero``, ``zero``,
``one``, ``fmt``): exact rationals, real and complex floats with an absolute
zero tolerance, and fixed-precision p-adics.  ``HomogPoly`` is an immutable
sparse polynomial whose terms all have the same total degree.

Monomials are ordered graded-lexicographically with ``x0 > x1 > ...``; this
fixes both the printed form and the gcd normalization.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from cremona.errors import (
    ArityMismatch,
    DegreeMismatch,
    IndexOutOfRange,
    NotExactlyDivisible,
    UnsupportedDomain,
    VarCountMismatch,
)
from cremona.padicnum import PadicNum

# ---------------------------------------------------------------------------
# coefficient domains
# ---------------------------------------------------------------------------


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, PadicNum):
        raise UnsupportedDomain("cannot read a p-adic number as an exact rational")
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise UnsupportedDomain(f"cannot read {type(x).__name__} as an exact rational")


@dataclass(frozen=True)
class ExactRational:
    tag = "QQ"
    exact = True

    def convert(self, x) -> Fraction:
        return _to_fraction(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def fmt(self, c) -> str:
        return str(c)


@dataclass(frozen=True)
class RealFloat:
    eps: float = 1e-10
    tag = "RR"
    exact = False

    def convert(self, x) -> float:
        if isinstance(x, PadicNum):
            raise UnsupportedDomain("cannot read a p-adic number as a real float")
        if isinstance(x, complex):
            if abs(x.imag) > self.eps:
                raise UnsupportedDomain("complex value in a real domain")
            x = x.real
        return float(x)

    def is_zero(self, x) -> bool:
        return abs(x) <= self.eps

    def zero(self):
        return 0.0

    def one(self):
        return 1.0

    def fmt(self, c) -> str:
        return repr(float(c))


@dataclass(frozen=True)
class ComplexFloat:
    eps: float = 1e-10
    tag = "CC"
    exact = False

    def convert(self, x) -> complex:
        if isinstance(x, PadicNum):
            raise UnsupportedDomain("cannot read a p-adic number as a complex float")
        return complex(x)

    def is_zero(self, x) -> bool:
        return abs(x) <= self.eps

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def fmt(self, c) -> str:
        c = complex(c)
        # adding 0.0 turns a signed zero into +0.0 so the text round-trips
        re, im = c.real + 0.0, c.imag + 0.0
        return f"({re!r}{'-' if im < 0 else '+'}{abs(im)!r}i)"


@dataclass(frozen=True)
class Padic:
    p: int
    N: int = 12
    exact = True

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")
        if self.N < 1:
            raise ValueError("precision must be at least 1")

    @property
    def tag(self) -> str:
        return f"Qp:{self.p}:{self.N}"

    def convert(self, x) -> PadicNum:
        if isinstance(x, PadicNum):
            if x.p != self.p:
                raise UnsupportedDomain("p-adic number over a different prime")
            return x
        return PadicNum.from_rational(_to_fraction(x), self.p, self.N)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def zero(self):
        return PadicNum.zero(self.p, self.N)

    def one(self):
        return PadicNum.from_rational(1, self.p, self.N)

    def fmt(self, c) -> str:
        return f"({c})"


QQ = ExactRational()
RR = RealFloat()
CC = ComplexFloat()

Domain = ExactRational | RealFloat | ComplexFloat | Padic


def domain_from_tag(tag: str) -> Domain:
    """``QQ``, ``RR``, ``CC`` or ``Qp:<p>:<N>``."""
    if tag == "QQ":
        return QQ
    if tag == "RR":
        return RR
    if tag == "CC":
        return CC
    parts = tag.split(":")
    if len(parts) == 3 and parts[0] == "Qp":
        return Padic(int(parts[1]), int(parts[2]))
    raise ValueError(f"unknown field tag {tag!r}")


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given degree, in descending grlex order."""
    return list(_compositions(degree, nvars))


def monomial_str(e) -> str:
    parts = []
    for i, a in enumerate(e):
        if a == 1:
            parts.append(f"x{i}")
        elif a > 1:
            parts.append(f"x{i}^{a}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# HomogPoly
# ---------------------------------------------------------------------------


class HomogPoly:
    __slots__ = ("nvars", "degree", "_terms", "domain")

    def __init__(self, nvars: int, degree: int, terms=None, domain: Domain = QQ):
        if nvars < 1:
            raise ValueError("need at least one variable")
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != nvars:
                raise VarCountMismatch(f"exponent {e} has length {len(e)}, expected {nvars}")
            if min(e) < 0:
                raise ValueError(f"negative exponent in {e}")
            if sum(e) != degree:
                raise DegreeMismatch(f"monomial {e} has degree {sum(e)}, expected {degree}")
            c = domain.convert(c)
            if e in clean:
                c = clean[e] + c
            clean[e] = c
        clean = {e: c for e, c in clean.items() if not domain.is_zero(c)}
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "domain", domain)

    def __setattr__(self, name, value):
        raise AttributeError("HomogPoly is immutable")

    # constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, degree: int = 0, domain: Domain = QQ) -> HomogPoly:
        return cls(nvars, degree, {}, domain)

    @classmethod
    def constant(cls, c, nvars: int, domain: Domain = QQ) -> HomogPoly:
        return cls(nvars, 0, {(0,) * nvars: c}, domain)

    @classmethod
    def var(cls, i: int, nvars: int, domain: Domain = QQ) -> HomogPoly:
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable x{i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, 1, {tuple(e): 1}, domain)

    @classmethod
    def _raw(cls, nvars, degree, terms, domain) -> HomogPoly:
        # trusted constructor: terms already clean
        obj = object.__new__(cls)
        object.__setattr__(obj, "nvars", nvars)
        object.__setattr__(obj, "degree", degree)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "domain", domain)
        return obj

    # inspection --------------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return self.degree == 0 and bool(self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0], reverse=True)

    def leading(self):
        """Leading (exponent, coefficient) in grlex order."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms)
        return e, self._terms[e]

    def coefficient(self, e):
        return self._terms.get(tuple(e), self.domain.zero())

    def coeff_vector(self) -> list:
        return [self.coefficient(e) for e in monomials(self.nvars, self.degree)]

    def to_arrays(self):
        """Exponents (int64, terms x nvars) and complex coefficients."""
        items = self.sorted_terms()
        exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
        if isinstance(self.domain, Padic):
            raise UnsupportedDomain("p-adic coefficients have no float image")
        coeffs = np.array([complex(c) for _, c in items], dtype=np.complex128)
        return exps, coeffs

    def with_domain(self, domain: Domain) -> HomogPoly:
        return HomogPoly(self.nvars, self.degree, dict(self._terms), domain)

    # arithmetic --------------------------------------------------------------

    def _check(self, other: HomogPoly):
        if not isinstance(other, HomogPoly):
            raise TypeError("expected a HomogPoly")
        if other.nvars != self.nvars:
            raise VarCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        if other.domain != self.domain:
            raise UnsupportedDomain(f"mixed domains {self.domain.tag} and {other.domain.tag}")

    def __add__(self, other: HomogPoly) -> HomogPoly:
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add degrees {self.degree} and {other.degree}")
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out[e] + c if e in out else c
        dom = self.domain
        out = {e: c for e, c in out.items() if not dom.is_zero(c)}
        return HomogPoly._raw(self.nvars, self.degree, out, dom)

    def __neg__(self) -> HomogPoly:
        return HomogPoly._raw(self.nvars, self.degree, {e: -c for e, c in self._terms.items()}, self.domain)

    def __sub__(self, other: HomogPoly) -> HomogPoly:
        return self + (-other)

    def __mul__(self, other) -> HomogPoly:
        if not isinstance(other, HomogPoly):
            return self.scale(other)
        self._check(other)
        dom = self.domain
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        out = {e: c for e, c in out.items() if not dom.is_zero(c)}
        return HomogPoly._raw(self.nvars, self.degree + other.degree, out, dom)

    def __rmul__(self, other) -> HomogPoly:
        return self.scale(other)

    def scale(self, s) -> HomogPoly:
        dom = self.domain
        s = dom.convert(s)
        out = {e: c * s for e, c in self._terms.items()}
        out = {e: c for e, c in out.items() if not dom.is_zero(c)}
        return HomogPoly._raw(self.nvars, self.degree, out, dom)

    def __pow__(self, k: int) -> HomogPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = HomogPoly.constant(1, self.nvars, self.domain)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogPoly):
            return NotImplemented
        if self.nvars != other.nvars or self.domain != other.domain:
            return False
        if self.is_zero() and other.is_zero():
            return True
        if self.degree != other.degree:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.nvars, self.degree))

    def __call__(self, *point):
        return poly_eval(self, point)

    # text ----------------------------------------------------------------------

    def __str__(self) -> str:
        return poly_to_str(self)

    def __repr__(self) -> str:
        return f"HomogPoly<{self.domain.tag}, deg {self.degree}>({self})"


def poly_to_str(f: HomogPoly) -> str:
    """Canonical text: grlex-descending terms, explicit ``*`` between factors."""
    if f.is_zero():
        return "0"
    dom = f.domain
    pieces = []
    for e, c in f.sorted_terms():
        mono = monomial_str(e)
        if isinstance(dom, ExactRational):
            neg = c < 0
            a = -c if neg else c
            cs = "" if (a == 1 and mono) else str(a)
        elif isinstance(dom, RealFloat):
            neg = c < 0 or str(c).startswith("-")
            a = abs(c)
            cs = "" if (a == 1.0 and mono) else repr(float(a))
        else:
            neg = False
            cs = dom.fmt(c)
        body = cs + ("*" if cs and mono else "") + mono
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


# ---------------------------------------------------------------------------
# named operations
# ---------------------------------------------------------------------------


def poly_arith(a: HomogPoly, b, op: str) -> HomogPoly:
    """``op`` is ``add``, ``sub``, ``mul`` or ``scalar_mul`` (``b`` a scalar)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scalar_mul":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: HomogPoly, maps) -> HomogPoly:
    """``f(maps[0], ..., maps[n])``; all ``maps`` share nvars and degree."""
    maps = list(maps)
    if len(maps) != f.nvars:
        raise ArityMismatch(f"{len(maps)} substitutions for {f.nvars} variables")
    if not maps:
        return f
    nv = maps[0].nvars
    dom = f.domain
    degs = {g.degree for g in maps if not g.is_zero()}
    if len(degs) > 1:
        raise DegreeMismatch(f"substituted polynomials have degrees {sorted(degs)}")
    e_deg = degs.pop() if degs else maps[0].degree
    for g in maps:
        if g.nvars != nv:
            raise VarCountMismatch("substituted polynomials disagree on nvars")
        if g.domain != dom:
            raise UnsupportedDomain("substituted polynomials live in another domain")
    out_deg = f.degree * e_deg
    # power cache per variable
    cache: list[dict[int, HomogPoly]] = [dict() for _ in maps]

    def power(i: int, k: int) -> HomogPoly:
        if k not in cache[i]:
            if k == 0:
                cache[i][k] = HomogPoly.constant(1, nv, dom)
            else:
                cache[i][k] = power(i, k - 1) * maps[i]
        return cache[i][k]

    total: dict = {}
    for e, c in f._terms.items():
        term = HomogPoly.constant(c, nv, dom)
        for i, a in enumerate(e):
            if a:
                term = term * power(i, a)
        for m, v in term._terms.items():
            total[m] = total[m] + v if m in total else v
    total = {m: v for m, v in total.items() if not dom.is_zero(v)}
    return HomogPoly._raw(nv, out_deg, total, dom)


def poly_eval(f: HomogPoly, point):
    """Evaluate at a coordinate vector; entries are converted into the domain."""
    point = list(point)
    if len(point) != f.nvars:
        raise ArityMismatch(f"point of length {len(point)} for {f.nvars} variables")
    dom = f.domain
    xs = [dom.convert(x) for x in point]
    total = dom.zero()
    for e, c in f._terms.items():
        t = c
        for x, a in zip(xs, e):
            if a:
                t = t * x**a
        total = total + t
    return total


def partial_derivative(f: HomogPoly, i: int) -> HomogPoly:
    if not 0 <= i < f.nvars:
        raise IndexOutOfRange(f"variable index {i} out of range for {f.nvars} variables")
    if f.degree == 0:
        return HomogPoly.zero(f.nvars, 0, f.domain)
    out = {}
    for e, c in f._terms.items():
        a = e[i]
        if a:
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * a
    dom = f.domain
    out = {e: c for e, c in out.items() if not dom.is_zero(c)}
    return HomogPoly._raw(f.nvars, f.degree - 1, out, dom)


def euler_defect(f: HomogPoly) -> HomogPoly:
    """``sum x_i df/dx_i - d*f``; zero for every homogeneous ``f``."""
    n = f.nvars
    acc = f.scale(-f.degree)
    for i in range(n):
        acc = acc + HomogPoly.var(i, n, f.domain) * partial_derivative(f, i)
    return acc


# ---------------------------------------------------------------------------
# exact division and gcd over QQ (sparse dict helpers)
# ---------------------------------------------------------------------------


def _require_qq(*polys: HomogPoly):
    for f in polys:
        if not isinstance(f.domain, ExactRational):
            raise UnsupportedDomain(f"operation needs exact rationals, got {f.domain.tag}")


def _d_sub_scaled(r: dict, b: dict, c, shift) -> None:
    # r -= c * x^shift * b, in place
    for e, v in b.items():
        m = tuple(x + y for x, y in zip(e, shift))
        nv = r.get(m, 0) - c * v
        if nv:
            r[m] = nv
        else:
            r.pop(m, None)


def _d_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _d_divide(a: dict, b: dict):
    """Exact quotient a/b in lex order, or None when b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lb = max(b)
    cb = b[lb]
    r = dict(a)
    q: dict = {}
    while r:
        lr = max(r)
        shift = tuple(x - y for x, y in zip(lr, lb))
        if min(shift) < 0:
            return None
        c = r[lr] / cb
        q[shift] = q.get(shift, 0) + c
        _d_sub_scaled(r, b, c, shift)
    return q


def _d_normalize(a: dict) -> dict:
    if not a:
        return a
    c = a[max(a)]
    return {e: v / c for e, v in a.items()}


def _d_deg(a: dict, k: int) -> int:
    return max(e[k] for e in a)


def _d_coeffs(a: dict, k: int) -> dict[int, dict]:
    """Split by the power of x_k; coefficients have x_k exponent zeroed."""
    out: dict[int, dict] = {}
    for e, c in a.items():
        j = e[k]
        e2 = e[:k] + (0,) + e[k + 1:]
        out.setdefault(j, {})[e2] = c
    return out


def _d_content(a: dict, k: int) -> dict:
    g: dict = {}
    for c in _d_coeffs(a, k).values():
        g = _d_gcd(g, c, k - 1)
        if len(g) == 1 and not any(next(iter(g))):
            break
    return g


def _d_gcd(a: dict, b: dict, k: int) -> dict:
    """Monic gcd of polynomials involving only x_0..x_k."""
    if not a:
        return _d_normalize(b)
    if not b:
        return _d_normalize(a)
    nv = len(next(iter(a)))
    one = {(0,) * nv: Fraction(1)}
    # monomial content first
    mins = [min(min(e[i] for e in a), min(e[i] for e in b)) for i in range(nv)]
    if any(mins):
        mono = tuple(mins)
        a = {tuple(x - y for x, y in zip(e, mono)): c for e, c in a.items()}
        b = {tuple(x - y for x, y in zip(e, mono)): c for e, c in b.items()}
        rest = _d_gcd(a, b, k)
        return {tuple(x + y for x, y in zip(e, mono)): c for e, c in rest.items()}
    while k >= 0 and all(e[k] == 0 for e in a) and all(e[k] == 0 for e in b):
        k -= 1
    if k < 0:
        return one
    ca, cb = _d_content(a, k), _d_content(b, k)
    c = _d_gcd(ca, cb, k - 1)
    pa, pb = _d_divide(a, ca), _d_divide(b, cb)
    if _d_deg(pa, k) < _d_deg(pb, k):
        pa, pb = pb, pa
    while pb and _d_deg(pb, k) > 0:
        r = _d_prem(pa, pb, k)
        pa = pb
        if not r:
            pb = {}
            break
        pb = _d_divide(r, _d_content(r, k))
        pb = _d_normalize(pb)
    if pb:
        # pb has zero degree in x_k and is primitive: the gcd of pp parts is 1
        g = one
    else:
        g = _d_normalize(_d_divide(pa, _d_content(pa, k)))
    return _d_normalize(_d_mul(c, g))


def _d_prem(a: dict, b: dict, k: int) -> dict:
    """Sparse pseudo-remainder of ``a`` by ``b`` with respect to x_k."""
    db = _d_deg(b, k)
    lcb = _d_coeffs(b, k)[db]
    r = dict(a)
    while r and _d_deg(r, k) >= db:
        dr = _d_deg(r, k)
        lcr = _d_coeffs(r, k)[dr]
        shift = tuple(0 if i != k else dr - db for i in range(len(next(iter(a)))))
        left = _d_mul(lcb, r)
        right = _d_mul(_d_mul(lcr, {shift: Fraction(1)}), b)
        for e, v in right.items():
            nv = left.get(e, 0) - v
            if nv:
                left[e] = nv
            else:
                left.pop(e, None)
        r = left
    return r


def exact_divide(a: HomogPoly, b: HomogPoly) -> HomogPoly:
    """The quotient ``a / b``; raises NotExactlyDivisible on a remainder."""
    _require_qq(a, b)
    if a.nvars != b.nvars:
        raise VarCountMismatch("division across different variable counts")
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return HomogPoly.zero(a.nvars, max(a.degree - b.degree, 0), a.domain)
    q = _d_divide(dict(a._terms), dict(b._terms))
    if q is None or a.degree < b.degree:
        raise NotExactlyDivisible(f"{b} does not divide {a}")
    return HomogPoly._raw(a.nvars, a.degree - b.degree, {e: Fraction(c) for e, c in q.items()}, a.domain)


def divides(b: HomogPoly, a: HomogPoly) -> bool:
    try:
        exact_divide(a, b)
    except NotExactlyDivisible:
        return False
    return True


def poly_gcd(a: HomogPoly, b: HomogPoly) -> HomogPoly:
    """Greatest common divisor over QQ, leading grlex coefficient 1."""
    _require_qq(a, b)
    if a.nvars != b.nvars:
        raise VarCountMismatch(f"{a.nvars} vs {b.nvars} variables")
    if a.is_zero() and b.is_zero():
        return HomogPoly.zero(a.nvars, 0, QQ)
    g = _d_gcd(dict(a._terms), dict(b._terms), a.nvars - 1)
    deg = sum(next(iter(g)))
    return HomogPoly._raw(a.nvars, deg, {e: Fraction(c) for e, c in g.items()}, QQ)


def normalize_monic(f: HomogPoly) -> HomogPoly:
    """Scale so the leading grlex coefficient is 1 (exact domains only)."""
    if f.is_zero():
        return f
    _, c = f.leading()
    return f.scale(Fraction(1) / c if isinstance(f.domain, ExactRational) else 1 / c)


def random_poly(rng, nvars: int, degree: int, nterms: int = 4, bound: int = 5, domain: Domain = QQ) -> HomogPoly:
    """Random sparse polynomial with small integer-ratio coefficients."""
    monos = monomials(nvars, degree)
    idx = rng.choice(len(monos), size=min(nterms, len(monos)), replace=False)
    terms = {}
    for i in idx:
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(1, bound + 1))
        terms[monos[int(i)]] = Fraction(num, den)
    f = HomogPoly(nvars, degree, terms, QQ)
    return f if domain == QQ else f.with_domain(domain)


__all__ = [
    "ExactRational",
    "RealFloat",
    "ComplexFloat",
    "Padic",
    "QQ",
    "RR",
    "CC",
    "domain_from_tag",
    "HomogPoly",
    "monomials",
    "poly_arith",
    "substitute",
    "poly_eval",
    "partial_derivative",
    "poly_gcd",
    "exact_divide",
    "divides",
    "euler_defect",
    "normalize_monic",
    "poly_to_str",
    "random_poly",
]
