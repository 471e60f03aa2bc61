"""Rational self-maps of P^n given by tuples of homogeneous polynomials.

A ``MapTuple`` is a raw element of W_d: ``n+1`` polynomials of a common
degree, up to a common scalar.  ``reduce`` strips the gcd cofactor (exact
rationals only) and yields a ``BirationalMap`` candidate.  Birationality is
never decided; it is certified by exhibiting an inverse.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from cremona.errors import (
    DegenerateLine,
    DegreeMismatch,
    DimensionMismatch,
    UnsupportedDomain,
    VarCountMismatch,
    ZeroTuple,
    ZeroVector,
)
from cremona.poly import (
    QQ,
    ExactRational,
    HomogPoly,
    Padic,
    exact_divide,
    normalize_monic,
    partial_derivative,
    poly_eval,
    poly_gcd,
    substitute,
)


class MapTuple:
    """``n+1`` homogeneous polynomials of equal degree in ``n+1`` variables."""

    __slots__ = ("components",)

    def __init__(self, components):
        comps = tuple(components)
        if len(comps) < 2:
            raise DimensionMismatch("a self-map of P^n needs at least two components")
        nv = comps[0].nvars
        dom = comps[0].domain
        for c in comps:
            if c.nvars != nv:
                raise VarCountMismatch("components disagree on the number of variables")
            if c.domain != dom:
                raise UnsupportedDomain("components live in different domains")
        if nv != len(comps):
            raise DimensionMismatch(f"{len(comps)} components in {nv} variables")
        if all(c.is_zero() for c in comps):
            raise ZeroTuple("all components vanish")
        degs = {c.degree for c in comps if not c.is_zero()}
        if len(degs) != 1:
            raise DegreeMismatch(f"components have degrees {sorted(degs)}")
        d = degs.pop()
        comps = tuple(c if not c.is_zero() else HomogPoly.zero(nv, d, dom) for c in comps)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("MapTuple is immutable")

    @property
    def n(self) -> int:
        return len(self.components) - 1

    @property
    def nvars(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return next(c.degree for c in self.components if not c.is_zero())

    @property
    def domain(self):
        return self.components[0].domain

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def scale(self, s) -> MapTuple:
        return MapTuple(c.scale(s) for c in self.components)

    def with_domain(self, domain) -> MapTuple:
        return MapTuple(c.with_domain(domain) for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MapTuple):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash((self.nvars, self.degree))

    def projectively_equal(self, other: MapTuple) -> bool:
        """Equality up to a common nonzero scalar (exact cross-multiplication)."""
        if self.nvars != other.nvars or self.degree != other.degree:
            return False
        a, b = self.components, other.components
        # pick a pivot coefficient to compare ratios
        for i, c in enumerate(a):
            if not c.is_zero():
                e, lead = c.leading()
                other_lead = b[i].coefficient(e)
                if b[i].domain.is_zero(other_lead):
                    return False
                break
        return all(x.scale(other_lead) == y.scale(lead) for x, y in zip(a, b))

    def __str__(self) -> str:
        return "[" + " : ".join(str(c) for c in self.components) + "]"

    def __repr__(self) -> str:
        return f"MapTuple<{self.domain.tag}, n={self.n}, d={self.degree}>{self}"


class BirationalMap:
    """A (candidate) element of Bir(P^n) of bounded degree.

    ``reduced`` is True when the components are known to have constant gcd;
    over floats and p-adics tuples are taken as given and the flag is False.
    """

    __slots__ = ("tuple", "reduced", "certified_inverse")

    def __init__(self, tup: MapTuple, reduced: bool = False, certified_inverse: BirationalMap | None = None):
        if not isinstance(tup, MapTuple):
            tup = MapTuple(tup)
        object.__setattr__(self, "tuple", tup)
        object.__setattr__(self, "reduced", reduced)
        object.__setattr__(self, "certified_inverse", certified_inverse)

    def __setattr__(self, name, value):
        raise AttributeError("BirationalMap is immutable")

    @classmethod
    def from_components(cls, components) -> BirationalMap:
        """Build from polynomials, reducing automatically over QQ."""
        t = MapTuple(components)
        if isinstance(t.domain, ExactRational):
            return reduce(t)[0]
        return cls(t, reduced=False)

    @property
    def components(self):
        return self.tuple.components

    @property
    def degree(self) -> int:
        return self.tuple.degree

    @property
    def n(self) -> int:
        return self.tuple.n

    @property
    def domain(self):
        return self.tuple.domain

    def __matmul__(self, other: BirationalMap) -> BirationalMap:
        return compose(self, other)

    def __call__(self, point):
        return eval_point(self, point)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BirationalMap):
            return NotImplemented
        return self.tuple.projectively_equal(other.tuple)

    def __hash__(self):
        return hash(self.tuple)

    def __str__(self) -> str:
        return str(self.tuple)

    def __repr__(self) -> str:
        return f"BirationalMap<{self.domain.tag}, d={self.degree}>{self.tuple}"


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------


def variables(n: int, domain=QQ) -> list[HomogPoly]:
    return [HomogPoly.var(i, n + 1, domain) for i in range(n + 1)]


def identity(n: int, domain=QQ) -> BirationalMap:
    f = BirationalMap(MapTuple(variables(n, domain)), reduced=True)
    return BirationalMap(f.tuple, True, f)


def linear_map(matrix, domain=QQ) -> BirationalMap:
    """``x -> M x`` as a degree-one map."""
    rows = [list(r) for r in matrix]
    n = len(rows) - 1
    xs = variables(n, domain)
    comps = []
    for r in rows:
        if len(r) != n + 1:
            raise DimensionMismatch("matrix must be square")
        acc = HomogPoly.zero(n + 1, 1, domain)
        for c, x in zip(r, xs):
            acc = acc + x.scale(c)
        comps.append(acc)
    return BirationalMap(MapTuple(comps), reduced=True)


def matrix_inverse(matrix):
    """Exact Gauss-Jordan inverse of a rational matrix."""
    m = [[Fraction(x) for x in r] for r in matrix]
    k = len(m)
    aug = [r + [Fraction(int(i == j)) for j in range(k)] for i, r in enumerate(m)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [r[k:] for r in aug]


def linear_with_inverse(matrix) -> BirationalMap:
    f = linear_map(matrix)
    g = linear_map(matrix_inverse(matrix))
    return with_inverse(f, g)


# ---------------------------------------------------------------------------
# reduction and composition
# ---------------------------------------------------------------------------


def _lead_normalize(comps: list[HomogPoly]) -> list[HomogPoly]:
    first = next(c for c in comps if not c.is_zero())
    _, lc = first.leading()
    inv = Fraction(1) / lc
    return [c.scale(inv) for c in comps]


def reduce(t: MapTuple) -> tuple[BirationalMap, HomogPoly]:
    """Strip the common factor: returns (reduced map, monic cofactor)."""
    if not isinstance(t, MapTuple):
        t = MapTuple(t)
    if not isinstance(t.domain, ExactRational):
        raise UnsupportedDomain(f"exact reduction needs QQ, got {t.domain.tag}")
    g = None
    for c in t.components:
        if c.is_zero():
            continue
        g = c if g is None else poly_gcd(g, c)
        if g.degree == 0:
            break
    g = normalize_monic(g)
    if g.degree == 0:
        comps = list(t.components)
    else:
        comps = [exact_divide(c, g) if not c.is_zero() else HomogPoly.zero(t.nvars, t.degree - g.degree)
                 for c in t.components]
    comps = _lead_normalize(comps)
    return BirationalMap(MapTuple(comps), reduced=True), g


def compose(f: BirationalMap, g: BirationalMap) -> BirationalMap:
    """``f o g``: substitute the components of ``g`` into ``f`` and reduce."""
    return compose_with_cofactor(f, g)[0]


def compose_raw(f: BirationalMap, g: BirationalMap) -> MapTuple:
    if f.n != g.n:
        raise DimensionMismatch(f"P^{f.n} map composed with P^{g.n} map")
    if f.domain != g.domain:
        raise UnsupportedDomain("composition across domains")
    return MapTuple(substitute(c, g.components) for c in f.components)


def compose_with_cofactor(f: BirationalMap, g: BirationalMap):
    """``(f o g, cofactor)``; cofactor is None over inexact domains."""
    raw = compose_raw(f, g)
    if isinstance(raw.domain, ExactRational):
        red, cof = reduce(raw)
        inv = None
        if f.certified_inverse is not None and g.certified_inverse is not None:
            inv_raw = compose_raw(g.certified_inverse, f.certified_inverse)
            inv = reduce(inv_raw)[0]
        return BirationalMap(red.tuple, True, inv), cof
    return BirationalMap(raw, reduced=False), None


def is_identity(f: BirationalMap) -> bool:
    """True when ``f`` (reduced if exact) is projectively the identity."""
    t = f.tuple
    if isinstance(t.domain, ExactRational) and not f.reduced:
        t = reduce(t)[0].tuple
    if t.degree != 1:
        return False
    return t.projectively_equal(MapTuple(variables(t.n, t.domain)))


def order(f: BirationalMap, Dmax: int) -> int | None:
    """Least ``k <= Dmax`` with ``f^k = id``, or None when none exists."""
    if Dmax < 1:
        raise ValueError("Dmax must be at least 1")
    if not isinstance(f.domain, ExactRational):
        raise UnsupportedDomain("order is computed over exact rationals")
    it = f if f.reduced else reduce(f.tuple)[0]
    for k in range(1, Dmax + 1):
        if is_identity(it):
            return k
        if k < Dmax:
            it = compose(f, it)
    return None


def power(f: BirationalMap, k: int) -> BirationalMap:
    if k < 0:
        if f.certified_inverse is None:
            raise ValueError("negative power needs a certified inverse")
        return power(f.certified_inverse, -k)
    out = identity(f.n, f.domain)
    for _ in range(k):
        out = compose(f, out)
    return out


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def normalize_point(point, domain):
    """Canonical projective representative (see module docs of birmap)."""
    if isinstance(domain, (ExactRational, Padic)):
        xs = [domain.convert(x) for x in point]
        nz = [i for i, x in enumerate(xs) if not domain.is_zero(x)]
        if not nz:
            raise ZeroVector("the zero vector is not a projective point")
        piv = xs[nz[-1]]
        return tuple(domain.zero() if domain.is_zero(x) else x / piv for x in xs)
    v = np.array([complex(x) for x in point])
    nrm = np.linalg.norm(v)
    if nrm <= domain.eps:
        raise ZeroVector("the zero vector is not a projective point")
    v = v / nrm
    first = next(i for i, x in enumerate(v) if abs(x) > domain.eps)
    v = v * (abs(v[first]) / v[first])
    if domain.tag == "RR":
        return tuple(float(x.real) for x in v)
    return tuple(complex(x) for x in v)


def eval_point(f: BirationalMap, point):
    """Normalized image of ``point``, or None at an indeterminacy point."""
    dom = f.domain
    p = normalize_point(point, dom)
    vals = [poly_eval(c, p) for c in f.components]
    if isinstance(dom, (ExactRational, Padic)):
        if all(dom.is_zero(v) for v in vals):
            return None
        return normalize_point(vals, dom)
    scale = max(max((abs(c) for c in comp.terms.values()), default=0.0) for comp in f.components)
    if max(abs(v) for v in vals) <= dom.eps * max(1.0, scale):
        return None
    return normalize_point(vals, dom)


def points_equal(p, q, domain, tol: float = 1e-9) -> bool:
    if isinstance(domain, (ExactRational, Padic)):
        return all(a == b for a, b in zip(normalize_point(p, domain), normalize_point(q, domain)))
    u = np.array(normalize_point(p, domain), dtype=complex)
    v = np.array(normalize_point(q, domain), dtype=complex)
    return chordal(u, v) <= tol


def chordal(u, v) -> float:
    """Chordal distance ``sin`` of the angle between two lines in C^{n+1}."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    c = abs(np.vdot(u, v)) ** 2
    return float(np.sqrt(max(0.0, 1.0 - c)))


# ---------------------------------------------------------------------------
# Jacobian, contraction, inverse certification
# ---------------------------------------------------------------------------


def _det(m):
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(k):
        entry = m[0][j]
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = entry * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        nv = m[0][0].nvars
        return HomogPoly.zero(nv, 0, m[0][0].domain)
    return total


def jacobian_matrix(f: BirationalMap):
    return [[partial_derivative(c, j) for j in range(f.n + 1)] for c in f.components]


def jacobian_det(f: BirationalMap) -> HomogPoly:
    """Determinant of the matrix of partials, degree ``(n+1)(d-1)``."""
    if isinstance(f.domain, Padic):
        raise UnsupportedDomain("Jacobians are computed over QQ, RR or CC")
    det = _det(jacobian_matrix(f))
    if det.is_zero():
        return HomogPoly.zero(f.n + 1, (f.n + 1) * (f.degree - 1), f.domain)
    return det


def contract_image(f: BirationalMap, line):
    """Image point of a contracted line in P^2, or None if not contracted.

    ``line`` is a pair of points spanning it.  The components restricted to
    ``s*a + u*b`` are binary forms; the line is contracted exactly when they
    are pairwise proportional (coefficient matrix of rank one).
    """
    if f.n != 2:
        raise DimensionMismatch("contraction test is implemented on P^2")
    a, b = line
    dom = f.domain
    a = [dom.convert(x) for x in a]
    b = [dom.convert(x) for x in b]
    if _proportional(a, b, dom):
        raise DegenerateLine("the two points coincide projectively")
    param = [HomogPoly(2, 1, {(1, 0): ai, (0, 1): bi}, dom) for ai, bi in zip(a, b)]
    forms = [substitute(c, param) for c in f.components]
    d = f.degree
    rows = [[frm.coefficient((d - j, j)) for j in range(d + 1)] for frm in forms]
    if isinstance(dom, (ExactRational, Padic)):
        if all(dom.is_zero(x) for r in rows for x in r):
            return None
        for i in range(3):
            for k in range(i + 1, 3):
                for j in range(d + 1):
                    for l in range(j + 1, d + 1):
                        if not dom.is_zero(rows[i][j] * rows[k][l] - rows[i][l] * rows[k][j]):
                            return None
        col = next(j for j in range(d + 1) if any(not dom.is_zero(r[j]) for r in rows))
        return normalize_point([r[col] for r in rows], dom)
    mat = np.array(rows, dtype=complex)
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[0] <= dom.eps:
        return None
    if sv[1] > 1e-8 * sv[0]:
        return None
    col = int(np.argmax(np.abs(mat).sum(axis=0)))
    return normalize_point(mat[:, col], dom)


def _proportional(a, b, dom) -> bool:
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if not dom.is_zero(a[i] * b[j] - a[j] * b[i]):
                return False
    return True


def certify_inverse(f: BirationalMap, g: BirationalMap) -> bool:
    """True iff ``f o g`` and ``g o f`` both reduce to the identity."""
    if f.n != g.n:
        return False
    if not isinstance(f.domain, ExactRational) or not isinstance(g.domain, ExactRational):
        raise UnsupportedDomain("inverse certification runs over exact rationals")
    return is_identity(compose(f, g)) and is_identity(compose(g, f))


def with_inverse(f: BirationalMap, g: BirationalMap) -> BirationalMap:
    """A copy of ``f`` carrying ``g`` as certified inverse (checked)."""
    if not certify_inverse(f, g):
        raise ValueError("supplied map is not an inverse")
    g_back = BirationalMap(g.tuple, g.reduced, BirationalMap(f.tuple, f.reduced))
    return BirationalMap(f.tuple, f.reduced, g_back)
