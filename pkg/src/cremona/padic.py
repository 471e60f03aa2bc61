"""Gauss norms on truncated p-adic power series and the 1/p^2 identity gate.

A map over QQ is conjugated, dehomogenized at ``x0 = 1`` and expanded as
truncated power series with coefficients in the p-adic integers.  A map of
finite order whose expansion is within ``p^-2`` of the identity (in Gauss
norm) must be the identity; the gate checks both hypotheses and reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from cremona.birmap import (
    BirationalMap,
    MapTuple,
    compose,
    identity,
    is_identity,
    linear_map,
    linear_with_inverse,
    order,
    with_inverse,
)
from cremona.errors import CoefficientEscapesR, DenominatorNotUnit, PrecisionExhausted
from cremona.padicnum import INF, PadicNum, valuation_rational
from cremona.poly import ExactRational, HomogPoly, Padic, monomials

# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------


class Series:
    """Power series in ``n`` variables over Q_p, truncated above total degree T.

    Coefficients that become zero at their stated precision are dropped;
    ``floor`` keeps the smallest absolute precision among them so the loss
    stays visible to ``gauss_norm``.
    """

    __slots__ = ("n", "T", "p", "N", "terms", "floor")

    def __init__(self, n: int, T: int, p: int, N: int, terms=None, floor=INF):
        self.n, self.T, self.p, self.N = n, T, p, N
        clean = {}
        fl = floor
        for e, c in (terms or {}).items():
            e = tuple(e)
            if sum(e) > T:
                continue
            if not isinstance(c, PadicNum):
                c = PadicNum.from_rational(Fraction(c), p, N)
            if e in clean:
                c = clean[e] + c
            if c.is_zero():
                if not c.is_exact_zero():
                    fl = min(fl, c.absprec)
                clean.pop(e, None)
                continue
            clean[e] = c
        self.terms = clean
        self.floor = fl

    @classmethod
    def var(cls, i: int, n: int, T: int, p: int, N: int) -> Series:
        e = [0] * n
        e[i] = 1
        return cls(n, T, p, N, {tuple(e): 1})

    @classmethod
    def constant(cls, c, n: int, T: int, p: int, N: int) -> Series:
        return cls(n, T, p, N, {(0,) * n: c})

    @classmethod
    def from_poly(cls, f: HomogPoly, chart: int, T: int, p: int, N: int) -> Series:
        """Dehomogenize ``f`` by setting ``x_chart = 1``."""
        terms = {}
        for e, c in f.terms.items():
            e2 = e[:chart] + e[chart + 1:]
            terms[e2] = terms[e2] + c if e2 in terms else c
        return cls(f.nvars - 1, T, p, N, {e: _padic(c, p, N) for e, c in terms.items()})

    def _like(self, terms, floor) -> Series:
        return Series(self.n, self.T, self.p, self.N, terms, floor)

    def __add__(self, other: Series) -> Series:
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return self._like(terms, min(self.floor, other.floor))

    def __neg__(self) -> Series:
        return self._like({e: -c for e, c in self.terms.items()}, self.floor)

    def __sub__(self, other: Series) -> Series:
        return self + (-other)

    def __mul__(self, other) -> Series:
        if not isinstance(other, Series):
            c = _padic(other, self.p, self.N)
            fl = self.floor
            if fl != INF and not c.is_exact_zero():
                fl = fl + c.v
            return self._like({e: a * c for e, a in self.terms.items()}, fl)
        terms: dict = {}
        for e1, a in self.terms.items():
            for e2, b in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if sum(e) > self.T:
                    continue
                v = a * b
                terms[e] = terms[e] + v if e in terms else v
        return self._like(terms, min(self.floor, other.floor))

    __rmul__ = __mul__

    def constant_term(self) -> PadicNum:
        return self.terms.get((0,) * self.n, PadicNum.zero(self.p, self.N))

    def inverse(self) -> Series:
        """Geometric-series inverse; needs a unit constant term."""
        c0 = self.constant_term()
        if not c0.is_unit():
            raise DenominatorNotUnit(f"constant term {c0} is not a p-adic unit")
        inv0 = PadicNum.from_rational(1, self.p, self.N) / c0
        u = self * inv0 - Series.constant(1, self.n, self.T, self.p, self.N)
        acc = Series.constant(1, self.n, self.T, self.p, self.N)
        term = Series.constant(1, self.n, self.T, self.p, self.N)
        for _ in range(self.T):
            term = term * (-u)
            if not term.terms:
                break
            acc = acc + term
        return acc * inv0

    def max_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-a for a in kv[0]))):
            mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            parts.append(f"({c})" + ("*" + mono if mono else ""))
        return " + ".join(parts)


def _padic(c, p: int, N: int) -> PadicNum:
    if isinstance(c, PadicNum):
        return c
    return PadicNum.from_rational(Fraction(c), p, N)


def gauss_norm(f) -> Fraction:
    """``sup_I |a_I|`` as an exact rational (a power of p, or 0).

    Accepts a ``Series``, a ``HomogPoly`` over a p-adic domain, or a list of
    those (the maximum is returned).
    """
    if isinstance(f, (list, tuple)):
        return max((gauss_norm(g) for g in f), default=Fraction(0))
    if isinstance(f, HomogPoly):
        if not isinstance(f.domain, Padic):
            raise TypeError("Gauss norm needs p-adic coefficients")
        return max((c.norm() for c in f.terms.values()), default=Fraction(0))
    known = max((c.norm() for c in f.terms.values()), default=Fraction(0))
    if f.floor != INF and f.floor < f.N:
        bound = Fraction(f.p) ** (-f.floor)
        if bound >= known:
            raise PrecisionExhausted(f"dropped terms known only modulo {f.p}^{f.floor}")
    return known


# ---------------------------------------------------------------------------
# chart maps
# ---------------------------------------------------------------------------


@dataclass
class TateChartMap:
    components: list
    p: int
    N: int
    T: int
    source: BirationalMap
    alpha: BirationalMap
    base: tuple
    denominator_at_base: PadicNum

    @property
    def n(self) -> int:
        return len(self.components)

    def identity_components(self) -> list:
        return [Series.var(i, self.n, self.T, self.p, self.N) for i in range(self.n)]

    def distance_to_identity(self) -> Fraction:
        return gauss_norm([c - x for c, x in zip(self.components, self.identity_components())])

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "T": self.T,
            "components": [str(c) for c in self.components],
            "denominator_at_base": str(self.denominator_at_base),
        }


def _as_map(alpha, n: int) -> BirationalMap:
    if alpha is None:
        return identity(n)
    if isinstance(alpha, BirationalMap):
        if alpha.certified_inverse is None:
            raise ValueError("conjugating map needs a certified inverse")
        return alpha
    return linear_with_inverse(alpha)


def chart_normalize(f: BirationalMap, alpha=None, p: int = 3, N: int = 12, T: int = 16, base=None) -> TateChartMap:
    """Expand ``alpha^-1 o f o alpha`` in the chart ``x0 = 1`` as series over R."""
    if not isinstance(f.domain, ExactRational):
        raise TypeError("chart normalization starts from a map over QQ")
    n = f.n
    a = _as_map(alpha, n)
    conj = compose(compose(a.certified_inverse, f), a)
    base = tuple(Fraction(1) for _ in range(n)) if base is None else tuple(Fraction(b) for b in base)
    comps = conj.components
    den_at_base = _padic(comps[0](Fraction(1), *base), p, N)
    if not den_at_base.is_unit():
        raise DenominatorNotUnit(f"denominator at the base point is {den_at_base}, not a unit")
    den = Series.from_poly(comps[0], 0, T, p, N)
    inv = den.inverse()
    out = []
    for c in comps[1:]:
        s = Series.from_poly(c, 0, T, p, N) * inv
        for e, v in s.terms.items():
            if v.v < 0:
                raise CoefficientEscapesR(f"coefficient {v} of x^{e} has negative valuation")
        out.append(s)
    return TateChartMap(out, p, N, T, conj, a, base, den_at_base)


# ---------------------------------------------------------------------------
# gate
# ---------------------------------------------------------------------------


@dataclass
class ForcedIdentity:
    norm: Fraction
    order: int

    def to_dict(self) -> dict:
        return {"kind": "ForcedIdentity", "norm": str(self.norm), "order": self.order}


@dataclass
class BoundViolated:
    norm: Fraction

    def to_dict(self) -> dict:
        return {"kind": "BoundViolated", "norm": str(self.norm)}


@dataclass
class NotApplicable:
    reason: str
    norm: Fraction

    def to_dict(self) -> dict:
        return {"kind": "NotApplicable", "reason": self.reason, "norm": str(self.norm)}


def identity_gate_padic(f: TateChartMap, D: int, exact_oracle: BirationalMap | None = None):
    """Trichotomy: far from id, near id with verified finite order, or near
    id without a verified order."""
    g = f.distance_to_identity()
    bound = Fraction(1, f.p**2)
    if g > bound:
        return BoundViolated(g)
    oracle = f.source if exact_oracle is None else exact_oracle
    k = order(oracle, D)
    if k is None:
        return NotApplicable("OrderUnverified", g)
    if not is_identity(oracle):
        raise AssertionError("finite-order map within p^-2 of the identity is not the identity")
    return ForcedIdentity(g, k)


# ---------------------------------------------------------------------------
# small subgroups
# ---------------------------------------------------------------------------


def unipotent(q) -> BirationalMap:
    """``[x0 + q*x1 : x1 : x2]`` with its inverse ``q -> -q``."""
    q = Fraction(q)
    f = linear_map([[1, q, 0], [0, 1, 0], [0, 0, 1]])
    g = linear_map([[1, -q, 0], [0, 1, 0], [0, 0, 1]])
    return with_inverse(f, g)


SWAP01 = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]


def unipotent_entry(f: BirationalMap):
    """``q`` if ``f`` is projectively ``[x0 + q*x1 : x1 : x2]``, else None."""
    if f.degree != 1:
        return None
    x = [HomogPoly.var(i, 3) for i in range(3)]
    c0, c1, c2 = f.components
    s = c1.coefficient((0, 1, 0))
    if s == 0:
        return None
    c0, c1, c2 = c0.scale(1 / s), c1.scale(1 / s), c2.scale(1 / s)
    q = c0.coefficient((0, 1, 0))
    if c0 == x[0] + x[1].scale(q) and c1 == x[1] and c2 == x[2]:
        return q
    return None


@dataclass
class SubgroupSample:
    p: int
    m: int
    elements: list
    entries: list
    distances: list
    closure_ok: bool
    products_checked: int
    verdicts: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "entries": [str(q) for q in self.entries],
            "distances": [str(d) for d in self.distances],
            "ball": str(Fraction(1, self.p**self.m)),
            "closure_ok": self.closure_ok,
            "products_checked": self.products_checked,
            "verdicts": [type(v).__name__ for v in self.verdicts],
        }


def small_subgroup_sample(p: int, m: int, count: int, N: int = 12, seed: int = 0, D: int = 6) -> SubgroupSample:
    """Random unipotent elements ``q`` with ``v_p(q) >= m`` and their checks."""
    rng = np.random.default_rng(seed)
    elems, qs, dists, verdicts = [], [], [], []
    for _ in range(count):
        while True:
            u = int(rng.integers(1, p ** (N - m)))
            if u:
                break
        q = Fraction(p**m * u)
        f = unipotent(q)
        tate = chart_normalize(f, SWAP01, p, N, T=2)
        elems.append(f)
        qs.append(q)
        dists.append(tate.distance_to_identity())
        verdicts.append(identity_gate_padic(tate, D, f))
    ok, checked = True, 0
    for f in elems:
        for g in elems:
            h = compose(f, g)
            q = unipotent_entry(h)
            checked += 1
            if q is None or (q != 0 and valuation_rational(q, p) < m):
                ok = False
    return SubgroupSample(p, m, elems, qs, dists, ok, checked, verdicts)


# ---------------------------------------------------------------------------
# finite-order sweep
# ---------------------------------------------------------------------------

_BASES = {
    "neg-x1": [[1, 0, 0], [0, -1, 0], [0, 0, 1]],
    "swap": [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
    "neg-both": [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
    "order3": [[1, 0, 0], [0, 0, 1], [0, -1, -1]],
}


def _unimodular_affine(rng):
    # product of elementary integer moves keeps det = +-1
    m = np.eye(3, dtype=np.int64)
    for _ in range(3):
        i, j = rng.choice([1, 2], size=2, replace=False)
        e = np.eye(3, dtype=np.int64)
        e[i, j] = int(rng.integers(-2, 3))
        m = e @ m
    m[1, 0] = int(rng.integers(-2, 3))
    m[2, 0] = int(rng.integers(-2, 3))
    return [[int(x) for x in r] for r in m]


def _polynomial_automorphism(rng) -> BirationalMap:
    x0, x1, x2 = (HomogPoly.var(i, 3) for i in range(3))
    c = int(rng.integers(1, 3)) * (1 if rng.random() < 0.5 else -1)
    e = BirationalMap(MapTuple([x0 * x0, x0 * x1, x0 * x2 + (x1 * x1).scale(c)]), reduced=True)
    ei = BirationalMap(MapTuple([x0 * x0, x0 * x1, x0 * x2 - (x1 * x1).scale(c)]), reduced=True)
    e = with_inverse(e, ei)
    L = linear_with_inverse(_unimodular_affine(rng))
    R = linear_with_inverse(_unimodular_affine(rng))
    g = compose(L, compose(e, R))
    return g


@dataclass
class SweepReport:
    p: int
    count: int
    kinds: list
    orders: list
    norms: list
    violations: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "count": self.count,
            "violations": self.violations,
            "min_norm": str(min(self.norms)) if self.norms else None,
            "kinds": self.kinds,
            "orders": self.orders,
        }


def finite_order_conjugate(rng):
    """A seeded finite-order map ``g a g^-1`` over QQ with integer coefficients."""
    kind = list(_BASES)[int(rng.integers(0, len(_BASES)))]
    a = linear_map(_BASES[kind])
    g = _polynomial_automorphism(rng)
    conj = compose(g, compose(a, g.certified_inverse))
    return kind, conj


def finite_order_sweep(count: int = 100, p: int = 3, N: int = 12, T: int = 16, seed: int = 0, D: int = 6) -> SweepReport:
    """Chart distances to the identity of ``count`` nontrivial finite-order maps."""
    kinds, orders, norms = [], [], []
    violations = 0
    bound = Fraction(1, p**2)
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        kind, f = finite_order_conjugate(rng)
        ordk = order(f, D)
        tate = chart_normalize(f, None, p, N, T)
        g = tate.distance_to_identity()
        kinds.append(kind)
        orders.append(ordk)
        norms.append(g)
        if g <= bound:
            violations += 1
    return SweepReport(p, count, kinds, orders, norms, violations)


def random_padic_poly(rng, p: int, N: int, nvars: int = 3, degree: int = 2, nterms: int = 4) -> HomogPoly:
    """Random polynomial over R with assorted valuations."""
    monos = monomials(nvars, degree)
    idx = rng.choice(len(monos), size=min(nterms, len(monos)), replace=False)
    terms = {}
    for i in idx:
        v = int(rng.integers(0, 3))
        u = int(rng.integers(1, p ** 4))
        while u % p == 0:
            u = int(rng.integers(1, p ** 4))
        den = int(rng.integers(1, 20))
        while den % p == 0:
            den = int(rng.integers(1, 20))
        terms[monos[int(i)]] = Fraction(p**v * u, den)
    return HomogPoly(nvars, degree, terms, Padic(p, N))


__all__ = [
    "Series",
    "gauss_norm",
    "TateChartMap",
    "chart_normalize",
    "identity_gate_padic",
    "ForcedIdentity",
    "BoundViolated",
    "NotApplicable",
    "unipotent",
    "unipotent_entry",
    "small_subgroup_sample",
    "SubgroupSample",
    "finite_order_sweep",
    "SweepReport",
    "finite_order_conjugate",
    "random_padic_poly",
]
