"""Identity gate for finite-order maps over the complex numbers.

A map is studied in an affine chart on a ball.  For a map of order ``D`` the
set of points whose first ``D`` iterates stay within radius ``r`` is an
invariant body; a fixed point inside it whose differential is the identity
forces the map to be the identity.  Everything here is sampled on grids and
reported with its residuals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from cremona import kernels
from cremona.birmap import BirationalMap, MapTuple, compose, linear_map, matrix_inverse, with_inverse
from cremona.errors import IterateEscapesDomain, StepSizeUnderflow
from cremona.families import pointwise_member
from cremona.poly import CC, HomogPoly, monomials, partial_derivative

ORDER_TOL = 1e-8
IDENTITY_TOL = 1e-8
FIXED_TOL = 1e-10
MIN_STEP = 1e-7


class _Compiled:
    """Exponent/coefficient arrays of one polynomial for batch evaluation."""

    __slots__ = ("exps", "coeffs")

    def __init__(self, f: HomogPoly):
        if f.is_zero():
            self.exps = np.zeros((0, f.nvars), dtype=np.int64)
            self.coeffs = np.zeros(0, dtype=np.complex128)
        else:
            self.exps, self.coeffs = f.to_arrays()

    def __call__(self, pts):
        return kernels.poly_eval_batch(self.exps, self.coeffs, pts)


class ChartMap:
    """Dehomogenization of a map tuple in the chart ``x_chart = 1``.

    ``center`` and ``radius`` describe the ball on which the map is studied.
    """

    def __init__(self, f, chart: int = 0, center=None, radius: float = 1.0):
        t = f.tuple if isinstance(f, BirationalMap) else f
        if not isinstance(t, MapTuple):
            t = MapTuple(t)
        self.source = t
        self.chart = chart
        self.n = t.n
        self.others = [i for i in range(t.n + 1) if i != chart]
        self.center = np.zeros(self.n, dtype=complex) if center is None else np.asarray(center, dtype=complex)
        self.radius = float(radius)
        comps = t.components
        self._num = [_Compiled(comps[i]) for i in self.others]
        self._den = _Compiled(comps[chart])
        self._dnum = [[_Compiled(partial_derivative(comps[i], k)) for k in self.others] for i in self.others]
        self._dden = [_Compiled(partial_derivative(comps[chart], k)) for k in self.others]

    def _hom(self, Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        H = np.ones((Z.shape[0], self.n + 1), dtype=complex)
        H[:, self.others] = Z
        return np.ascontiguousarray(H)

    def denominator(self, Z):
        return self._den(self._hom(Z))

    def __call__(self, Z):
        H = self._hom(Z)
        den = self._den(H)
        if np.any(np.abs(den) < 1e-12) or not np.all(np.isfinite(den)):
            raise IterateEscapesDomain("denominator vanishes at an evaluation point")
        out = np.stack([num(H) for num in self._num], axis=1) / den[:, None]
        return out

    def jacobian(self, z) -> np.ndarray:
        """Complex Jacobian at one point via the quotient rule on exact partials."""
        H = self._hom(z)
        den = self._den(H)[0]
        nums = [num(H)[0] for num in self._num]
        dden = [d(H)[0] for d in self._dden]
        J = np.empty((self.n, self.n), dtype=complex)
        for i in range(self.n):
            for j in range(self.n):
                J[i, j] = (self._dnum[i][j](H)[0] * den - nums[i] * dden[j]) / den**2
        return J

    def iterate(self, Z, k: int):
        """``[f(Z), f^2(Z), ..., f^k(Z)]``."""
        out = []
        cur = np.atleast_2d(np.asarray(Z, dtype=complex))
        for _ in range(k):
            cur = self(cur)
            if not np.all(np.isfinite(cur)):
                raise IterateEscapesDomain("iterate is not finite")
            out.append(cur)
        return out


def complex_ball_grid(center, radius: float, density: int = 11) -> np.ndarray:
    """Lattice points of the closed ball in C^n, treated as R^(2n)."""
    center = np.asarray(center, dtype=complex)
    n = center.shape[0]
    axis = np.linspace(-radius, radius, density)
    pts = np.array(list(itertools.product(axis, repeat=2 * n)))
    pts = pts[np.linalg.norm(pts, axis=1) <= radius * (1 + 1e-12)]
    return center + pts[:, :n] + 1j * pts[:, n:]


# ---------------------------------------------------------------------------
# invariant body
# ---------------------------------------------------------------------------


@dataclass
class InvariantBody:
    r: float
    D: int
    members: np.ndarray
    invariance_residual: float
    order_deviation: float

    def to_dict(self) -> dict:
        return {
            "kind": "Body",
            "r": self.r,
            "D": self.D,
            "members": int(len(self.members)),
            "invariance_residual": float(self.invariance_residual),
            "order_deviation": float(self.order_deviation),
        }


@dataclass
class Refused:
    reason: str
    value: float

    def to_dict(self) -> dict:
        return {"kind": "Refused", "reason": self.reason, "value": float(self.value)}


def _order_deviation(f: ChartMap, grid, iterates) -> float:
    last = iterates[-1]
    return float(np.max(np.linalg.norm(last - grid, axis=1) / (1 + np.linalg.norm(grid, axis=1))))


def build_body(f: ChartMap, D: int, r: float = 0.5, r_prime: float | None = None, density: int = 11):
    """Sampled body ``{z : |f^i(z) - c| <= r, i = 1..D}`` on the ``r_prime`` ball."""
    r_prime = f.radius if r_prime is None else r_prime
    if not r < r_prime:
        raise ValueError("need r < r_prime")
    grid = complex_ball_grid(f.center, r_prime, density)
    its = f.iterate(grid, D + 1)
    dev = _order_deviation(f, grid, its[:D])
    if dev > ORDER_TOL:
        return Refused("NotOrderD", dev)
    dist = np.stack([np.linalg.norm(x - f.center, axis=1) for x in its[:D]], axis=1)
    h = dist.max(axis=1)
    inside = h <= r
    # h at f(z) uses iterates 2..D+1
    h_next = np.stack([np.linalg.norm(x - f.center, axis=1) for x in its[1:D + 1]], axis=1).max(axis=1)
    resid = float(np.max(np.maximum(h_next[inside] - r, 0.0))) if inside.any() else 0.0
    if resid > ORDER_TOL * (1 + r):
        return Refused("NoInvariance", resid)
    return InvariantBody(r, D, grid[inside], resid, dev)


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------


@dataclass
class Fixed:
    point: np.ndarray
    residual: float

    def to_dict(self) -> dict:
        return {"kind": "Fixed", "point": [[float(c.real), float(c.imag)] for c in self.point],
                "residual": float(self.residual)}


@dataclass
class NotFound:
    best_residual: float

    def to_dict(self) -> dict:
        return {"kind": "NotFound", "best_residual": float(self.best_residual)}


def _newton(f: ChartMap, z, steps: int):
    z = np.array(z, dtype=complex)
    g = f(z)[0] - z
    res = np.linalg.norm(g)
    I = np.eye(f.n)
    for _ in range(steps):
        if res < FIXED_TOL:
            break
        J = f.jacobian(z) - I
        dz, *_ = np.linalg.lstsq(J, -g, rcond=None)
        lam = 1.0
        for _ in range(30):
            trial = z + lam * dz
            try:
                g_t = f(trial)[0] - trial
            except IterateEscapesDomain:
                g_t = None
            if g_t is not None and np.linalg.norm(g_t) < res:
                z, g, res = trial, g_t, np.linalg.norm(g_t)
                break
            lam *= 0.5
        else:
            break
    return z, float(res)


def find_fixed_point(f: ChartMap, body: InvariantBody | None = None, seeds: int = 10,
                     steps: int = 50, density: int = 11):
    """Damped Newton on ``f(z) - z`` from the best-scoring grid seeds."""
    if body is not None and len(body.members):
        cand = body.members
        bound = body.r
    else:
        cand = complex_ball_grid(f.center, f.radius, density)
        bound = f.radius
    score = np.linalg.norm(f(cand) - cand, axis=1)
    order = np.argsort(score, kind="stable")[:seeds]
    best = np.inf
    for i in order:
        z, res = _newton(f, cand[i], steps)
        best = min(best, res)
        inside = np.linalg.norm(z - f.center) <= bound * (1 + 1e-9) + 1e-12
        if body is not None:
            its = f.iterate(z, body.D)
            inside = max(np.linalg.norm(x[0] - f.center) for x in its) <= bound * (1 + 1e-6) + 1e-9
        if res < FIXED_TOL and inside:
            return Fixed(z, res)
    return NotFound(best)


# ---------------------------------------------------------------------------
# Cartan gate
# ---------------------------------------------------------------------------


@dataclass
class ForcedIdentity:
    point: np.ndarray
    differential_defect: float
    order_deviation: float
    invariance_residual: float

    def to_dict(self) -> dict:
        return {"kind": "ForcedIdentity", "differential_defect": float(self.differential_defect),
                "order_deviation": float(self.order_deviation),
                "invariance_residual": float(self.invariance_residual)}


@dataclass
class NotForced:
    eigenvalues: list
    differential_defect: float
    point: np.ndarray = field(default=None)

    def to_dict(self) -> dict:
        return {"kind": "NotForced", "eigenvalues": [[float(e.real), float(e.imag)] for e in self.eigenvalues],
                "differential_defect": float(self.differential_defect)}


@dataclass
class NotApplicable:
    reason: str
    value: float = float("nan")

    def to_dict(self) -> dict:
        return {"kind": "NotApplicable", "reason": self.reason, "value": float(self.value)}


def cartan_gate(f: ChartMap, D: int, r: float = 0.5, r_prime: float | None = None, density: int = 11):
    body = build_body(f, D, r, r_prime, density)
    if isinstance(body, Refused):
        return NotApplicable(body.reason, body.value)
    fp = find_fixed_point(f, body)
    if isinstance(fp, NotFound):
        return NotApplicable("NoFixedPoint", fp.best_residual)
    J = f.jacobian(fp.point)
    defect = float(np.linalg.norm(J - np.eye(f.n)))
    if defect < IDENTITY_TOL:
        return ForcedIdentity(fp.point, defect, body.order_deviation, body.invariance_residual)
    eig = np.linalg.eigvals(J)
    eig = sorted(eig, key=lambda e: (round(e.real, 9), round(e.imag, 9)))
    return NotForced(list(eig), defect, fp.point)


# ---------------------------------------------------------------------------
# convexity
# ---------------------------------------------------------------------------


@dataclass
class PositiveDefinite:
    min_eigenvalue: float

    def to_dict(self) -> dict:
        return {"kind": "PositiveDefinite", "min_eigenvalue": float(self.min_eigenvalue)}


@dataclass
class Fails:
    witness: np.ndarray
    min_eigenvalue: float

    def to_dict(self) -> dict:
        return {"kind": "Fails", "witness": [[float(c.real), float(c.imag)] for c in self.witness],
                "min_eigenvalue": float(self.min_eigenvalue)}


def hessian_convexity_check(f: ChartMap, i: int, grid=None, step: float = 1e-4, density: int = 7):
    """Central-difference Hessian of ``z -> |f^i(z) - c|^2`` in 2n real variables."""
    if step < MIN_STEP:
        raise StepSizeUnderflow(f"step {step} is below {MIN_STEP}")
    if grid is None:
        grid = complex_ball_grid(f.center, f.radius, density)
    grid = np.atleast_2d(np.asarray(grid, dtype=complex))
    n = f.n
    real = np.hstack([grid.real, grid.imag])

    def h(X):
        Z = X[:, :n] + 1j * X[:, n:]
        W = f.iterate(Z, i)[-1] if i > 0 else Z
        return np.sum(np.abs(W - f.center) ** 2, axis=1)

    m = 2 * n
    Hs = np.zeros((grid.shape[0], m, m))
    E = np.eye(m) * step
    for j in range(m):
        for k in range(j, m):
            val = (h(real + E[j] + E[k]) - h(real + E[j] - E[k])
                   - h(real - E[j] + E[k]) + h(real - E[j] - E[k])) / (4 * step * step)
            Hs[:, j, k] = val
            Hs[:, k, j] = val
    mins = np.linalg.eigvalsh(Hs)[:, 0]
    w = int(np.argmin(mins))
    if mins[w] > 0:
        return PositiveDefinite(float(mins[w]))
    return Fails(grid[w], float(mins[w]))


def finite_difference_jacobian(f: ChartMap, z, step: float = 1e-6) -> np.ndarray:
    """Central differences along real directions (holomorphic maps)."""
    z = np.asarray(z, dtype=complex)
    J = np.empty((f.n, f.n), dtype=complex)
    for j in range(f.n):
        e = np.zeros(f.n, dtype=complex)
        e[j] = step
        J[:, j] = (f(z + e)[0] - f(z - e)[0]) / (2 * step)
    return J


# ---------------------------------------------------------------------------
# test families
# ---------------------------------------------------------------------------


def random_chart_map(rng, n: int = 2, d: int = 2, scale: float = 0.1) -> ChartMap:
    """``x0^(d-1) * id`` plus small random complex terms, chart ``x0 = 1``."""
    nv = n + 1
    basis = monomials(nv, d)
    comps = []
    for i in range(nv):
        e = [d - 1] + [0] * n
        e[i] += 1
        terms = {tuple(e): 1.0}
        for m in basis:
            c = scale * (rng.normal() + 1j * rng.normal()) / np.sqrt(2 * len(basis))
            terms[m] = terms.get(m, 0) + c
        comps.append(HomogPoly(nv, d, terms, CC))
    return ChartMap(MapTuple(comps), 0)


def _near_identity_affine(rng, scale: int = 10):
    m = [[Fraction(1), Fraction(0), Fraction(0)]]
    for i in range(1, 3):
        row = [Fraction(int(rng.integers(-2, 3)), scale)]
        for j in range(1, 3):
            row.append(Fraction(int(i == j)) + Fraction(int(rng.integers(-2, 3)), scale))
        m.append(row)
    return m


def conjugated_involution(rng) -> BirationalMap:
    """``g a g^-1`` with ``a = [x0 : -x1 : x2]`` and ``g = L e L'`` for
    random near-identity affine ``L, L'`` and a quadratic shear ``e``."""
    while True:
        A, B = _near_identity_affine(rng), _near_identity_affine(rng)
        try:
            Ai, Bi = matrix_inverse(A), matrix_inverse(B)
        except ZeroDivisionError:
            continue
        break
    L, Li = linear_map(A), linear_map(Ai)
    Lp, Lpi = linear_map(B), linear_map(Bi)
    eps = Fraction(int(rng.integers(1, 4)), 10)
    # the shear with t(1-t) = eps has inverse with -eps; build both directly
    e = _shear(eps)
    ei = _shear(-eps)
    a = linear_map([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    g = compose(L, compose(e, Lp))
    gi = compose(Lpi, compose(ei, Li))
    conj = compose(g, compose(a, gi))
    return with_inverse(conj, conj)


def _shear(eps) -> BirationalMap:
    x0, x1, x2 = (HomogPoly.var(i, 3) for i in range(3))
    return BirationalMap(MapTuple([x0 * x0, x0 * x1, x0 * x2 + (x1 * x1).scale(eps)]), reduced=False)


def pointwise_chart(m) -> ChartMap:
    """Chart ``x0 = 1`` of ``[x0^2 : x0x1 + x2^2/m : x0x2]``: ``(x1 + x2^2/m, x2)``."""
    return ChartMap(pointwise_member(m), 0)


__all__ = [
    "ChartMap",
    "InvariantBody",
    "Refused",
    "build_body",
    "find_fixed_point",
    "Fixed",
    "NotFound",
    "cartan_gate",
    "ForcedIdentity",
    "NotForced",
    "NotApplicable",
    "hessian_convexity_check",
    "PositiveDefinite",
    "Fails",
    "finite_difference_jacobian",
    "random_chart_map",
    "conjugated_involution",
    "pointwise_chart",
    "complex_ball_grid",
]
