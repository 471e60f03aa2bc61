"""Float diagnostics on the parameter space W_d.

Tuples are represented by unit coefficient vectors over the grlex monomial
basis (component-major).  The metric between two tuples is the distance of
the vectors after the optimal unit rescaling.  On top of that sit sequence
limits with near-common-factor extraction, a degree-growth check, and a
grid certificate for locally uniform convergence on a chart ball.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from cremona import kernels
from cremona.birmap import BirationalMap, MapTuple, reduce
from cremona.errors import DegreeMismatch, EmptyGrid, MixedDegrees, TooShort
from cremona.poly import CC, RR, ComplexFloat, ExactRational, HomogPoly, RealFloat, monomials

CONVERGES_TO_ID = "ConvergesToId"
CONVERGES_TO_OTHER = "ConvergesToOther"
DIVERGES = "Diverges"
DEGREE_UNBOUNDED = "DegreeUnbounded"

COFACTOR_RESIDUAL = 1e-6
_RAW = ComplexFloat(eps=0.0)


def _as_tuple(x) -> MapTuple:
    return x.tuple if isinstance(x, BirationalMap) else x


def coeff_vector(t: MapTuple) -> np.ndarray:
    t = _as_tuple(t)
    basis = monomials(t.nvars, t.degree)
    return np.array([complex(c.coefficient(e)) for c in t.components for e in basis], dtype=complex)


def tuple_from_vector(vec, n: int, d: int, domain=CC) -> MapTuple:
    basis = monomials(n + 1, d)
    k = len(basis)
    comps = []
    for i in range(n + 1):
        chunk = vec[i * k:(i + 1) * k]
        terms = {e: (float(c.real) if isinstance(domain, RealFloat) else complex(c)) for e, c in zip(basis, chunk)}
        comps.append(HomogPoly(n + 1, d, terms, domain))
    return MapTuple(comps)


@dataclass(frozen=True)
class WdPoint:
    """A unit-norm representative of a point of W_d."""

    n: int
    d: int
    vec: np.ndarray

    @classmethod
    def from_tuple(cls, t) -> WdPoint:
        t = _as_tuple(t)
        v = coeff_vector(t)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("zero tuple has no representative")
        return cls(t.n, t.degree, v / nrm)

    @property
    def tuple(self) -> MapTuple:
        dom = RR if np.all(self.vec.imag == 0) else CC
        return tuple_from_vector(self.vec, self.n, self.d, dom)

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "tuple": str(self.tuple)}


def _wd(x) -> WdPoint:
    return x if isinstance(x, WdPoint) else WdPoint.from_tuple(x)


def _best_phase(a: np.ndarray, b: np.ndarray) -> complex:
    ip = np.vdot(b, a)
    if abs(ip) == 0:
        return 1.0
    return ip / abs(ip)


def wd_distance(a, b) -> float:
    """``min_|lambda|=1 ||a - lambda b||`` for unit representatives."""
    a, b = _wd(a), _wd(b)
    if a.n != b.n or a.d != b.d:
        raise DegreeMismatch(f"W_{a.d} point vs W_{b.d} point")
    lam = _best_phase(a.vec, b.vec)
    return float(np.linalg.norm(a.vec - lam * b.vec))


def identity_fiber_basis(n: int, d: int) -> np.ndarray:
    """Columns span ``{H*(x0..xn) : deg H = d-1}`` inside the coefficient space."""
    basis = monomials(n + 1, d)
    index = {e: i for i, e in enumerate(basis)}
    k = len(basis)
    cols = []
    for h in monomials(n + 1, d - 1):
        col = np.zeros((n + 1) * k)
        for i in range(n + 1):
            e = list(h)
            e[i] += 1
            col[i * k + index[tuple(e)]] = 1.0
        cols.append(col)
    return np.array(cols).T


def distance_to_identity(a) -> float:
    """Distance from ``a`` to the nearest unit representative of the identity
    in W_d, i.e. to the fiber of tuples ``H*(x0, ..., xn)``."""
    a = _wd(a)
    q, _ = np.linalg.qr(identity_fiber_basis(a.n, a.d))
    proj = np.linalg.norm(q.T @ a.vec)
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * proj)))


def identity_rep(n: int, d: int, domain=RR) -> MapTuple:
    """``x0^(d-1) * (x0, ..., xn)``, the default identity lift in W_d."""
    xs = [HomogPoly.var(i, n + 1, domain) for i in range(n + 1)]
    h = xs[0] ** (d - 1)
    return MapTuple([h * x for x in xs])


# ---------------------------------------------------------------------------
# near-common-factor extraction
# ---------------------------------------------------------------------------


def _poly_matrix(G: HomogPoly, r: int):
    """Matrix of ``R -> G*R`` from degree-r coefficients to degree (d+r)."""
    nv = G.nvars
    src = monomials(nv, r)
    dst = {e: i for i, e in enumerate(monomials(nv, G.degree + r))}
    mat = np.zeros((len(dst), len(src)), dtype=complex)
    for j, m in enumerate(src):
        for e, c in G.terms.items():
            mat[dst[tuple(a + b for a, b in zip(e, m))], j] += complex(c)
    return mat


def near_cofactor(t, threshold: float = COFACTOR_RESIDUAL):
    """Split a float tuple as ``H * R`` with ``deg H`` maximal.

    Returns ``(H, R, residual)`` or None when no factor of positive degree
    fits within ``threshold`` (relative to the unit-normalized tuple).
    """
    w = _wd(t)
    G = tuple_from_vector(w.vec, w.n, w.d, _RAW)
    comps = G.components
    n1 = len(comps)
    for e in range(w.d - 1, 0, -1):
        r = w.d - e
        k_r = len(monomials(n1, r))
        # R in the kernel of R -> (G_i R_j - G_j R_i)_{i<j}
        blocks = []
        for i, j in itertools.combinations(range(n1), 2):
            row = [np.zeros((len(monomials(n1, w.d + r)), k_r), dtype=complex) for _ in range(n1)]
            row[j] = _poly_matrix(comps[i], r)
            row[i] = -_poly_matrix(comps[j], r)
            blocks.append(np.hstack(row))
        A = np.vstack(blocks)
        _, s, vh = np.linalg.svd(A)
        rvec = vh[-1].conj()
        R = tuple_from_vector(rvec, w.n, r, _RAW)
        if all(c.is_zero() for c in R.components):
            continue
        # least-squares H from G_i = H R_i
        M = np.vstack([_poly_matrix(Ri, e) for Ri in R.components])
        basis_d = monomials(n1, w.d)
        rhs = np.array([complex(ci.coefficient(m)) for ci in comps for m in basis_d])
        hvec, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        resid = float(np.linalg.norm(M @ hvec - rhs))
        if resid < threshold:
            basis = monomials(n1, e)
            H = HomogPoly(n1, e, dict(zip(basis, hvec)), CC)
            Hn = np.linalg.norm(hvec)
            return H.scale(1 / Hn), tuple_from_vector(rvec * Hn, w.n, r, CC), resid
    return None


def is_identity_float(t, tol: float = COFACTOR_RESIDUAL) -> bool:
    w = _wd(t)
    if w.d != 1:
        return False
    return distance_to_identity(w) < tol


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class ConvergenceReport:
    d: int
    limit: WdPoint | None
    cofactor: HomogPoly | None
    reduced_limit_is_identity: bool
    distance_trace: list = field(default_factory=list)
    verdict: str = DIVERGES
    degree_trace: list | None = None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "limit": None if self.limit is None else str(self.limit.tuple),
            "cofactor": None if self.cofactor is None else str(self.cofactor),
            "reduced_limit_is_identity": self.reduced_limit_is_identity,
            "distance_trace": [[i, float(x)] for i, x in self.distance_trace],
            "verdict": self.verdict,
            "degree_trace": self.degree_trace,
        }


@dataclass(frozen=True)
class Bounded:
    d: int


@dataclass(frozen=True)
class Unbounded:
    trace: tuple


def degree_bounded_check(seq, threshold: int | None = None):
    """Reduced-degree growth test over exact rationals.

    Unbounded when the degrees exceed ``threshold`` or, without a threshold,
    when they strictly increase along the whole sequence.
    """
    degs = []
    for f in seq:
        t = _as_tuple(f)
        if isinstance(t.domain, ExactRational):
            if isinstance(f, BirationalMap) and f.reduced:
                degs.append(f.degree)
            else:
                degs.append(reduce(t)[0].degree)
        else:
            degs.append(t.degree)
    trace = tuple(degs)
    if threshold is not None:
        return Unbounded(trace) if max(degs) > threshold else Bounded(max(degs))
    if len(degs) >= 2 and all(a < b for a, b in zip(degs, degs[1:])):
        return Unbounded(trace)
    return Bounded(max(degs))


def _neville(xs, ys, x0: float = 0.0):
    xs = list(xs)
    p = [np.array(y, dtype=complex) for y in ys]
    k = len(xs)
    for level in range(1, k):
        for i in range(k - level):
            j = i + level
            p[i] = ((x0 - xs[j]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[j])
    return p[0]


def sequence_limit(seq, params=None, tol: float = 0.05, extrapolate: int = 5) -> ConvergenceReport:
    """Limit diagnosis for a sequence of tuples of one degree.

    With ``params`` (a parameter value per element, tending to 0) the limit
    is extrapolated to parameter 0 from the last ``extrapolate`` elements;
    otherwise the last element stands for the limit.  The sequence is
    declared convergent when the second half of the distance trace is
    nonincreasing and spans less than ``tol``.
    """
    seq = [_as_tuple(s) for s in seq]
    if len(seq) < 3:
        raise TooShort("need at least three elements")
    ds = {(s.n, s.degree) for s in seq}
    if len(ds) != 1:
        raise MixedDegrees(f"sequence mixes (n, d) values {sorted(ds)}")
    n, d = ds.pop()
    vecs = []
    for s in seq:
        v = WdPoint.from_tuple(s).vec
        if vecs:
            v = v * _best_phase(vecs[-1], v)
        vecs.append(v)
    if params is not None:
        if len(params) != len(seq):
            raise ValueError("one parameter per element")
        k = min(extrapolate, len(seq))
        lim = _neville(params[-k:], vecs[-k:])
        lim = lim / np.linalg.norm(lim)
    else:
        lim = vecs[-1]
    limit = WdPoint(n, d, lim)
    trace = [(i, wd_distance(WdPoint(n, d, v), limit)) for i, v in enumerate(vecs)]
    tail = [x for _, x in trace[len(trace) // 2:]]
    settled = all(b <= a + 1e-12 for a, b in zip(tail, tail[1:])) and (max(tail) - min(tail)) < tol
    if not settled:
        return ConvergenceReport(d, None, None, False, trace, DIVERGES)
    split = near_cofactor(limit)
    if split is None:
        cof, reduced_id = None, is_identity_float(limit)
    else:
        cof, R, _ = split
        reduced_id = is_identity_float(R)
    verdict = CONVERGES_TO_ID if reduced_id else CONVERGES_TO_OTHER
    return ConvergenceReport(d, limit, cof, reduced_id, trace, verdict)


def analyze_sequence(seq, params=None, threshold=None, tol: float = 0.05) -> ConvergenceReport:
    """Degree check first, then ``sequence_limit`` when degrees agree."""
    check = degree_bounded_check(seq, threshold)
    if isinstance(check, Unbounded):
        return ConvergenceReport(max(check.trace), None, None, False, [], DEGREE_UNBOUNDED, list(check.trace))
    return sequence_limit(seq, params=params, tol=tol)


# ---------------------------------------------------------------------------
# uniform convergence certificates
# ---------------------------------------------------------------------------


@dataclass
class RegionCertificate:
    chart: int
    center: tuple
    radius: float
    sample_grid: np.ndarray
    per_m: list
    denominator_floor: float

    def to_dict(self) -> dict:
        return {
            "kind": "Certificate",
            "chart": self.chart,
            "center": [float(c) for c in self.center],
            "radius": float(self.radius),
            "grid_size": int(len(self.sample_grid)),
            "per_m": [[m, float(e)] for m, e in self.per_m],
            "denominator_floor": float(self.denominator_floor),
        }


@dataclass
class Refuted:
    witness: tuple
    floor: float
    reason: str
    per_m: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": "Refuted",
            "witness": [float(c) for c in self.witness],
            "floor": float(self.floor),
            "reason": self.reason,
            "per_m": [[m, float(e)] for m, e in self.per_m],
        }


def chart_grid(center, radius: float, density: int = 21) -> np.ndarray:
    """Uniform lattice points of the closed ball around ``center``."""
    center = np.asarray(center, dtype=float)
    if density < 1 or radius < 0:
        return np.zeros((0, len(center)))
    axis = np.linspace(-radius, radius, density)
    pts = np.array(list(itertools.product(axis, repeat=len(center)))) if len(center) else np.zeros((0, 0))
    keep = np.linalg.norm(pts, axis=1) <= radius * (1 + 1e-12)
    return center + pts[keep]


def embed_chart(pts: np.ndarray, chart: int) -> np.ndarray:
    """Insert a coordinate 1 at position ``chart``."""
    ones = np.ones((pts.shape[0], 1))
    return np.hstack([pts[:, :chart], ones, pts[:, chart:]])


def eval_batch(t, pts: np.ndarray) -> np.ndarray:
    """Evaluate every component of a tuple at homogeneous points (rows)."""
    t = _as_tuple(t)
    pts = np.ascontiguousarray(pts, dtype=np.complex128)
    cols = []
    for c in t.components:
        exps, coeffs = c.to_arrays()
        cols.append(kernels.poly_eval_batch(exps, coeffs, pts))
    return np.stack(cols, axis=1)


def chordal_rows(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Row-wise chordal distance via the wedge product ``|u ^ v| / |u||v|``."""
    k = u.shape[1]
    w2 = np.zeros(u.shape[0])
    for i in range(k):
        for j in range(i + 1, k):
            w2 += np.abs(u[:, i] * v[:, j] - u[:, j] * v[:, i]) ** 2
    return np.sqrt(w2) / (np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))


def _scaled_norm(t, vals, pts) -> np.ndarray:
    cn = np.linalg.norm(coeff_vector(t))
    return np.linalg.norm(vals, axis=1) / (cn * np.linalg.norm(pts, axis=1) ** _as_tuple(t).degree)


def uniform_certificate(family, target, chart: int, center, radius: float, m_list,
                        grid_density: int = 21, tol: float = 0.05, floor_eps: float = 1e-12):
    """Sampled sup-norm convergence test of ``family(m) -> target`` on a ball.

    ``family`` maps an index ``m`` to a tuple or map.  Returns a
    ``RegionCertificate`` or a ``Refuted`` carrying a witness grid point.
    """
    grid = chart_grid(center, radius, grid_density)
    if len(grid) == 0:
        raise EmptyGrid("no lattice point inside the ball")
    hom = embed_chart(grid, chart)
    tv = eval_batch(target, hom)
    floor = float(np.min(_scaled_norm(target, tv, hom)))
    if floor <= floor_eps:
        i = int(np.argmin(_scaled_norm(target, tv, hom)))
        return Refuted(tuple(grid[i]), floor, "target indeterminate on grid")
    per_m, errs = [], []
    for m in m_list:
        fm = family(m)
        fv = eval_batch(fm, hom)
        sn = _scaled_norm(fm, fv, hom)
        if float(np.min(sn)) <= floor_eps:
            i = int(np.argmin(sn))
            return Refuted(tuple(grid[i]), float(sn[i]), f"member m={m} indeterminate on grid", per_m)
        floor = min(floor, float(np.min(sn)))
        e = chordal_rows(fv, tv)
        errs.append(e)
        per_m.append((m, float(np.max(e))))  # max is order independent
    sups = [s for _, s in per_m]
    tail = sups[len(sups) // 2:]
    decreasing = all(b <= a + 1e-15 for a, b in zip(tail, tail[1:]))
    if decreasing and sups[-1] < tol:
        return RegionCertificate(chart, tuple(float(c) for c in center), float(radius), grid, per_m, floor)
    w = int(np.argmax(errs[-1]))
    stays = float(min(e[w] for e in errs))
    return Refuted(tuple(grid[w]), stays, "error does not decay", per_m)


__all__ = [
    "WdPoint",
    "wd_distance",
    "distance_to_identity",
    "identity_rep",
    "near_cofactor",
    "ConvergenceReport",
    "sequence_limit",
    "analyze_sequence",
    "degree_bounded_check",
    "Bounded",
    "Unbounded",
    "RegionCertificate",
    "Refuted",
    "uniform_certificate",
    "chart_grid",
    "embed_chart",
    "eval_batch",
    "chordal_rows",
]
