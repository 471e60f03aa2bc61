"""Space-filling curves into SU(3)/SO(3) and the oscillating families built on them.

The curve ``sigma: [-1, 1] -> SU(3)`` is a k-dimensional Hilbert curve
composed with generalized Euler angles.  Conjugating the quadratic shear
``f_t`` by ``sigma_hat(t) = sigma(sin 1)^-1 sigma(sin(1/t))`` gives a family
whose indeterminacy point wanders densely as ``t -> 0``.  The second family
``[x0 P : x1 P : x2 P + t x0 x1]`` with ``P = cos(2 pi / t) x0 + x1`` has lifts
to W_2 with several limit points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from cremona import kernels
from cremona.birmap import BirationalMap, MapTuple, identity, with_inverse
from cremona.errors import ParamOutOfRange
from cremona.families import nonlift_member, quadratic_shear
from cremona.poly import CC, QQ, RR, HomogPoly, substitute
from cremona.wspace import WdPoint, near_cofactor, sequence_limit, wd_distance

UNITARY_TOL = 1e-12

# ---------------------------------------------------------------------------
# Hilbert curve
# ---------------------------------------------------------------------------


def continuity_constant(depth: int) -> float:
    """``C`` in ``|h(t) - h(s)|_inf <= C |t - s|^(1/k)`` for the interpolated curve."""
    return 8.0 * 2**depth / (2**depth - 1)


def _check_curve_args(k: int, depth: int):
    if not 2 <= k <= 8:
        raise ParamOutOfRange(f"dimension {k} outside 2..8")
    if not 1 <= depth <= 10:
        raise ParamOutOfRange(f"depth {depth} outside 1..10")


def hilbert_points(ts, k: int, depth: int) -> np.ndarray:
    """Curve points for an array of parameters in [0, 1]."""
    _check_curve_args(k, depth)
    ts = np.ascontiguousarray(np.atleast_1d(np.asarray(ts, dtype=np.float64)))
    if np.any(ts < 0) or np.any(ts > 1) or not np.all(np.isfinite(ts)):
        raise ParamOutOfRange("curve parameter outside [0, 1]")
    return kernels.hilbert_points(ts, k, depth)


def hilbert_point(t: float, k: int, depth: int) -> tuple:
    return tuple(float(x) for x in hilbert_points([t], k, depth)[0])


@dataclass(frozen=True)
class SpaceFillingCurve:
    k: int
    depth: int

    def __post_init__(self):
        _check_curve_args(self.k, self.depth)

    @property
    def C(self) -> float:
        return continuity_constant(self.depth)

    def __call__(self, ts) -> np.ndarray:
        return hilbert_points(ts, self.k, self.depth)

    def lattice(self) -> np.ndarray:
        """Every lattice point of the curve, in curve order."""
        M = 2 ** (self.k * self.depth)
        return self(np.arange(M) / M)

    def cells_hit(self, ts) -> int:
        side = 2**self.depth
        pts = self(ts)
        cells = np.minimum((pts * side).astype(np.int64), side - 1)
        return len({tuple(c) for c in cells})

    def continuity_ratio(self, t, s) -> np.ndarray:
        """``|h(t) - h(s)|_inf / |t - s|^(1/k)`` for paired samples."""
        t, s = np.asarray(t, float), np.asarray(s, float)
        num = np.max(np.abs(self(t) - self(s)), axis=1)
        return num / np.abs(t - s) ** (1.0 / self.k)


# ---------------------------------------------------------------------------
# Euler-angle parametrizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitaryPoint:
    U: np.ndarray
    source: tuple

    def __post_init__(self):
        U = self.U
        if np.abs(U.conj().T @ U - np.eye(U.shape[0])).max() > UNITARY_TOL:
            raise ValueError("matrix is not unitary")
        if abs(np.linalg.det(U) - 1) > UNITARY_TOL:
            raise ValueError("determinant is not one")


def _phase3(a):
    # exp(i a lambda_3)
    z = np.zeros(a.shape + (3, 3), dtype=complex)
    z[..., 0, 0] = np.exp(1j * a)
    z[..., 1, 1] = np.exp(-1j * a)
    z[..., 2, 2] = 1
    return z


def _rot(a, i, j):
    # exp(i a lambda) for lambda_2 (i, j = 0, 1) or lambda_5 (0, 2)
    z = np.zeros(a.shape + (3, 3), dtype=complex)
    k = 3 - i - j
    z[..., k, k] = 1
    z[..., i, i] = np.cos(a)
    z[..., j, j] = np.cos(a)
    z[..., i, j] = np.sin(a)
    z[..., j, i] = -np.sin(a)
    return z


def _phase8(a):
    z = np.zeros(a.shape + (3, 3), dtype=complex)
    w = a / math.sqrt(3)
    z[..., 0, 0] = np.exp(1j * w)
    z[..., 1, 1] = np.exp(1j * w)
    z[..., 2, 2] = np.exp(-2j * w)
    return z


SU3_RANGES = np.array([2 * math.pi, math.pi / 2, 2 * math.pi, math.pi / 2,
                       2 * math.pi, math.pi / 2, 2 * math.pi, 2 * math.sqrt(3) * math.pi])


def su3_matrices(X) -> np.ndarray:
    """Batch of SU(3) matrices from rows of ``X`` in [0, 1]^8."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    a = X * SU3_RANGES
    factors = [_phase3(a[:, 0]), _rot(a[:, 1], 0, 1), _phase3(a[:, 2]), _rot(a[:, 3], 0, 2),
               _phase3(a[:, 4]), _rot(a[:, 5], 0, 1), _phase3(a[:, 6]), _phase8(a[:, 7])]
    U = factors[0]
    for F in factors[1:]:
        U = U @ F
    return U


def su3_from_box(x) -> UnitaryPoint:
    x = np.asarray(x, dtype=float)
    if x.shape != (8,) or np.any(x < 0) or np.any(x > 1):
        raise ParamOutOfRange("need a point of [0, 1]^8")
    return UnitaryPoint(su3_matrices(x)[0], tuple(float(v) for v in x))


def so3_matrices(X) -> np.ndarray:
    """ZYZ Euler angles: ``alpha, gamma`` in [0, 2 pi], ``beta`` in [0, pi]."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    al, be, ga = 2 * math.pi * X[:, 0], math.pi * X[:, 1], 2 * math.pi * X[:, 2]

    def rz(t):
        z = np.zeros(t.shape + (3, 3))
        z[:, 0, 0] = np.cos(t)
        z[:, 0, 1] = -np.sin(t)
        z[:, 1, 0] = np.sin(t)
        z[:, 1, 1] = np.cos(t)
        z[:, 2, 2] = 1
        return z

    def ry(t):
        z = np.zeros(t.shape + (3, 3))
        z[:, 0, 0] = np.cos(t)
        z[:, 0, 2] = np.sin(t)
        z[:, 2, 0] = -np.sin(t)
        z[:, 2, 2] = np.cos(t)
        z[:, 1, 1] = 1
        return z

    return rz(al) @ ry(be) @ rz(ga)


def so3_from_box(x) -> UnitaryPoint:
    x = np.asarray(x, dtype=float)
    if x.shape != (3,) or np.any(x < 0) or np.any(x > 1):
        raise ParamOutOfRange("need a point of [0, 1]^3")
    return UnitaryPoint(so3_matrices(x)[0].astype(complex), tuple(float(v) for v in x))


def projective_unitary_distance(U, V) -> float:
    """Frobenius distance in PSU(3): minimum over the central cube roots of unity."""
    return min(float(np.linalg.norm(U - w * V)) for w in np.exp(2j * np.pi * np.arange(3) / 3))


# ---------------------------------------------------------------------------
# sigma, sigma_hat and the conjugated shear family
# ---------------------------------------------------------------------------


def sigma_matrices(s, depth: int = 6) -> np.ndarray:
    """``sigma(s)`` for ``s`` in [-1, 1], batched."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(np.abs(s) > 1):
        raise ParamOutOfRange("sigma is defined on [-1, 1]")
    return su3_matrices(hilbert_points(np.clip((s + 1) / 2, 0.0, 1.0), 8, depth))


def sigma_hat_matrices(t, depth: int = 6) -> np.ndarray:
    """``sigma(sin 1)^dagger sigma(sin(1/t))``; exactly the identity where ``sin(1/t) = sin 1``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0) or np.any(t > 1):
        raise ParamOutOfRange("sigma_hat is defined on (0, 1]")
    u = np.sin(1.0 / t)
    base = sigma_matrices(math.sin(1.0), depth)[0]
    out = base.conj().T @ sigma_matrices(u, depth)
    out[u == math.sin(1.0)] = np.eye(3)
    return out


def sigma_hat(t: float, depth: int = 6) -> np.ndarray:
    return sigma_hat_matrices([t], depth)[0]


def conjugate_tuple(A: np.ndarray, t: MapTuple) -> MapTuple:
    """Tuple of ``x -> A F(A^-1 x)`` for a unitary ``A``."""
    A = np.asarray(A, dtype=complex)
    if np.array_equal(A, np.eye(A.shape[0])):
        return t.with_domain(CC)
    Ai = A.conj().T
    nv = t.nvars
    lin = [HomogPoly(nv, 1, {tuple(int(i == j) for i in range(nv)): complex(Ai[k, j]) for j in range(nv)}, CC)
           for k in range(nv)]
    inner = [substitute(c.with_domain(CC), lin) for c in t.components]
    out = []
    for i in range(nv):
        acc = HomogPoly.zero(nv, t.degree, CC)
        for j in range(nv):
            acc = acc + inner[j].scale(complex(A[i, j]))
        out.append(acc)
    return MapTuple(out)


def _check_t(t):
    if not 0 <= t <= 1 or not math.isfinite(t):
        raise ParamOutOfRange(f"parameter {t} outside [0, 1]")


def rho_oscillating(t: float, depth: int = 6) -> BirationalMap:
    """``sigma_hat(t) o f_t o sigma_hat(t)^-1``; the identity at ``t = 0``."""
    _check_t(t)
    if t == 0:
        return identity(2, CC)
    A = sigma_hat(t, depth)
    ft = quadratic_shear(t, CC)
    return BirationalMap(conjugate_tuple(A, ft.tuple), reduced=False)


def rho_inverse(t: float, depth: int = 6) -> BirationalMap:
    """Inverse family member: conjugate of the shear with ``-t(1-t)``."""
    _check_t(t)
    if t == 0:
        return identity(2, CC)
    A = sigma_hat(t, depth)
    x0, x1, x2 = (HomogPoly.var(i, 3, CC) for i in range(3))
    c = t * (1 - t)
    g = MapTuple([x0 * x0, x0 * x1, x0 * x2 - (x1 * x1).scale(c)])
    return BirationalMap(conjugate_tuple(A, g), reduced=False)


def homotopy_H(s: float, t: float, depth: int = 6) -> BirationalMap:
    """``rho_hat(t)`` for ``t >= s``, else ``sigma_hat(s) o f_t o sigma_hat(s)^-1``."""
    _check_t(s)
    _check_t(t)
    if t >= s:
        return rho_oscillating(t, depth)
    if t == 0 and s > 0:
        # f_0 is the identity, so is its conjugate
        return BirationalMap(quadratic_shear(0.0, CC).tuple, reduced=False)
    ft = quadratic_shear(t, CC)
    return BirationalMap(conjugate_tuple(sigma_hat(s, depth), ft.tuple), reduced=False)


def indeterminacy_point(t: float, depth: int = 6) -> np.ndarray:
    """``sigma_hat(t) [0:0:1]`` as a unit vector."""
    return sigma_hat(t, depth)[:, 2]


def reference_net(size: int = 10_000, seed: int = 12345) -> np.ndarray:
    """Haar-random unit vectors of C^3 (a fixed net on P^2(C))."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(size, 3)) + 1j * rng.normal(size=(size, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


@dataclass
class Cloud:
    eps: float
    N: int
    depth: int
    points: np.ndarray
    covering_radius: float

    def to_dict(self) -> dict:
        return {"eps": self.eps, "N": self.N, "depth": self.depth, "covering_radius": self.covering_radius}


def indeterminacy_cloud(eps: float, N: int, depth: int = 6, seed: int = 0, net=None) -> Cloud:
    """Indeterminacy points of ``rho(t_i)`` for ``N`` seeded ``t_i`` in (0, eps).

    The sample stream is fixed by ``seed``, so clouds for growing ``N`` are
    nested.  The covering radius is measured against ``reference_net()``.
    """
    if not 0 < eps < 1:
        raise ParamOutOfRange("eps must lie in (0, 1)")
    if N < 1:
        raise ParamOutOfRange("need at least one sample")
    rng = np.random.default_rng(seed)
    ts = eps * (1.0 - rng.random(N))  # in (0, eps]
    ts = np.minimum(ts, eps * (1 - 1e-12))
    pts = sigma_hat_matrices(ts, depth)[:, :, 2]
    net = reference_net() if net is None else net
    radius = float(np.max(kernels.min_chordal(np.ascontiguousarray(net), np.ascontiguousarray(pts))))
    return Cloud(eps, N, depth, pts, radius)


# ---------------------------------------------------------------------------
# the non-lifting family
# ---------------------------------------------------------------------------


def nonlift_family(t, c=None, exact: bool = True) -> BirationalMap:
    """Exact mode: rational ``t, c`` with certified inverse at ``(-t, c)``.
    Float mode: ``c = cos(2 pi / t)``."""
    if exact:
        t, c = Fraction(t), Fraction(c)
        if not -1 <= c <= 1:
            raise ParamOutOfRange("c must lie in [-1, 1]")
        f = nonlift_member(t, c, QQ)
        g = nonlift_member(-t, c, QQ)
        return with_inverse(f, g)
    t = float(t)
    if t == 0 or not math.isfinite(t):
        raise ParamOutOfRange("t must be nonzero")
    return nonlift_member(t, math.cos(2 * math.pi / t), RR)


@dataclass(frozen=True)
class ObstructionFamily:
    kind: str
    t: object
    c: object = None

    def map(self, depth: int = 6) -> BirationalMap:
        if self.kind == "oscillating":
            return rho_oscillating(float(self.t), depth)
        if self.kind == "nonlift":
            return nonlift_family(self.t, self.c, exact=self.c is not None)
        raise ValueError(f"unknown family {self.kind!r}")


def nonlift_params(s: float, ms) -> list:
    """``t_m = 2 pi / (arccos s + 2 pi m)``, so ``cos(2 pi / t_m) = s``."""
    a = math.acos(s)
    return [2 * math.pi / (a + 2 * math.pi * m) for m in ms]


def nonlift_sequence(s: float, m_max: int, window: int = 20):
    """Float members along ``t_m(s)`` for geometrically spread ``m <= m_max``.

    Consecutive indices crowd the parameters together and make the
    extrapolation to ``t = 0`` ill-conditioned.
    """
    ms = sorted({int(round(x)) for x in np.geomspace(max(1, m_max // 20), m_max, window)})
    ts = nonlift_params(s, ms)
    return [nonlift_member(t, math.cos(2 * math.pi / t), RR) for t in ts], ts


def lift_limit_rep(s) -> MapTuple:
    """``(s x0 + x1) * (x0, x1, x2)``."""
    x0, x1, x2 = (HomogPoly.var(i, 3, RR) for i in range(3))
    P = x0.scale(float(s)) + x1
    return MapTuple([x0 * P, x1 * P, x2 * P])


@dataclass
class ObstructionReport:
    symbolic_ok: bool
    c_values: list
    limits: dict
    match_errors: dict
    reduces_to_identity: dict
    pairwise: list
    diameter: float
    verdicts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "symbolic_ok": self.symbolic_ok,
            "c_values": [str(c) for c in self.c_values],
            "limits": {str(k): v for k, v in self.limits.items()},
            "match_errors": {str(k): float(v) for k, v in self.match_errors.items()},
            "reduces_to_identity": {str(k): v for k, v in self.reduces_to_identity.items()},
            "pairwise": [[str(a), str(b), float(d)] for a, b, d in self.pairwise],
            "diameter": float(self.diameter),
            "verdicts": {str(k): v for k, v in self.verdicts.items()},
        }


SYMBOLIC_C = (Fraction(-1), Fraction(0), Fraction(1, 3), Fraction(2, 5), Fraction(1))


def vanishing_on_contracted_line(c, t=Fraction(1, 7)) -> bool:
    """``h0, h1`` restricted to ``(x0, -c x0, x2)`` are the zero polynomial."""
    f = nonlift_member(Fraction(t), Fraction(c), QQ)
    x0, x1, x2 = (HomogPoly.var(i, 3) for i in range(3))
    line = [x0, x0.scale(-Fraction(c)), x2]
    return all(substitute(h, line).is_zero() for h in f.components[:2])


def nonlift_obstruction_demo(s_targets, m_max: int = 200, window: int = 20) -> ObstructionReport:
    """Symbolic vanishing plus the limit set of the canonical lift along ``t_m(s)``.

    The restricted components have degree at most 2 in ``c``; vanishing at
    the five rational values in ``SYMBOLIC_C`` therefore proves vanishing
    for every ``c``.
    """
    s_targets = list(s_targets)
    if not s_targets:
        raise ValueError("need at least one target")
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    symbolic = all(vanishing_on_contracted_line(c) for c in SYMBOLIC_C)
    limits, match, reduced, verdicts, reps = {}, {}, {}, {}, {}
    for s in s_targets:
        seq, ts = nonlift_sequence(s, m_max, window)
        rep = sequence_limit(seq, params=ts)
        verdicts[s] = rep.verdict
        lim = rep.limit if rep.limit is not None else WdPoint.from_tuple(seq[-1])
        reps[s] = lim
        limits[s] = str(lim.tuple)
        match[s] = wd_distance(lim, lift_limit_rep(s))
        split = near_cofactor(lim)
        reduced[s] = split is not None and split[1].degree == 1 and rep.reduced_limit_is_identity
    pairs = [(a, b, wd_distance(reps[a], reps[b])) for a, b in itertools.combinations(s_targets, 2)]
    diam = max((d for _, _, d in pairs), default=0.0)
    return ObstructionReport(symbolic, list(SYMBOLIC_C), limits, match, reduced, pairs, diam, verdicts)


__all__ = [
    "continuity_constant",
    "hilbert_point",
    "hilbert_points",
    "SpaceFillingCurve",
    "UnitaryPoint",
    "su3_from_box",
    "su3_matrices",
    "so3_from_box",
    "so3_matrices",
    "projective_unitary_distance",
    "sigma_matrices",
    "sigma_hat",
    "sigma_hat_matrices",
    "conjugate_tuple",
    "rho_oscillating",
    "rho_inverse",
    "homotopy_H",
    "indeterminacy_point",
    "indeterminacy_cloud",
    "reference_net",
    "Cloud",
    "nonlift_family",
    "nonlift_params",
    "nonlift_sequence",
    "ObstructionFamily",
    "ObstructionReport",
    "nonlift_obstruction_demo",
    "vanishing_on_contracted_line",
    "lift_limit_rep",
]
