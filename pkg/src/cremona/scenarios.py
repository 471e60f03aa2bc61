"""Named, seeded scenarios that rebuild each worked example and check it.

Every scenario returns a report whose assertions carry the checked
formula, the tolerance used and the observed value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from cremona import families, padic, spacefill
from cremona.birmap import (
    MapTuple,
    certify_inverse,
    compose,
    compose_with_cofactor,
    contract_image,
    eval_point,
    identity,
    is_identity,
    linear_map,
    normalize_point,
    order,
    points_equal,
    reduce,
)
from cremona.errors import BadParams, UnknownScenario
from cremona.poly import CC, QQ, RR, HomogPoly, Padic
from cremona.report import envelope
from cremona.wspace import (
    RegionCertificate,
    Refuted,
    Unbounded,
    WdPoint,
    degree_bounded_check,
    distance_to_identity,
    uniform_certificate,
    wd_distance,
)


@dataclass
class Check:
    name: str
    statement: str
    tolerance: object
    observed: object
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "statement": self.statement, "tolerance": self.tolerance,
                "observed": self.observed, "passed": bool(self.passed)}


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    defaults: dict
    runner: Callable = field(repr=False)


REGISTRY: dict[str, Scenario] = {}


def _register(name: str, description: str, **defaults):
    def deco(fn):
        REGISTRY[name] = Scenario(name, description, defaults, fn)
        return fn
    return deco


def _line_through(a, b) -> tuple:
    return (tuple(Fraction(x) for x in a), tuple(Fraction(x) for x in b))


# ---------------------------------------------------------------------------


@_register("unbounded-degree",
           "[x0^m : x0^(m-1) x1 + x2^m/m! : x0^(m-1) x2] has reduced degree m, so degrees are unbounded",
           m_min=2, m_max=6)
def _unbounded(p, seed):
    ms = list(range(p["m_min"], p["m_max"] + 1))
    degs = [reduce(families.factorial_member(m))[0].degree for m in ms]
    check = degree_bounded_check([families.factorial_member(m) for m in ms])
    return [
        Check("reduced-degrees", "deg pi(f_m) = m", 0, degs, degs == ms),
        Check("degree-check", "degree_bounded_check reports Unbounded", 0,
              type(check).__name__, isinstance(check, Unbounded)),
    ]


@_register("pointwise-failure",
           "f_m = [x0^2 : x0x1 + x2^2/m : x0x2] sends [0:1:p2] to [0:1:0] while f_m -> id near [1:0:0]",
           m_max=20, cert_m=[5, 10, 20, 50, 100], dist_m=[10, 100, 1000])
def _pointwise(p, seed):
    target = normalize_point([0, 1, 0], QQ)
    bad = [m for m in range(1, p["m_max"] + 1)
           if eval_point(families.pointwise_member(m), [0, 1, 1]) != target]
    cert = uniform_certificate(lambda m: families.pointwise_member(m, RR), identity(2, RR), 0, (0, 0), 0.5,
                               p["cert_m"])
    ok_cert = isinstance(cert, RegionCertificate) and all(s <= 3 / m for m, s in cert.per_m)
    refute = uniform_certificate(lambda m: families.pointwise_member(m, RR), identity(2, RR), 1, (0, 1), 0.5,
                                 p["cert_m"])
    scaled = [distance_to_identity(families.pointwise_member(m, RR).tuple) * m for m in p["dist_m"]]
    return [
        Check("eval-at-[0:1:1]", "f_m([0:1:1]) = [0:1:0]", 0, bad, not bad),
        Check("certificate", "sup error on B((0,0), 1/2) in chart x0=1 is <= 3/m", "3/m",
              cert.to_dict()["per_m"] if hasattr(cert, "per_m") else None, ok_cert),
        Check("refuted-near-[0:1:1]", "no uniform convergence on B((0,1), 1/2) in chart x1=1", 0,
              type(refute).__name__, isinstance(refute, Refuted)),
        Check("distance-rate", "m * d(f_m, id) in [0.3, 3]", [0.3, 3], scaled,
              all(0.3 <= s <= 3 for s in scaled)),
    ]


@_register("moving-lines",
           "f_m o phi_m with phi_m = [x0 + x1/m : x1 : x2] contracts {x0 + x1/m = 0} to [0:1:0]",
           m_max=10)
def _moving(p, seed):
    ms = range(1, p["m_max"] + 1)
    target = normalize_point([0, 1, 0], QQ)
    images = []
    for m in ms:
        g = compose(families.pointwise_member(m), families.moving_line_shift(m))
        images.append(contract_image(g, _line_through([1, -m, 0], [0, 0, 1])))
    lines = [(Fraction(1), Fraction(1, m), Fraction(0)) for m in ms]
    distinct = all(not points_equal(a, b, QQ) for i, a in enumerate(lines) for b in lines[i + 1:])
    return [
        Check("contraction", "contract_image(f_m o phi_m, {x0 + x1/m = 0}) = [0:1:0]", 0,
              [str(x) for x in images], all(x == target for x in images)),
        Check("distinct-lines", "the lines x0 + x1/m = 0 are pairwise distinct", 0, len(lines), distinct),
    ]


@_register("sigma-involution", "sigma = [x1x2 : x0x2 : x0x1] satisfies sigma o sigma = id with cofactor x0x1x2")
def _sigma(p, seed):
    s = families.sigma()
    red, cof = compose_with_cofactor(s, s)
    x0, x1, x2 = (HomogPoly.var(i, 3) for i in range(3))
    return [
        Check("square-is-identity", "pi(sigma o sigma) = id", 0, str(red), is_identity(red)),
        Check("cofactor", "sigma o sigma = x0x1x2 * id", 0, str(cof), cof == x0 * x1 * x2),
        Check("degree-accounting", "2 * 2 = 1 + 3", 0, [red.degree, cof.degree], red.degree + cof.degree == 4),
        Check("order", "order(sigma) = 2", 0, order(s, 4), order(s, 4) == 2),
    ]


@_register("oscillating-rho",
           "rho(t) = sigma_hat(t) f_t sigma_hat(t)^-1 tends to id while its indeterminacy point fills P^2",
           depth=6, m_list=[100, 200, 400], eps=0.1, sizes=[100, 1000, 10000])
def _oscillating(p, seed):
    ds = [distance_to_identity(spacefill.rho_oscillating(1 / m, p["depth"]).tuple) for m in p["m_list"]]
    radii = [spacefill.indeterminacy_cloud(p["eps"], n, p["depth"], seed).covering_radius for n in p["sizes"]]
    t = 0.37
    undefined = eval_point(spacefill.rho_oscillating(t, p["depth"]), spacefill.indeterminacy_point(t, p["depth"]))
    return [
        Check("distance-to-id", "d(rho(1/m), id) <= 1e-2", 1e-2, ds, all(d <= 1e-2 for d in ds)),
        Check("covering-radius", "covering radius strictly decreases in N", 0, radii,
              all(b < a for a, b in zip(radii, radii[1:]))),
        Check("indeterminacy", "rho(t) is undefined at sigma_hat(t)[0:0:1]", 1e-10, undefined is None,
              undefined is None),
    ]


@_register("homotopy-H",
           "H(s,t) joins t -> rho_hat(t) at s = 0 to t -> f_t at s = 1",
           depth=6, samples=[0.1, 0.35, 0.6, 0.85], continuity_depth=2, delta=1e-9)
def _homotopy(p, seed):
    same = [spacefill.homotopy_H(1, t, p["depth"]).tuple == families.quadratic_shear(t, CC).tuple
            for t in p["samples"]]
    h00 = spacefill.homotopy_H(0, 0, p["depth"])
    cd, d = p["continuity_depth"], p["delta"]
    jumps = [wd_distance(WdPoint.from_tuple(spacefill.homotopy_H(s, s + d, cd).tuple),
                         WdPoint.from_tuple(spacefill.homotopy_H(s, s - d, cd).tuple))
             for s in (0.3, 0.55, 0.8)]
    return [
        Check("H(1,t)=f_t", "H(1,t) = f_t as tuples", 0, same, all(same)),
        Check("H(0,0)=id", "H(0,0) = id", 0, str(h00), is_identity(h00)),
        Check("continuity", "d(H(s,s+delta), H(s,s-delta)) <= 1e-3 across the diagonal", 1e-3, jumps,
              all(j <= 1e-3 for j in jumps)),
    ]


@_register("nonlift",
           "rho_c(t) = [x0 P : x1 P : x2 P + t x0x1], P = c x0 + x1: exact identities and a lift with several limits",
           t="1/5", c_values=["-1", "1/3", "2/5", "1"], s_targets=[0, 0.5], m_max=200)
def _nonlift(p, seed):
    t = Fraction(p["t"])
    inv, fixed, contracted, vanish = [], [], [], []
    for cs in p["c_values"]:
        c = Fraction(cs)
        f = families.nonlift_member(t, c)
        g = families.nonlift_member(-t, c)
        inv.append(certify_inverse(f, g))
        fixed.append(eval_point(f, [1, 0, 0]) == normalize_point([1, 0, 0], QQ))
        img = contract_image(f, _line_through([1, -c, 0], [0, 0, 1]))
        contracted.append(img == normalize_point([0, 0, 1], QQ))
        vanish.append(spacefill.vanishing_on_contracted_line(c, t))
    rep = spacefill.nonlift_obstruction_demo(p["s_targets"], p["m_max"])
    return [
        Check("inverse", "rho_c(t)^-1 = rho_c(-t)", 0, inv, all(inv)),
        Check("fixed-point", "rho_c(t)[1:0:0] = [1:0:0]", 0, fixed, all(fixed)),
        Check("contraction", "{x1 + c x0 = 0} contracts to [0:0:1]", 0, contracted, all(contracted)),
        Check("vanishing", "h0, h1 vanish on (x0, -c x0, x2)", 0, vanish, all(vanish) and rep.symbolic_ok),
        Check("limit-match", "lift limit = (s x0 + x1)(x0, x1, x2)", 1e-6, rep.match_errors,
              all(e <= 1e-6 for e in rep.match_errors.values())),
        Check("limit-spread", "distinct s give limits at distance >= 0.1", 0.1, rep.diameter,
              rep.diameter >= 0.1 or len(p["s_targets"]) < 2),
        Check("limits-reduce-to-id", "every limit reduces to id", 0, rep.reduces_to_identity,
              all(rep.reduces_to_identity.values())),
    ]


@_register("padic-gate",
           "chart Gauss distance to id: 0 for id, 1 for x -> -x, p^-2 for x -> x + p^2 with order unverified",
           p=3, N=12)
def _padic_gate(p, seed):
    pr, N = p["p"], p["N"]
    ident = padic.identity_gate_padic(padic.chart_normalize(identity(2), None, pr, N), 6)
    neg = padic.identity_gate_padic(padic.chart_normalize(linear_map([[1, 0, 0], [0, -1, 0], [0, 0, -1]]),
                                                          None, pr, N), 6)
    shift = linear_map([[1, 0, 0], [pr**2, 1, 0], [0, 0, 1]])
    tr = padic.identity_gate_padic(padic.chart_normalize(shift, None, pr, N), 6)
    return [
        Check("identity", "gate(id) = ForcedIdentity", 0, ident.to_dict(), isinstance(ident, padic.ForcedIdentity)),
        Check("negation", "gate(x -> -x) = BoundViolated(1)", 0, neg.to_dict(),
              isinstance(neg, padic.BoundViolated) and neg.norm == 1),
        Check("translation", "gate(x -> x + p^2) = NotApplicable(OrderUnverified), norm p^-2", 0, tr.to_dict(),
              isinstance(tr, padic.NotApplicable) and tr.reason == "OrderUnverified"
              and tr.norm == Fraction(1, pr**2)),
    ]


@_register("padic-small-subgroups",
           "unipotent elements x1 -> x1 + q, v_p(q) >= m, form subgroups inside the p^-m ball",
           p=3, m=2, count=5)
def _small(p, seed):
    s = padic.small_subgroup_sample(p["p"], p["m"], p["count"], seed=seed)
    ball = Fraction(1, p["p"] ** p["m"])
    forced = [isinstance(v, padic.ForcedIdentity) for v in s.verdicts]
    return [
        Check("inside-ball", "||g - id|| <= p^-m", str(ball), [str(d) for d in s.distances],
              all(d <= ball for d in s.distances)),
        Check("closure", "products stay unipotent with v_p(q) >= m", 0, s.products_checked,
              s.closure_ok and s.products_checked == p["count"] ** 2),
        Check("not-forced", "no element is forced to be the identity", 0, forced, not any(forced)),
    ]


@_register("theorem1-consistency-sweep",
           "a finite-order map within p^-2 of id in the chart is id; nontrivial conjugates stay outside",
           count=100, p=3, N=12, pairs=100)
def _sweep(p, seed):
    rep = padic.finite_order_sweep(p["count"], p["p"], p["N"], seed=seed)
    rng = np.random.default_rng(seed)
    mult_bad = 0
    for _ in range(p["pairs"]):
        a = padic.random_padic_poly(rng, p["p"], p["N"])
        b = padic.random_padic_poly(rng, p["p"], p["N"])
        if padic.gauss_norm(a * b) != padic.gauss_norm(a) * padic.gauss_norm(b):
            mult_bad += 1
    nontrivial = all(o is not None and o > 1 for o in rep.orders)
    return [
        Check("no-violations", "no nontrivial finite-order conjugate within p^-2", 0, rep.violations,
              rep.violations == 0 and nontrivial),
        Check("multiplicativity", "||ab|| = ||a|| ||b||", 0, mult_bad, mult_bad == 0),
    ]


# ---------------------------------------------------------------------------


def _validate(sc: Scenario, params: dict | None) -> dict:
    merged = dict(sc.defaults)
    for k, v in (params or {}).items():
        if k not in sc.defaults:
            raise BadParams(f"scenario {sc.name!r} has no parameter {k!r}")
        default = sc.defaults[k]
        if isinstance(default, list) and not isinstance(v, list):
            raise BadParams(f"parameter {k!r} must be a list")
        if isinstance(default, int) and not isinstance(default, bool) and not isinstance(v, int):
            raise BadParams(f"parameter {k!r} must be an integer")
        merged[k] = v
    return merged


def run_scenario(name: str, params: dict | None = None, seed: int = 0) -> dict:
    if name not in REGISTRY:
        raise UnknownScenario(f"unknown scenario {name!r}; choose from {', '.join(sorted(REGISTRY))}")
    sc = REGISTRY[name]
    merged = _validate(sc, params)
    checks = sc.runner(merged, seed)
    return envelope("scenario", {
        "name": sc.name,
        "description": sc.description,
        "seed": seed,
        "params": merged,
        "assertions": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    })


def scenario_corpus() -> list[MapTuple]:
    """Map tuples appearing in the scenarios, for parser round-trip checks."""
    out = [families.sigma().tuple, families.factorial_member(4), families.quadratic_shear(Fraction(1, 3)).tuple]
    out += [families.pointwise_member(m).tuple for m in (1, 3, 7)]
    out += [compose(families.pointwise_member(m), families.moving_line_shift(m)).tuple for m in (2, 5)]
    out += [families.nonlift_member(Fraction(1, 5), Fraction(c)).tuple for c in ("-1", "1/3")]
    out += [families.pointwise_member(4, RR).tuple, families.nonlift_member(0.25, math.cos(8 * math.pi), RR).tuple]
    out += [spacefill.rho_oscillating(0.3, 3).tuple]
    out += [padic.unipotent(Fraction(9)).tuple.with_domain(Padic(3, 12))]
    return out


__all__ = ["Check", "Scenario", "REGISTRY", "run_scenario", "scenario_corpus"]
