"""Acceptance criteria; each test prints one PASS/FAIL line and then asserts."""

import time
from fractions import Fraction

import numpy as np
import pytest

from cremona import families
from cremona.birmap import (
    compose,
    compose_with_cofactor,
    contract_image,
    eval_point,
    identity,
    is_identity,
    linear_with_inverse,
    normalize_point,
    points_equal,
    reduce,
)
from cremona.holodyn import (
    ChartMap,
    ForcedIdentity,
    NotApplicable,
    NotForced,
    cartan_gate,
    conjugated_involution,
    finite_difference_jacobian,
    pointwise_chart,
    random_chart_map,
)
from cremona.padic import (
    BoundViolated,
    ForcedIdentity as PadicForced,
    NotApplicable as PadicNotApplicable,
    chart_normalize,
    gauss_norm,
    identity_gate_padic,
    random_padic_poly,
    small_subgroup_sample,
    finite_order_sweep,
)
from cremona.padicnum import PadicNum
from cremona.poly import CC, QQ, RR, HomogPoly, euler_defect, random_poly
from cremona.spacefill import (
    SpaceFillingCurve,
    homotopy_H,
    indeterminacy_cloud,
    nonlift_family,
    nonlift_obstruction_demo,
    reference_net,
    rho_oscillating,
    su3_matrices,
    vanishing_on_contracted_line,
)
from conftest import random_certified
from cremona.wspace import RegionCertificate, distance_to_identity, uniform_certificate

F = Fraction
x0, x1, x2 = (HomogPoly.var(i, 3) for i in range(3))


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


def _line(a, b):
    return (tuple(F(v) for v in a), tuple(F(v) for v in b))


def test_criterion_01_involution(verdict):
    s = families.sigma()
    red, cof = compose_with_cofactor(s, s)
    dt = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        compose_with_cofactor(s, s)
        dt = min(dt, time.perf_counter() - t0)
    ok = is_identity(red) and cof == x0 * x1 * x2 and s.degree * s.degree == red.degree + cof.degree and dt < 1e-3
    verdict(1, ok, f"sigma o sigma = id, cofactor {cof}, {dt * 1e3:.3f} ms")


def test_criterion_02_unbounded_degree(verdict):
    degs = tuple(reduce(families.factorial_member(m))[0].degree for m in range(2, 7))
    verdict(2, degs == (2, 3, 4, 5, 6), f"reduced degrees {degs}")


def test_criterion_03_pointwise_failure(verdict):
    target = normalize_point([0, 1, 0], QQ)
    evals = all(eval_point(families.pointwise_member(m), [0, 1, 1]) == target for m in range(1, 21))
    ms = [5, 10, 20, 50, 100]
    cert = uniform_certificate(lambda m: families.pointwise_member(m, RR), identity(2, RR), 0, (0, 0), 0.5, ms)
    cert_ok = isinstance(cert, RegionCertificate) and all(e <= 3 / m for m, e in cert.per_m)
    rates = [m * distance_to_identity(families.pointwise_member(m, RR)) for m in range(10, 1001)]
    rate_ok = all(0.3 <= r <= 3 for r in rates)
    verdict(3, evals and cert_ok and rate_ok,
            f"eval exact for m=1..20: {evals}; certificate: {cert_ok}; m*d in [{min(rates):.3f}, {max(rates):.3f}]")


def test_criterion_04_moving_lines(verdict):
    target = normalize_point([0, 1, 0], QQ)
    images = [contract_image(compose(families.pointwise_member(m), families.moving_line_shift(m)),
                             _line([1, -m, 0], [0, 0, 1])) for m in range(1, 11)]
    lines = [(F(1), F(1, m), F(0)) for m in range(1, 11)]
    distinct = all(not points_equal(a, b, QQ) for i, a in enumerate(lines) for b in lines[i + 1:])
    verdict(4, all(im == target for im in images) and distinct,
            f"10 contracted lines map to [0:1:0], pairwise distinct: {distinct}")


def test_criterion_05_cartan_gate(verdict):
    bad = 0
    bad += sum(not isinstance(cartan_gate(ChartMap(identity(2)), D), ForcedIdentity) for D in range(1, 7))
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = cartan_gate(ChartMap(conjugated_involution(rng)), 2)
        if not (isinstance(g, NotForced) and min(abs(e + 1) for e in g.eigenvalues) <= 1e-6):
            bad += 1
    for m in (2, 3, 5, 10):
        g = cartan_gate(pointwise_chart(m), 2)
        if not (isinstance(g, NotApplicable) and g.reason == "NotOrderD"):
            bad += 1
    verdict(5, bad == 0, f"{bad} misclassifications over 30 gate calls")


def test_criterion_06_differentials(verdict):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        f = random_chart_map(rng)
        for z in (rng.normal(size=(100, 2)) + 1j * rng.normal(size=(100, 2))) * 0.3:
            worst = max(worst, float(np.abs(f.jacobian(z) - finite_difference_jacobian(f, z)).max()))
    prng = np.random.default_rng(5)
    euler = all(euler_defect(random_poly(prng, 3, int(prng.integers(0, 5)))).is_zero() for _ in range(100))
    verdict(6, worst <= 1e-6 and euler, f"max Jacobian gap {worst:.2e}; Euler identity exact: {euler}")


def test_criterion_07_padic_trichotomy(verdict):
    p, N = 3, 12
    ident = identity_gate_padic(chart_normalize(identity(2), None, p, N), 6)
    neg = identity_gate_padic(chart_normalize(linear_with_inverse([[1, 0, 0], [0, -1, 0], [0, 0, -1]]), None, p, N), 6)
    shift = identity_gate_padic(chart_normalize(linear_with_inverse([[1, 0, 0], [9, 1, 0], [0, 0, 1]]), None, p, N), 6)
    ok = (isinstance(ident, PadicForced)
          and isinstance(neg, BoundViolated) and neg.norm == 1
          and isinstance(shift, PadicNotApplicable) and shift.reason == "OrderUnverified"
          and shift.norm == F(1, 9))
    verdict(7, ok, f"{type(ident).__name__}, {type(neg).__name__}({neg.norm}), "
                   f"{type(shift).__name__}({shift.norm})")


def test_criterion_08_sweep(verdict):
    sweep = finite_order_sweep(count=100, p=3)
    rng = np.random.default_rng(11)
    mult = 0
    for _ in range(500):
        a, b = random_padic_poly(rng, 3, 12), random_padic_poly(rng, 3, 12)
        mult += gauss_norm(a * b) == gauss_norm(a) * gauss_norm(b)
    verdict(8, sweep.violations == 0 and mult == 500,
            f"{sweep.violations} of 100 within 3^-2 (min norm {min(sweep.norms)}); multiplicative on {mult}/500")


def test_criterion_09_small_subgroups(verdict):
    s = small_subgroup_sample(3, 2, 5)
    in_ball = all(d <= F(1, 9) for d in s.distances)
    none_forced = not any(isinstance(v, PadicForced) for v in s.verdicts)
    ok = in_ball and s.closure_ok and s.products_checked == 25 and none_forced
    verdict(9, ok, f"in ball: {in_ball}; closure on {s.products_checked} products: {s.closure_ok}; "
                   f"none forced: {none_forced}")


def test_criterion_10_space_filling(verdict):
    U = su3_matrices(np.random.default_rng(0).random((10_000, 8)))
    unit = float(np.abs(np.conj(np.swapaxes(U, 1, 2)) @ U - np.eye(3)).max())
    det = float(np.abs(np.linalg.det(U) - 1).max())
    cells = SpaceFillingCurve(2, 3).cells_hit(np.linspace(0, 1, 4096))
    net = reference_net()
    radii = [indeterminacy_cloud(0.1, n, net=net).covering_radius for n in (100, 1000, 10_000)]
    ok = unit <= 1e-12 and det <= 1e-12 and cells == 64 and radii[0] > radii[1] > radii[2]
    verdict(10, ok, f"residuals {unit:.1e}/{det:.1e}; {cells} cells; radii "
                    + ", ".join(f"{r:.3f}" for r in radii))


def test_criterion_11_oscillating(verdict):
    ds = [distance_to_identity(rho_oscillating(1 / m, 6).tuple) for m in (100, 200, 500, 1000)]
    same = all(homotopy_H(1, t).tuple == families.quadratic_shear(t, CC).tuple for t in (0.1, 0.35, 0.6, 0.85))
    h00 = is_identity(homotopy_H(0, 0))
    verdict(11, max(ds) <= 1e-2 and same and h00,
            f"max d(rho(1/m), id) = {max(ds):.2e}; H(1,t) = f_t: {same}; H(0,0) = id: {h00}")


def test_criterion_12_nonlift(verdict):
    exact_ok = True
    for c in (F(-1), F(1, 3), F(2, 5), F(1)):
        t = F(1, 5)
        f = nonlift_family(t, c)
        inv = nonlift_family(-t, c)
        exact_ok &= f.certified_inverse.tuple == inv.tuple
        exact_ok &= is_identity(compose(f, f.certified_inverse))
        exact_ok &= eval_point(f, [1, 0, 0]) == normalize_point([1, 0, 0], QQ)
        exact_ok &= contract_image(f, _line([1, -c, 0], [0, 0, 1])) == normalize_point([0, 0, 1], QQ)
        exact_ok &= vanishing_on_contracted_line(c, t)
    rep = nonlift_obstruction_demo([0.0, 0.5])
    float_ok = (max(rep.match_errors.values()) <= 1e-6 and rep.diameter >= 0.1
                and all(rep.reduces_to_identity.values()))
    verdict(12, exact_ok and float_ok,
            f"exact part: {exact_ok}; match errors {max(rep.match_errors.values()):.1e}; "
            f"limit distance {rep.diameter:.4f}")


def _mod(x: Fraction, p: int, k: int) -> int:
    return x.numerator * pow(x.denominator, -1, p**k) % p**k


def test_criterion_13_cross_domain(verdict):
    p, N = 3, 12
    rng = np.random.default_rng(13)
    agree = 0
    for _ in range(1000):
        a, b = (F(int(rng.integers(-10**6, 10**6)), int(rng.choice([1, 2, 4, 5, 7, 11]))) for _ in range(2))
        c = F(int(rng.choice([1, 2, 4, 5, 7, 8])), int(rng.choice([1, 5, 7])))
        pa, pb, pc = (PadicNum.from_rational(v, p, N) for v in (a, b, c))
        got = ((pa + pb) * pc - pa / pc).residue(N)
        agree += got == _mod((a + b) * c - a / c, p, N)
    crng = np.random.default_rng(7)
    checked = mismatched = 0
    for _ in range(100):
        f, g = random_certified(crng), random_certified(crng)
        fg = compose(f, g)
        # resample until the point avoids the indeterminacy loci of g and f
        for _ in range(50):
            pt = [F(int(v), int(d)) for v, d in zip(crng.integers(-5, 6, 3), crng.integers(1, 5, 3))]
            gp = eval_point(g, pt) if any(pt) else None
            fgp = None if gp is None else eval_point(f, gp)
            if fgp is not None:
                break
        checked += 1
        mismatched += eval_point(fg, pt) != fgp
    verdict(13, agree == 1000 and mismatched == 0 and checked == 100,
            f"p-adic triples {agree}/1000; compose/eval mismatches {mismatched} over {checked} certified pairs")
