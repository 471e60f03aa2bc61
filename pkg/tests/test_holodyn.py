import numpy as np
import pytest

from cremona import families
from cremona.birmap import MapTuple, identity, linear_map
from cremona.errors import IterateEscapesDomain, StepSizeUnderflow
from cremona.poly import HomogPoly
from cremona.holodyn import (
    ChartMap,
    Fails,
    Fixed,
    ForcedIdentity,
    NotApplicable,
    NotForced,
    PositiveDefinite,
    build_body,
    cartan_gate,
    conjugated_involution,
    find_fixed_point,
    finite_difference_jacobian,
    hessian_convexity_check,
    pointwise_chart,
    random_chart_map,
    Refused,
)


@pytest.mark.parametrize("D", range(1, 7))
def test_identity_forced(D):
    assert isinstance(cartan_gate(ChartMap(identity(2)), D), ForcedIdentity)


def test_conjugated_involutions_not_forced():
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = cartan_gate(ChartMap(conjugated_involution(rng)), 2)
        assert isinstance(g, NotForced)
        ev = sorted(g.eigenvalues, key=lambda e: e.real)
        assert abs(ev[0] + 1) < 1e-6 and abs(ev[1] - 1) < 1e-6


def test_order_three_eigenvalues_are_roots_of_unity():
    f = ChartMap(linear_map([[1, 0, 0], [0, 0, 1], [0, -1, -1]]))
    g = cartan_gate(f, 3)
    assert isinstance(g, NotForced)
    for e in g.eigenvalues:
        assert abs(e**3 - 1) < 1e-6 and abs(e - 1) > 0.5


@pytest.mark.parametrize("m", [2, 4, 8])
def test_pointwise_chart_not_order_two(m):
    g = cartan_gate(pointwise_chart(m), 2)
    assert isinstance(g, NotApplicable) and g.reason == "NotOrderD"


def test_body_refused_for_non_periodic():
    assert isinstance(build_body(pointwise_chart(3), 2), Refused)
    with pytest.raises(ValueError):
        build_body(ChartMap(identity(2)), 1, r=1.0, r_prime=0.5)


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        f = random_chart_map(rng)
        pts = (rng.normal(size=(100, 2)) + 1j * rng.normal(size=(100, 2))) * 0.3
        for z in pts:
            worst = max(worst, np.abs(f.jacobian(z) - finite_difference_jacobian(f, z)).max())
    assert worst <= 1e-6


def test_fixed_point_of_linear_map():
    f = ChartMap(linear_map([[1, 0, 0], [0, -1, 0], [0, 0, 1]]))
    fp = find_fixed_point(f)
    # the fixed set is the line z1 = 0
    assert isinstance(fp, Fixed) and abs(fp.point[0]) < 1e-9
    assert np.abs(f(fp.point)[0] - fp.point).max() < 1e-9


def test_hessian_identity_and_perturbation():
    h = hessian_convexity_check(ChartMap(identity(2)), 1)
    assert isinstance(h, PositiveDefinite) and abs(h.min_eigenvalue - 2) < 1e-4
    rng = np.random.default_rng(0)
    h2 = hessian_convexity_check(random_chart_map(rng, scale=1e-3), 1, density=5)
    assert isinstance(h2, PositiveDefinite) and h2.min_eigenvalue > 1.9


def test_hessian_detects_concavity():
    # |z1^2 - 1|^2 has second derivative -4 along Re z1 at the origin
    x0, x1, x2 = (HomogPoly.var(i, 3) for i in range(3))
    f = ChartMap(MapTuple([x0 * x0, x1 * x1 - x0 * x0, x0 * x2]))
    h = hessian_convexity_check(f, 1, grid=np.array([[0.0, 0.0]]))
    assert isinstance(h, Fails) and abs(h.min_eigenvalue + 4) < 1e-4


def test_step_underflow():
    with pytest.raises(StepSizeUnderflow):
        hessian_convexity_check(ChartMap(identity(2)), 1, step=1e-9)


def test_escape_raises():
    f = ChartMap(families.sigma())
    with pytest.raises(IterateEscapesDomain):
        f(np.array([[0.0, 1.0]]))
