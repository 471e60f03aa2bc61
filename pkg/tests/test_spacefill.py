import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cremona import families
from cremona.birmap import eval_point, is_identity
from cremona.errors import ParamOutOfRange
from cremona.poly import CC
from cremona.spacefill import (
    SpaceFillingCurve,
    UnitaryPoint,
    continuity_constant,
    homotopy_H,
    hilbert_points,
    indeterminacy_cloud,
    indeterminacy_point,
    nonlift_family,
    nonlift_obstruction_demo,
    nonlift_params,
    projective_unitary_distance,
    reference_net,
    rho_inverse,
    rho_oscillating,
    sigma_hat,
    so3_from_box,
    so3_matrices,
    su3_from_box,
    su3_matrices,
    vanishing_on_contracted_line,
)
from cremona.birmap import compose_raw
from cremona.wspace import WdPoint, distance_to_identity, near_cofactor, wd_distance


def test_su3_unitary_on_many_samples(rng):
    U = su3_matrices(rng.random((10_000, 8)))
    eye = np.eye(3)
    res = np.abs(np.conj(np.swapaxes(U, 1, 2)) @ U - eye).max()
    assert res <= 1e-12
    assert np.abs(np.linalg.det(U) - 1).max() <= 1e-12
    UnitaryPoint(U[0], ())


def test_so3_orthogonal(rng):
    R = so3_matrices(rng.random((2000, 3)))
    assert np.abs(np.swapaxes(R, 1, 2) @ R - np.eye(3)).max() <= 1e-12
    assert np.abs(np.linalg.det(R) - 1).max() <= 1e-12


def test_box_checks():
    with pytest.raises(ParamOutOfRange):
        su3_from_box(np.full(8, 1.5))
    with pytest.raises(ParamOutOfRange):
        so3_from_box([0.5, 0.5])
    with pytest.raises(ValueError):
        UnitaryPoint(2 * np.eye(3), ())


def test_hilbert_cells_hit_depth3():
    curve = SpaceFillingCurve(2, 3)
    ts = np.linspace(0, 1, 4096)
    assert curve.cells_hit(ts) == 64


def test_curve_argument_ranges():
    for k, d in [(1, 3), (9, 3), (2, 0), (2, 11)]:
        with pytest.raises(ParamOutOfRange):
            SpaceFillingCurve(k, d)
    with pytest.raises(ParamOutOfRange):
        hilbert_points([1.5], 2, 3)
    with pytest.raises(ParamOutOfRange):
        hilbert_points([float("nan")], 2, 3)


@pytest.mark.parametrize("k,depth", [(2, 3), (3, 2), (8, 1)])
def test_lattice_is_bijective_and_adjacent(k, depth):
    L = SpaceFillingCurve(k, depth).lattice()
    side = 2**depth
    cells = np.rint(L * (side - 1)).astype(int)
    assert len({tuple(c) for c in cells}) == side**k
    steps = np.abs(np.diff(cells, axis=0)).sum(axis=1)
    assert np.all(steps == 1)


@given(st.integers(2, 4), st.integers(1, 5), st.floats(0, 1), st.floats(0, 1))
def test_continuity_ratio_below_constant(k, depth, t, s):
    if t == s:
        return
    curve = SpaceFillingCurve(k, depth)
    assert curve.continuity_ratio([t], [s])[0] <= curve.C + 1e-9


def test_continuity_constant_value():
    assert continuity_constant(1) == 16.0
    assert continuity_constant(10) < 8.01


def test_endpoints():
    pts = hilbert_points([0.0, 1.0], 3, 4)
    assert np.allclose(pts[0], 0)
    assert np.isclose(np.abs(pts[1] - pts[0]).max(), 1.0)


def _haar_so3(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, 3, 3)))
    Q = Q * np.sign(np.diagonal(R, axis1=1, axis2=2))[:, None, :]
    Q[np.linalg.det(Q) < 0, :, 0] *= -1
    return Q


def test_so3_lattice_covering_shrinks(rng):
    targets = _haar_so3(rng, 300)
    radii = []
    for depth in (2, 3, 4):
        R = so3_matrices(SpaceFillingCurve(3, depth).lattice())
        # Frobenius distance^2 = 6 - 2 tr(A^T B)
        tr = np.einsum("aij,bij->ab", targets, R)
        radii.append(float(np.sqrt(max(0.0, np.max(6 - 2 * tr.max(axis=1))))))
    assert radii[0] > radii[1] > radii[2]


def _haar_su3(rng, n):
    Z = rng.normal(size=(n, 3, 3)) + 1j * rng.normal(size=(n, 3, 3))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    Q = Q * (d / np.abs(d))[:, None, :]
    return Q / np.linalg.det(Q)[:, None, None] ** (1 / 3)


def test_su3_lattice_covering_shrinks(rng):
    targets = _haar_su3(rng, 100)
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    radii = []
    for depth in (1, 2):
        V = su3_matrices(SpaceFillingCurve(8, depth).lattice())
        tr = np.einsum("aij,bij->ab", np.conj(targets), V)
        best = np.max([np.real(w * tr) for w in roots], axis=0).max(axis=1)
        radii.append(float(np.sqrt(max(0.0, np.max(6 - 2 * best)))))
    assert radii[1] < radii[0]


def test_projective_distance_ignores_center():
    U = su3_matrices(np.full(8, 0.3))[0]
    assert projective_unitary_distance(U, np.exp(2j * np.pi / 3) * U) < 1e-12


def test_sigma_hat_identity_at_one():
    assert np.array_equal(sigma_hat(1.0), np.eye(3))
    with pytest.raises(ParamOutOfRange):
        sigma_hat(0.0)


@pytest.mark.parametrize("m,bound", [(100, 1e-2), (1000, 1e-3)])
def test_rho_approaches_identity(m, bound):
    assert distance_to_identity(rho_oscillating(1 / m).tuple) <= bound


def test_rho_inverse_composes_to_identity_fiber():
    t = 0.3
    prod = compose_raw(rho_oscillating(t), rho_inverse(t))
    assert near_cofactor(prod) is not None
    # distance is a square root of a roundoff-level residual
    assert distance_to_identity(prod) < 1e-6


def test_indeterminacy_point_of_rho():
    for t in (0.2, 0.37, 0.9):
        assert eval_point(rho_oscillating(t), indeterminacy_point(t)) is None
        assert np.allclose(indeterminacy_point(t), sigma_hat(t)[:, 2])


def test_homotopy_endpoints():
    for t in (0.1, 0.5, 0.9):
        assert homotopy_H(1, t).tuple == families.quadratic_shear(t, CC).tuple
    assert is_identity(homotopy_H(0, 0))
    assert is_identity(rho_oscillating(0))


def test_homotopy_continuous_across_diagonal():
    d = 1e-9
    for s in (0.3, 0.55, 0.8):
        a = WdPoint.from_tuple(homotopy_H(s, s + d, 2).tuple)
        b = WdPoint.from_tuple(homotopy_H(s, s - d, 2).tuple)
        assert wd_distance(a, b) < 1e-3


def test_cloud_radius_strictly_decreases():
    net = reference_net()
    radii = [indeterminacy_cloud(0.1, n, net=net).covering_radius for n in (100, 1000, 10_000)]
    assert radii[0] > radii[1] > radii[2]


def test_cloud_validation():
    with pytest.raises(ParamOutOfRange):
        indeterminacy_cloud(1.5, 10)
    with pytest.raises(ParamOutOfRange):
        indeterminacy_cloud(0.1, 0)


def test_nonlift_params_hit_target():
    for s in (-0.7, 0.0, 0.5):
        for t in nonlift_params(s, [3, 40, 900]):
            assert abs(math.cos(2 * math.pi / t) - s) < 1e-9


@pytest.mark.parametrize("c", [Fraction(-1), Fraction(1, 3), Fraction(2, 5), Fraction(1)])
def test_nonlift_exact_members_invertible(c):
    f = nonlift_family(Fraction(1, 5), c)
    assert f.certified_inverse is not None
    assert vanishing_on_contracted_line(c)


def test_nonlift_obstruction():
    rep = nonlift_obstruction_demo([0.0, 0.5])
    assert rep.symbolic_ok
    assert all(e < 1e-6 for e in rep.match_errors.values())
    assert all(rep.reduces_to_identity.values())
    assert rep.diameter > 0.1
