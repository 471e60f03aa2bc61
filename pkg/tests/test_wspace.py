import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cremona import families
from cremona.birmap import MapTuple, identity
from cremona.errors import DegreeMismatch, EmptyGrid, MixedDegrees, TooShort
from cremona.poly import CC, RR, HomogPoly, monomials
from cremona.wspace import (
    CONVERGES_TO_ID,
    CONVERGES_TO_OTHER,
    DEGREE_UNBOUNDED,
    DIVERGES,
    Bounded,
    RegionCertificate,
    Refuted,
    Unbounded,
    WdPoint,
    analyze_sequence,
    degree_bounded_check,
    distance_to_identity,
    identity_rep,
    near_cofactor,
    sequence_limit,
    tuple_from_vector,
    uniform_certificate,
    wd_distance,
)


def pointwise_closed_form(m: float) -> float:
    # f_m = (x0 * id) + e/m with e orthogonal to the identity fiber, |x0 * id|^2 = 3
    return math.sqrt(2 - 2 * math.sqrt(3) / math.sqrt(3 + 1 / m**2))


@pytest.mark.parametrize("m", [1, 3, 10, 100, 1000])
def test_distance_to_identity_closed_form(m):
    d = distance_to_identity(families.pointwise_member(m, RR))
    assert abs(d - pointwise_closed_form(m)) < 1e-9


def test_distance_rate_window():
    for m in (10, 30, 100, 300, 1000):
        assert 0.3 <= m * distance_to_identity(families.pointwise_member(m, RR)) <= 3


def test_identity_rep_is_on_fiber():
    assert distance_to_identity(identity_rep(2, 3)) < 1e-12


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        wd_distance(identity(2, RR), families.pointwise_member(2, RR))


vectors = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                   min_size=18, max_size=18).filter(lambda v: np.linalg.norm(v) > 1e-3)


def _pt(v):
    return WdPoint.from_tuple(tuple_from_vector(np.array(v), 2, 2, CC))


@given(vectors, vectors, vectors, st.floats(0, 2 * math.pi), st.floats(0.1, 10))
def test_metric_properties(a, b, c, phi, s):
    A, B, C = _pt(a), _pt(b), _pt(c)
    scaled = _pt(np.array(a) * s * np.exp(1j * phi))
    assert wd_distance(A, scaled) < 1e-7
    assert abs(wd_distance(A, B) - wd_distance(B, A)) < 1e-12
    assert wd_distance(A, C) <= wd_distance(A, B) + wd_distance(B, C) + 1e-9
    assert 0 <= wd_distance(A, B) <= math.sqrt(2) + 1e-12


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3).filter(lambda v: max(map(abs, v)) > 0.1),
       st.lists(st.floats(-2, 2), min_size=9, max_size=9).filter(lambda v: abs(np.linalg.det(np.reshape(v, (3, 3)))) > 0.1))
def test_near_cofactor_recovers_factor(h, m):
    xs = [HomogPoly.var(i, 3, RR) for i in range(3)]
    H = sum((x.scale(c) for x, c in zip(xs[1:], h[1:])), xs[0].scale(h[0]))
    R = [sum((x.scale(m[3 * i + j]) for j, x in enumerate(xs[1:], 1)), xs[0].scale(m[3 * i])) for i in range(3)]
    split = near_cofactor(MapTuple([H * r for r in R]))
    assert split is not None
    Hs, Rs, resid = split
    assert resid < 1e-6
    assert wd_distance(Rs, MapTuple(R)) < 1e-6


def test_near_cofactor_none_for_sigma():
    assert near_cofactor(families.sigma().tuple.with_domain(RR)) is None


def test_degree_checks():
    seq = [families.factorial_member(m) for m in range(2, 7)]
    chk = degree_bounded_check(seq)
    assert isinstance(chk, Unbounded) and list(chk.trace) == [2, 3, 4, 5, 6]
    assert degree_bounded_check([families.pointwise_member(m) for m in range(1, 6)]) == Bounded(2)
    assert analyze_sequence(seq).verdict == DEGREE_UNBOUNDED


def test_sequence_verdicts():
    ms = list(range(10, 40))
    pw = [families.pointwise_member(m, RR) for m in ms]
    assert sequence_limit(pw, params=[1 / m for m in ms]).verdict == CONVERGES_TO_ID
    sig = [families.sigma().tuple.with_domain(RR)] * 5
    assert sequence_limit(sig).verdict == CONVERGES_TO_OTHER
    rep = sequence_limit([families.quadratic_shear(1 / m, RR) for m in ms], params=[1 / m for m in ms])
    assert rep.verdict == CONVERGES_TO_ID
    alt = [families.sigma().tuple.with_domain(RR) if m % 2 else identity_rep(2, 2) for m in ms]
    assert sequence_limit(alt).verdict == DIVERGES


def test_sequence_errors():
    with pytest.raises(TooShort):
        sequence_limit([identity_rep(2, 2)] * 2)
    with pytest.raises(MixedDegrees):
        sequence_limit([identity_rep(2, 2), identity_rep(2, 3), identity_rep(2, 2)])


def test_certificate_rate():
    ms = [5, 10, 20, 50, 100]
    cert = uniform_certificate(lambda m: families.pointwise_member(m, RR), identity(2, RR), 0, (0, 0), 0.5, ms)
    assert isinstance(cert, RegionCertificate)
    for m, s in cert.per_m:
        assert s <= 3 / m


def test_certificate_refuted_near_bad_point():
    ms = [5, 10, 20, 50, 100]
    ref = uniform_certificate(lambda m: families.pointwise_member(m, RR), identity(2, RR), 1, (0, 1), 0.5, ms)
    assert isinstance(ref, Refuted)
    assert ref.floor > 0.1


def test_empty_grid():
    with pytest.raises(EmptyGrid):
        uniform_certificate(lambda m: families.pointwise_member(m, RR), identity(2, RR), 0, (0, 0), 0.5, [5],
                            grid_density=0)


def test_coefficient_vector_layout():
    t = identity_rep(2, 2)
    w = WdPoint.from_tuple(t)
    assert len(w.vec) == 3 * len(monomials(3, 2))
    assert abs(np.linalg.norm(w.vec) - 1) < 1e-15


def test_nonlift_samples_with_alternating_cosine_diverge():
    # t = 2/m gives cos(2 pi / t) = (-1)^m, so the tuples alternate between two limits
    ts = [2 / m for m in range(1, 41)]
    seq = [families.nonlift_member(t, math.cos(2 * math.pi / t), RR).tuple for t in ts]
    assert sequence_limit(seq).verdict == DIVERGES
    # each member is still close to the identity fiber
    assert all(distance_to_identity(s) < 0.1 for s in seq[-4:])
