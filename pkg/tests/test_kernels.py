import os
import subprocess
import sys

import numpy as np
import pytest

from cremona import kernels
from cremona.birmap import chordal


def _unit_rows(rng, n):
    v = rng.normal(size=(n, 3)) + 1j * rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


@pytest.mark.parametrize("k,depth", [(2, 3), (3, 4), (8, 2)])
def test_hilbert_paths_agree(rng, k, depth):
    ts = rng.random(5000)
    a = kernels.hilbert_points_nb(ts, k, depth)
    b = kernels.hilbert_points_np(ts, k, depth)
    assert np.abs(a - b).max() <= 1e-12


def test_min_chordal_paths_agree_with_direct_oracle(rng):
    net, cloud = _unit_rows(rng, 300), _unit_rows(rng, 200)
    a = kernels.min_chordal_nb(net, cloud)
    b = kernels.min_chordal_np(net, cloud)
    assert np.abs(a - b).max() <= 1e-12
    for i in range(0, 300, 37):
        assert abs(a[i] - min(chordal(net[i], c) for c in cloud)) <= 1e-12


def test_poly_eval_paths_agree_with_exact_evaluator(rng):
    exps = rng.integers(0, 3, size=(6, 3)).astype(np.int64)
    exps = np.unique(exps, axis=0)
    coeffs = rng.normal(size=len(exps)) + 1j * rng.normal(size=len(exps))
    pts = rng.normal(size=(400, 3)) + 1j * rng.normal(size=(400, 3))
    a = kernels.poly_eval_batch_nb(exps, coeffs, pts)
    b = kernels.poly_eval_batch_np(exps, coeffs, pts)
    assert np.abs(a - b).max() <= 1e-12
    # scalar oracle per degree part: each monomial evaluated on its own
    for j in range(0, 400, 53):
        want = sum(c * np.prod(pts[j] ** e) for e, c in zip(exps, coeffs))
        assert abs(a[j] - want) <= 1e-10 * max(1.0, abs(want))


def test_env_flag_selects_numpy_path():
    code = "from cremona import _accel, kernels; print(_accel.USE_NUMBA, kernels.min_chordal is kernels.min_chordal_np)"
    env = dict(os.environ, CREMONA_USE_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.split() == ["False", "True"]
