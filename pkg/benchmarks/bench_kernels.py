"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is compiled once before timing; the table reports the best
wall time of ``--repeat`` runs and checks that both paths agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cremona import kernels
from cremona._accel import HAVE_NUMBA


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    ts = rng.random(200_000)
    net = rng.normal(size=(10_000, 3)) + 1j * rng.normal(size=(10_000, 3))
    net /= np.linalg.norm(net, axis=1)[:, None]
    cloud = rng.normal(size=(5_000, 3)) + 1j * rng.normal(size=(5_000, 3))
    cloud /= np.linalg.norm(cloud, axis=1)[:, None]
    exps = rng.integers(0, 4, size=(20, 3)).astype(np.int64)
    coeffs = rng.normal(size=20) + 1j * rng.normal(size=20)
    pts = rng.normal(size=(200_000, 3)) + 1j * rng.normal(size=(200_000, 3))
    return [
        ("hilbert k=8 D=6, 2e5 params", kernels.hilbert_points_nb, kernels.hilbert_points_np, (ts, 8, 6)),
        ("min chordal 1e4 x 5e3", kernels.min_chordal_nb, kernels.min_chordal_np, (net, cloud)),
        ("poly eval 20 terms, 2e5 pts", kernels.poly_eval_batch_nb, kernels.poly_eval_batch_np,
         (exps, coeffs, pts)),
    ]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, nb, npf, a in cases(rng):
        r_nb, r_np = nb(*a), npf(*a)  # compile and check
        diff = float(np.max(np.abs(np.asarray(r_nb) - np.asarray(r_np))))
        t_nb = _best(lambda: nb(*a), args.repeat)
        t_np = _best(lambda: npf(*a), args.repeat)
        print(f"{name:32s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
