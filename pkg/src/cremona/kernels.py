"""Numeric hot loops, each in a numba flavour and a plain numpy flavour.

The public names (``hilbert_points``, ``min_chordal``, ``poly_eval_batch``)
dispatch on ``cremona._accel.USE_NUMBA``.  Both flavours are importable
directly (suffixes ``_nb`` / ``_np``) so tests and the benchmark can compare
them.
"""

import numpy as np

from cremona._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# Hilbert curve (Skilling's transpose algorithm)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _axes_from_transpose_nb(X, k, depth):
    # Gray decode then undo excess work, in place on one k-vector
    N = 1 << depth
    t = X[k - 1] >> 1
    for i in range(k - 1, 0, -1):
        X[i] ^= X[i - 1]
    X[0] ^= t
    Q = 2
    while Q != N:
        P = Q - 1
        for i in range(k - 1, -1, -1):
            if X[i] & Q:
                X[0] ^= P
            else:
                t = (X[0] ^ X[i]) & P
                X[0] ^= t
                X[i] ^= t
        Q <<= 1


@njit(cache=True)
def _digits_to_axes_nb(digits, k, depth, out):
    X = np.zeros(k, dtype=np.int64)
    for j in range(depth):
        d = digits[j]
        for i in range(k):
            X[i] |= ((d >> (k - 1 - i)) & 1) << (depth - 1 - j)
    _axes_from_transpose_nb(X, k, depth)
    for i in range(k):
        out[i] = X[i]


@njit(cache=True)
def hilbert_points_nb(ts, k, depth):
    n = ts.shape[0]
    out = np.empty((n, k), dtype=np.float64)
    scale = float((1 << depth) - 1)
    base = 1 << k
    digits = np.zeros(depth, dtype=np.int64)
    a = np.zeros(k, dtype=np.int64)
    b = np.zeros(k, dtype=np.int64)
    for r in range(n):
        t = ts[r]
        if t >= 1.0:
            for j in range(depth):
                digits[j] = base - 1
            frac = 0.0
        else:
            for j in range(depth):
                t *= base
                d = int(np.floor(t))
                digits[j] = d
                t -= d
            frac = t
        _digits_to_axes_nb(digits, k, depth, a)
        # successor index, or hold on the last cell
        last = True
        for j in range(depth):
            if digits[j] != base - 1:
                last = False
        if last or frac == 0.0:
            for i in range(k):
                out[r, i] = a[i] / scale
            continue
        j = depth - 1
        while digits[j] == base - 1:
            digits[j] = 0
            j -= 1
        digits[j] += 1
        _digits_to_axes_nb(digits, k, depth, b)
        for i in range(k):
            out[r, i] = ((1.0 - frac) * a[i] + frac * b[i]) / scale
    return out


def _axes_from_transpose_np(X, depth):
    # X: (n, k) int64, vectorized over rows
    k = X.shape[1]
    N = 1 << depth
    t = X[:, k - 1] >> 1
    for i in range(k - 1, 0, -1):
        X[:, i] ^= X[:, i - 1]
    X[:, 0] ^= t
    Q = 2
    while Q != N:
        P = Q - 1
        for i in range(k - 1, -1, -1):
            hit = (X[:, i] & Q) != 0
            X[hit, 0] ^= P
            miss = ~hit
            t = (X[miss, 0] ^ X[miss, i]) & P
            X[miss, 0] ^= t
            X[miss, i] ^= t
        Q <<= 1
    return X


def _digits_to_axes_np(digits, k, depth):
    n = digits.shape[0]
    X = np.zeros((n, k), dtype=np.int64)
    for j in range(depth):
        d = digits[:, j]
        for i in range(k):
            X[:, i] |= ((d >> (k - 1 - i)) & 1) << (depth - 1 - j)
    return _axes_from_transpose_np(X, depth)


def hilbert_points_np(ts, k, depth):
    ts = np.asarray(ts, dtype=np.float64)
    n = ts.shape[0]
    base = 1 << k
    scale = float((1 << depth) - 1)
    digits = np.zeros((n, depth), dtype=np.int64)
    t = ts.copy()
    top = t >= 1.0
    t[top] = 0.0
    for j in range(depth):
        t = t * base
        d = np.floor(t)
        digits[:, j] = d.astype(np.int64)
        t = t - d
    frac = t
    digits[top] = base - 1
    frac[top] = 0.0
    a = _digits_to_axes_np(digits, k, depth)
    last = np.all(digits == base - 1, axis=1)
    nxt = digits.copy()
    j = depth - 1
    carry = ~last
    while j >= 0 and carry.any():
        full = nxt[:, j] == base - 1
        bump = carry & ~full
        nxt[bump, j] += 1
        roll = carry & full
        nxt[roll, j] = 0
        carry = roll
        j -= 1
    b = _digits_to_axes_np(nxt, k, depth)
    b[last] = a[last]
    f = frac[:, None]
    return ((1.0 - f) * a + f * b) / scale


# ---------------------------------------------------------------------------
# chordal distance of a reference net to a point cloud in P^n(C)
# ---------------------------------------------------------------------------


@njit(cache=True)
def min_chordal_nb(net, cloud):
    """For each net row, min over cloud rows of sqrt(1 - |<u, v>|^2)."""
    R = net.shape[0]
    Q = cloud.shape[0]
    n = net.shape[1]
    out = np.empty(R, dtype=np.float64)
    for r in range(R):
        best = 0.0
        for q in range(Q):
            s = 0j
            for i in range(n):
                s += np.conj(cloud[q, i]) * net[r, i]
            a = s.real * s.real + s.imag * s.imag
            if a > best:
                best = a
        out[r] = np.sqrt(max(0.0, 1.0 - best))
    return out


def min_chordal_np(net, cloud, chunk=2048):
    net = np.asarray(net, dtype=np.complex128)
    cloud = np.asarray(cloud, dtype=np.complex128)
    out = np.empty(net.shape[0])
    for s in range(0, net.shape[0], chunk):
        g = net[s:s + chunk] @ cloud.conj().T
        best = np.max(g.real**2 + g.imag**2, axis=1)
        out[s:s + chunk] = np.sqrt(np.maximum(0.0, 1.0 - best))
    return out


# ---------------------------------------------------------------------------
# batch polynomial evaluation
# ---------------------------------------------------------------------------


@njit(cache=True)
def poly_eval_batch_nb(exps, coeffs, pts):
    P = pts.shape[0]
    T = exps.shape[0]
    n = exps.shape[1]
    out = np.zeros(P, dtype=np.complex128)
    for p in range(P):
        acc = 0j
        for t in range(T):
            m = coeffs[t]
            for i in range(n):
                e = exps[t, i]
                for _ in range(e):
                    m *= pts[p, i]
            acc += m
        out[p] = acc
    return out


def poly_eval_batch_np(exps, coeffs, pts):
    pts = np.asarray(pts, dtype=np.complex128)
    if exps.shape[0] == 0:
        return np.zeros(pts.shape[0], dtype=np.complex128)
    mons = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
    return mons @ coeffs


if USE_NUMBA:
    hilbert_points = hilbert_points_nb
    min_chordal = min_chordal_nb
    poly_eval_batch = poly_eval_batch_nb
else:
    hilbert_points = hilbert_points_np
    min_chordal = min_chordal_np
    poly_eval_batch = poly_eval_batch_np
