"""Hot inner loops of the 3-dimensional refinement round.

Every kernel exists twice: a numba ``@njit`` version and a vectorized numpy
version.  Both produce bit-identical results.  The numba path is used when
numba is importable and ``TOPISO_DISABLE_NUMBA`` is not set to a true value.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_FLAG = os.environ.get("TOPISO_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_SALT_X = 0x9E3779B97F4A7C15
_SALT_Y = 0xC2B2AE3D27D4EB4F
_SALT_Z = 0x165667B19E3779F9
_SALT_2 = 0xD6E8FEB86659FD93


# ---------------------------------------------------------------- numpy path

def _mix_np(x):
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(_M1)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def _tables(colors):
    """Per-position random 64-bit values for every color id."""
    m = int(colors.max()) + 1 if colors.size else 1
    ids = np.arange(m, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return (
            _mix_np(ids + np.uint64(_SALT_X)),
            _mix_np(ids + np.uint64(_SALT_Y)),
            _mix_np(ids + np.uint64(_SALT_Z)),
        )


def _second(h):
    return (h ^ (h >> np.uint64(29))) * np.uint64(_SALT_2)


def wl3_hash_numpy(colors):
    """Order-independent 128-bit hash of each tuple's neighbour multiset.

    ``colors`` has shape (n, n, n).  For the tuple (a, b, c) the multiset runs
    over w of (colors[w,b,c], colors[a,w,c], colors[a,b,w]).  Each triple is
    hashed as mix(T1[x] + T2[y] + T3[z]) and the results are summed.
    """
    n = colors.shape[0]
    t1, t2, t3 = _tables(colors)
    c = np.asarray(colors, dtype=np.int64)
    s1 = np.zeros((n, n, n), dtype=np.uint64)
    s2 = np.zeros((n, n, n), dtype=np.uint64)
    with np.errstate(over="ignore"):
        for w in range(n):
            e = t1[c[w]][None, :, :] + t2[c[:, w, :]][:, None, :] + t3[c[:, :, w]][:, :, None]
            h = _mix_np(e)
            s1 += h
            s2 += _second(h)
    return s1.reshape(-1), s2.reshape(-1)


def _signatures_np(colors, m, idx):
    n = colors.shape[0]
    a, rem = np.divmod(idx, n * n)
    b, c = np.divmod(rem, n)
    x = colors[:, b, c].T
    y = colors[a, :, c]
    z = colors[a, b, :]
    yz = y * m + z
    o1 = np.argsort(yz, axis=1, kind="stable")
    x = np.take_along_axis(x, o1, axis=1)
    yz = np.take_along_axis(yz, o1, axis=1)
    o2 = np.argsort(x, axis=1, kind="stable")
    return np.take_along_axis(x, o2, axis=1), np.take_along_axis(yz, o2, axis=1)


def wl3_verify_numpy(colors, m, order, leader, block=4096):
    """Return tuple indices whose multiset differs from their group leader's.

    ``order`` lists tuple indices; ``leader[i]`` is the tuple index that
    ``order[i]`` must match.
    """
    bad = []
    todo = np.nonzero(order != leader)[0]
    for start in range(0, len(todo), block):
        sel = todo[start:start + block]
        xs, ys = _signatures_np(colors, m, order[sel])
        xl, yl = _signatures_np(colors, m, leader[sel])
        diff = np.any(xs != xl, axis=1) | np.any(ys != yl, axis=1)
        bad.extend(order[sel][diff].tolist())
    return np.asarray(bad, dtype=np.int64)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _mix_nb(x):
        x = x ^ (x >> np.uint64(30))
        x = x * np.uint64(_M1)
        x = x ^ (x >> np.uint64(27))
        x = x * np.uint64(_M2)
        return x ^ (x >> np.uint64(31))

    @numba.njit(cache=True)
    def _wl3_hash_nb(g1, g2, g3):
        # g1[b, c, w], g2[a, c, w], g3[a, b, w] hold table values, contiguous in w
        n = g1.shape[0]
        s1 = np.zeros(n * n * n, dtype=np.uint64)
        s2 = np.zeros(n * n * n, dtype=np.uint64)
        k2 = np.uint64(_SALT_2)
        sh = np.uint64(29)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    acc1 = np.uint64(0)
                    acc2 = np.uint64(0)
                    for w in range(n):
                        h = _mix_nb(g1[b, c, w] + g2[a, c, w] + g3[a, b, w])
                        acc1 += h
                        acc2 += (h ^ (h >> sh)) * k2
                    t = (a * n + b) * n + c
                    s1[t] = acc1
                    s2[t] = acc2
        return s1, s2

    @numba.njit(cache=True)
    def _signature_nb(colors, m, t, xo, yo):
        n = colors.shape[0]
        a = t // (n * n)
        b = (t // n) % n
        c = t % n
        x = np.empty(n, dtype=np.int64)
        yz = np.empty(n, dtype=np.int64)
        for w in range(n):
            x[w] = colors[w, b, c]
            yz[w] = colors[a, w, c] * m + colors[a, b, w]
        o1 = np.argsort(yz, kind="mergesort")
        x1 = x[o1]
        y1 = yz[o1]
        o2 = np.argsort(x1, kind="mergesort")
        for w in range(n):
            xo[w] = x1[o2[w]]
            yo[w] = y1[o2[w]]

    @numba.njit(cache=True)
    def _wl3_verify_nb(colors, m, order, leader):
        n = colors.shape[0]
        bad = np.empty(len(order), dtype=np.int64)
        nbad = 0
        xl = np.empty(n, dtype=np.int64)
        yl = np.empty(n, dtype=np.int64)
        xs = np.empty(n, dtype=np.int64)
        ys = np.empty(n, dtype=np.int64)
        current = -1
        for i in range(len(order)):
            t = order[i]
            lead = leader[i]
            if t == lead:
                continue
            if lead != current:
                _signature_nb(colors, m, lead, xl, yl)
                current = lead
            _signature_nb(colors, m, t, xs, ys)
            for w in range(n):
                if xs[w] != xl[w] or ys[w] != yl[w]:
                    bad[nbad] = t
                    nbad += 1
                    break
        return bad[:nbad]

    def wl3_hash_numba(colors):
        c = np.asarray(colors, dtype=np.int64)
        t1, t2, t3 = _tables(c)
        g1 = np.ascontiguousarray(t1[c].transpose(1, 2, 0))
        g2 = np.ascontiguousarray(t2[c].transpose(0, 2, 1))
        g3 = np.ascontiguousarray(t3[c])
        return _wl3_hash_nb(g1, g2, g3)

    def wl3_verify_numba(colors, m, order, leader):
        return _wl3_verify_nb(
            np.ascontiguousarray(colors, dtype=np.int64),
            np.int64(m),
            np.ascontiguousarray(order, dtype=np.int64),
            np.ascontiguousarray(leader, dtype=np.int64),
        )

else:  # pragma: no cover
    wl3_hash_numba = None
    wl3_verify_numba = None


def wl3_hash(colors):
    if USE_NUMBA:
        return wl3_hash_numba(colors)
    return wl3_hash_numpy(colors)


def wl3_verify(colors, m, order, leader):
    if USE_NUMBA:
        return wl3_verify_numba(colors, m, order, leader)
    return wl3_verify_numpy(colors, m, order, leader)
