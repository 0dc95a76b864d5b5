"""Color Refinement and the 2- and 3-dimensional Weisfeiler-Leman algorithm.

Colors are always dense integers ``0..m-1``.  After every round the new
colors are ranks of the round signatures.  For CR and 2-WL the signature
starts with the old color and ranks are lexicographic; 3-WL ranks follow a
hash key of (old color, signature).  Either way color ids are a canonical
function of the input: isomorphic inputs receive identical color ids on
corresponding tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _accel
from .graph import ColoredGraph

DEFAULT_K3_CAP = 512


@dataclass
class TupleColoring:
    """A coloring of k-tuples, stored as an array of shape ``(n,) * k``."""

    k: int
    n: int
    colors: np.ndarray
    round_history: int = 0

    @property
    def num_colors(self) -> int:
        return int(self.colors.max()) + 1 if self.colors.size else 0

    def __call__(self, *tup: int) -> int:
        return int(self.colors[tup])

    def classes(self) -> list[list[tuple]]:
        """Color classes in ascending color order; members as k-tuples."""
        flat = self.colors.reshape(-1)
        out = [[] for _ in range(self.num_colors)]
        for idx in range(flat.size):
            out[flat[idx]].append(np.unravel_index(idx, self.colors.shape))
        return [[tuple(int(x) for x in t) for t in cls] for cls in out]

    def vertex_classes(self) -> list[list[int]]:
        if self.k != 1:
            raise ValueError("vertex classes need a 1-dimensional coloring")
        out = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.colors.tolist()):
            out[c].append(v)
        return out

    def class_sizes(self) -> list[int]:
        return np.bincount(self.colors.reshape(-1), minlength=self.num_colors).tolist()

    def export_lines(self) -> list[str]:
        lines = []
        for idx in product(range(self.n), repeat=self.k):
            lines.append("tuple " + " ".join(map(str, idx)) + f" {int(self.colors[idx])}")
        return lines


# ------------------------------------------------------------------ ranking

def dense_ranks(*keys: np.ndarray) -> np.ndarray:
    """Lexicographic dense ranks of the key tuples ``(keys[0][i], keys[1][i], ...)``."""
    shape = keys[0].shape
    flat = [np.asarray(k).reshape(-1) for k in keys]
    size = flat[0].size
    if size == 0:
        return np.zeros(shape, dtype=np.int64)
    order = np.lexsort(flat[::-1])
    change = np.zeros(size, dtype=bool)
    for k in flat:
        s = k[order]
        change[1:] |= s[1:] != s[:-1]
    ranks_sorted = np.cumsum(change)
    out = np.empty(size, dtype=np.int64)
    out[order] = ranks_sorted
    return out.reshape(shape)


def _row_ranks(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def normalize(colors: Sequence[int]) -> np.ndarray:
    """Dense ranks of arbitrary integer colors, preserving their order."""
    return dense_ranks(np.asarray(colors, dtype=np.int64))


def num_classes(colors: np.ndarray) -> int:
    return len(np.unique(colors)) if np.size(colors) else 0


# ---------------------------------------------------------- color refinement

def cr_round(arcs: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """One Color Refinement round on a dense arc matrix (0 = no edge)."""
    n = colors.shape[0]
    if n == 0:
        return colors.copy()
    base = int(arcs.max()) + 1
    codes = (colors[None, :] * base + arcs) * base + arcs.T
    codes = np.where(arcs > 0, codes, -1)
    codes.sort(axis=1)
    return _row_ranks(np.hstack([colors[:, None], codes]))


def refine_arcs(arcs: np.ndarray, colors: np.ndarray, max_rounds: int | None = None):
    """Color Refinement to the stable coloring; returns ``(colors, rounds)``."""
    colors = normalize(colors)
    count = num_classes(colors)
    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        new = cr_round(arcs, colors)
        new_count = num_classes(new)
        if new_count == count:
            break
        colors, count = new, new_count
        rounds += 1
    return colors, rounds


def _vertex_color_ranks(g: ColoredGraph) -> np.ndarray:
    # vertex colors may exceed 64 bits, so rank them in Python first
    ranks = {c: i for i, c in enumerate(sorted(set(g.vertex_coloring)))}
    return np.array([ranks[c] for c in g.vertex_coloring], dtype=np.int64)


def initial_vertex_colors(g: ColoredGraph) -> np.ndarray:
    diag = np.array([g.pair_color(v, v) for v in range(g.n)], dtype=np.int64)
    return dense_ranks(_vertex_color_ranks(g), diag)


def color_refine(g: ColoredGraph, init: Sequence[int] | None = None) -> TupleColoring:
    """Stable Color Refinement coloring of ``g`` (vertex and arc colors)."""
    start = initial_vertex_colors(g) if init is None else np.asarray(init, dtype=np.int64)
    colors, rounds = refine_arcs(g.arc_matrix(), start)
    return TupleColoring(1, g.n, colors, rounds)


def individualize(colors: Sequence[int], v: int | Iterable[int]) -> np.ndarray:
    """Give each vertex in ``v`` a fresh singleton color above all others.

    Several vertices receive distinct fresh colors ordered by vertex id.
    """
    colors = np.asarray(colors, dtype=np.int64)
    vs = [v] if np.isscalar(v) else sorted(set(v))
    flag = np.zeros(colors.shape[0], dtype=np.int64)
    for i, x in enumerate(vs):
        if not 0 <= x < colors.shape[0]:
            raise ValueError(f"vertex {x} out of range")
        flag[x] = i + 1
    return dense_ranks(flag, np.where(flag > 0, 0, colors))


# ------------------------------------------------------- initial WL colors

def pair_type(g: ColoredGraph) -> np.ndarray:
    """Isomorphism type of each ordered pair, as dense ranks on an n x n array."""
    n = g.n
    vc = _vertex_color_ranks(g)
    arcs = g.arc_matrix()
    pc = g.pair_matrix()
    diag = np.diag(pc)
    eye = np.eye(n, dtype=np.int64)
    feats = [
        eye,
        vc[:, None] + 0 * eye,
        vc[None, :] + 0 * eye,
        diag[:, None] + 0 * eye,
        diag[None, :] + 0 * eye,
        arcs,
        arcs.T,
        pc,
        pc.T,
    ]
    return dense_ranks(*feats)


def atomic_type(g: ColoredGraph, k: int) -> np.ndarray:
    if k == 1:
        return initial_vertex_colors(g)
    t2 = pair_type(g)
    if k == 2:
        return t2
    if k == 3:
        n = g.n
        if n == 0:
            return np.zeros((0, 0, 0), dtype=np.int64)
        m2 = int(t2.max()) + 1
        code = (t2[:, :, None] * m2 + t2[:, None, :]) * m2 + t2[None, :, :]
        return normalize(code)
    raise ValueError("k must be 1, 2 or 3")


# ------------------------------------------------------------- WL rounds

def wl2_round(colors: np.ndarray) -> np.ndarray:
    """One exact 2-WL round: signature of (v,w) is the multiset over u of
    (C[u,w], C[v,u])."""
    n = colors.shape[0]
    if n == 0:
        return colors.copy()
    m = int(colors.max()) + 1
    sig = colors.T[None, :, :] * m + colors[:, None, :]  # [v, w, u]
    sig = np.sort(sig, axis=2).reshape(n * n, n)
    rows = np.hstack([colors.reshape(-1, 1), sig])
    return _row_ranks(rows).reshape(n, n)


def wl3_round_exact(colors: np.ndarray, block: int = 8192) -> np.ndarray:
    """One exact 3-WL round with lexicographically ordered signatures."""
    n = colors.shape[0]
    if n == 0:
        return colors.copy()
    m = int(colors.max()) + 1
    total = n ** 3
    rows = np.empty((total, 2 * n + 1), dtype=np.int64)
    rows[:, 0] = colors.reshape(-1)
    for start in range(0, total, block):
        idx = np.arange(start, min(total, start + block), dtype=np.int64)
        xs, ys = _accel._signatures_np(colors, m, idx)
        rows[idx, 1:n + 1] = xs
        rows[idx, n + 1:] = ys
    return _row_ranks(rows).reshape(n, n, n)


def _group_leaders(keys_sorted_change: np.ndarray, order: np.ndarray) -> np.ndarray:
    starts = np.flatnonzero(np.concatenate([[True], keys_sorted_change]))
    lengths = np.diff(np.append(starts, order.size))
    return np.repeat(order[starts], lengths)


def _rank_hashed(old: np.ndarray, h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    """Dense ranks of ``(old, h1, h2)`` ordered by a single folded 64-bit key.

    Ties in the folded key are checked against all three components; if any
    tie group disagrees the exact three-key lexsort is used instead.
    """
    salt = np.asarray(old, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = h1 + _accel._mix_np(salt + np.uint64(0x632BE59BD9B4E019))
    order = np.argsort(key, kind="stable")
    ks = key[order]
    same = ks[1:] == ks[:-1]
    if same.any():
        os_, hs = old[order], h2[order]
        if np.any(same & ((os_[1:] != os_[:-1]) | (hs[1:] != hs[:-1]))):
            return dense_ranks(key, old, h2)
    ranks_sorted = np.concatenate([[0], np.cumsum(~same)])
    out = np.empty(key.size, dtype=np.int64)
    out[order] = ranks_sorted
    return out


def wl3_round_hashed(colors: np.ndarray, hasher: Callable | None = None) -> np.ndarray:
    """One 3-WL round using 128-bit multiset hashes.

    The hash is a deterministic function of the exact signature and the old
    color, so the new color ids remain canonical.  A collision can only merge
    classes; :func:`wl` detects and repairs that afterwards.
    """
    hasher = hasher or _accel.wl3_hash
    h1, h2 = hasher(colors)
    flat = colors.reshape(-1)
    if flat.size == 0:
        return colors.copy()
    return _rank_hashed(flat, np.asarray(h1, dtype=np.uint64), np.asarray(h2, dtype=np.uint64)).reshape(colors.shape)


def wl3_unstable_tuples(colors: np.ndarray) -> np.ndarray:
    """Flat indices of tuples whose exact signature differs from the first
    tuple of their color class; empty iff the coloring is 3-stable."""
    flat = colors.reshape(-1)
    order = np.argsort(flat, kind="stable").astype(np.int64)
    s = flat[order]
    leaders = _group_leaders(s[1:] != s[:-1], order)
    m = int(flat.max()) + 1 if flat.size else 1
    return _accel.wl3_verify(colors, m, order, leaders)


def _is_refinement_fixpoint(old: np.ndarray, new: np.ndarray) -> bool:
    # both arrays hold dense ranks, and ``new`` refines ``old``
    return int(new.max(initial=-1)) == int(old.max(initial=-1))


def wl(g: ColoredGraph, k: int, cap: int = DEFAULT_K3_CAP, hasher: Callable | None = None) -> TupleColoring:
    """Stable k-WL coloring for ``k`` in {1, 2, 3}."""
    if k == 1:
        return color_refine(g)
    if k not in (2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if k == 3 and g.n > cap:
        raise MemoryError(f"3-WL refused: n={g.n} exceeds cap {cap}")
    colors = atomic_type(g, k)
    rounds = 0
    if k == 2:
        while True:
            new = wl2_round(colors)
            if _is_refinement_fixpoint(colors, new):
                break
            colors, rounds = new, rounds + 1
        return TupleColoring(2, g.n, colors, rounds)
    while g.n:
        new = wl3_round_hashed(colors, hasher)
        if _is_refinement_fixpoint(colors, new):
            break
        colors, rounds = new, rounds + 1
    # A hash collision yields a coarser coloring; an exact check of the
    # fixpoint plus exact rounds from there recover the true stable coloring.
    while g.n and wl3_unstable_tuples(colors).size:
        colors = wl3_round_exact(colors)
        rounds += 1
    return TupleColoring(3, g.n, colors, rounds)


# ------------------------------------------------------- derived colorings

def project(c: TupleColoring, ell: int, prefix: int | None = None) -> TupleColoring:
    """Restrict a k-tuple coloring to ell-tuples by repeating the last entry.

    With ``prefix`` w the ell-tuple ``(v1..vl)`` reads ``c(w, v1, .., vl, .., vl)``.
    """
    k = c.k
    if prefix is None:
        if not 1 <= ell <= k:
            raise ValueError("need 1 <= ell <= k")
    elif not 1 <= ell < k:
        raise ValueError("need 1 <= ell < k with a prefix")
    n = c.n
    col = c.colors
    if prefix is not None:
        if not 0 <= prefix < n:
            raise ValueError("prefix vertex out of range")
        col = col[prefix]
        k -= 1
    idx = np.indices((n,) * ell)
    full = [idx[i] for i in range(ell)] + [idx[ell - 1]] * (k - ell)
    out = col[tuple(full)]
    return TupleColoring(ell, n, normalize(out), c.round_history)


def refines(c1: TupleColoring, c2: TupleColoring) -> bool:
    """True iff equal colors under ``c1`` imply equal colors under ``c2``."""
    if c1.k != c2.k or c1.n != c2.n:
        raise ValueError("colorings differ in dimension or vertex count")
    a = c1.colors.reshape(-1)
    b = c2.colors.reshape(-1)
    if a.size == 0:
        return True
    pairs = np.unique(np.stack([a, b], axis=1), axis=0)
    return len(pairs) == len(np.unique(a))


def same_partition(c1: TupleColoring, c2: TupleColoring) -> bool:
    return refines(c1, c2) and refines(c2, c1)


def is_stable(g: ColoredGraph, c: TupleColoring, individualized: Iterable[int] = ()) -> bool:
    """``c`` refines the initial coloring and survives one round unchanged.

    ``individualized`` marks vertices that get their own color in the initial
    coloring, as in the single-vertex individualization of (G, chi_w).
    """
    ind = list(individualized)
    init1 = initial_vertex_colors(g)
    if ind:
        flag = np.zeros(g.n, dtype=np.int64)
        flag[ind] = 1 + np.arange(len(ind))
        init1 = dense_ranks(flag, init1)
    if c.k == 1:
        init = TupleColoring(1, g.n, init1)
        new = cr_round(g.arc_matrix(), c.colors)
    else:
        base = atomic_type(g, c.k)
        if ind:
            # fold the vertex flag of every tuple position into the type
            flags = [np.zeros_like(base) for _ in range(c.k)]
            for i in range(c.k):
                shape = [1] * c.k
                shape[i] = g.n
                flags[i] = flags[i] + init1.reshape(shape)
            base = dense_ranks(base, *flags)
        init = TupleColoring(c.k, g.n, base)
        new = wl2_round(c.colors) if c.k == 2 else wl3_round_exact(c.colors)
    if not refines(c, init):
        return False
    return num_classes(new) == num_classes(c.colors)
