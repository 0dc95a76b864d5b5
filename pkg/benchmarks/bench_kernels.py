"""Numba vs numpy timings for the 3-WL kernels, plus an end-to-end 3-WL run.

Usage: python3 benchmarks/bench_kernels.py [--sizes 40,80,120] [--repeat 3] [--seed 0]

The end-to-end run uses whichever path TOPISO_DISABLE_NUMBA selects; run it
twice (with and without the flag) to compare whole refinements.
"""

import argparse
import time

import numpy as np

from topiso import _accel
from topiso.generators import generate
from topiso.refinement import atomic_type, wl, wl3_round_exact


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def kernel_rows(n, repeat, seed):
    g = generate(f"random_max_degree({n},3)", seed)
    colors = wl3_round_exact(atomic_type(g, 3))
    m = int(colors.max()) + 1
    rows = []
    t_np, h_np = best_of(lambda: _accel.wl3_hash_numpy(colors), repeat)
    row = {"n": n, "kernel": "hash", "numpy": t_np, "numba": None, "equal": None}
    if _accel.HAVE_NUMBA:
        _accel.wl3_hash_numba(colors)  # compile
        t_nb, h_nb = best_of(lambda: _accel.wl3_hash_numba(colors), repeat)
        row.update(numba=t_nb, equal=all(np.array_equal(a, b) for a, b in zip(h_np, h_nb)))
    rows.append(row)

    flat = colors.reshape(-1)
    order = np.argsort(flat, kind="stable")
    first = np.r_[True, flat[order][1:] != flat[order][:-1]]
    leader = order[np.maximum.accumulate(np.where(first, np.arange(order.size), 0))]
    t_np, b_np = best_of(lambda: _accel.wl3_verify_numpy(colors, m, order, leader), repeat)
    row = {"n": n, "kernel": "verify", "numpy": t_np, "numba": None, "equal": None}
    if _accel.HAVE_NUMBA:
        _accel.wl3_verify_numba(colors, m, order, leader)
        t_nb, b_nb = best_of(lambda: _accel.wl3_verify_numba(colors, m, order, leader), repeat)
        row.update(numba=t_nb, equal=sorted(b_np.tolist()) == sorted(b_nb.tolist()))
    rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="40,80,120")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"numba available: {_accel.HAVE_NUMBA}, selected path: {'numba' if _accel.USE_NUMBA else 'numpy'}")
    print(f"{'n':>5} {'kernel':>8} {'numpy s':>10} {'numba s':>10} {'speedup':>8} {'equal':>6}")
    for n in sizes:
        for r in kernel_rows(n, args.repeat, args.seed):
            nb = r["numba"]
            speed = f"{r['numpy'] / nb:8.1f}" if nb else f"{'-':>8}"
            nbs = f"{nb:10.4f}" if nb is not None else f"{'-':>10}"
            print(f"{r['n']:>5} {r['kernel']:>8} {r['numpy']:10.4f} {nbs} {speed} {str(r['equal']):>6}")

    print("\nend-to-end 3-WL on the selected path")
    for n in sizes:
        g = generate(f"random_max_degree({n},3)", args.seed)
        wl(g, 3)  # warm up
        t, c = best_of(lambda: wl(g, 3), 1)
        print(f"{n:>5} {t:10.3f} s  {c.num_colors} colors")


if __name__ == "__main__":
    main()
