#!/usr/bin/env python3
"""Compare the numba and numpy adjacency kernels.

Times the double description method on support cones of a few perfect forms
with each backend and checks that both return the same rays. The backend can
also be fixed for a whole process with PERFECTFORMS_KERNELS=numba|numpy.
"""

import argparse
import time

from perfectforms import _kernels
from perfectforms.cones import CoordMap, double_description, support_cone
from perfectforms.lattices import a_form, d_form, e_form
from perfectforms.shortvec import minimum

CASES = {
    "A5": lambda: a_form(5),
    "D5": lambda: d_form(5),
    "E6": lambda: e_form(6),
}


def time_backend(rows, n, backend, repeats):
    best = None
    rays = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        rays = double_description(rows, n, backend=backend)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, rays


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--cases", nargs="+", default=list(CASES), choices=list(CASES))
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args(argv)

    backends = ["numpy"]
    if _kernels.NUMBA_AVAILABLE:
        backends.insert(0, "numba")
        # compile outside the timed region
        q = a_form(3)
        chart = CoordMap.full_space(3)
        double_description(support_cone(minimum(q), chart).h_rep, chart.n, backend="numba")
    else:
        print("numba not importable; timing the numpy backend only")

    print(f"{'case':>5}  {'rows':>5}  {'rays':>6}  " + "  ".join(f"{b + ' (s)':>11}" for b in backends)
          + ("  speedup" if len(backends) == 2 else ""))
    for name in args.cases:
        q = CASES[name]()
        chart = CoordMap.full_space(q.dim)
        rows = support_cone(minimum(q), chart).h_rep
        times, results = [], []
        for b in backends:
            t, rays = time_backend(rows, chart.n, b, args.repeats)
            times.append(t)
            results.append(rays)
        same = all(r == results[0] for r in results)
        line = f"{name:>5}  {len(rows):>5}  {len(results[0]):>6}  " + "  ".join(f"{t:>11.3f}" for t in times)
        if len(backends) == 2:
            line += f"  {times[1] / times[0]:>6.1f}x"
        print(line + ("" if same else "  MISMATCH"))
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
