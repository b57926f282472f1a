"""Time the numba and numpy RK4 backends on the same oracle workload.

    python benchmarks/bench_kernels.py [--points N] [--t-max PS]

Both backends integrate the paper parameter set (g1 = 0.3 THz) over a
detuning grid; the numba timing excludes the first (compiling) call.
"""

import argparse
import math
import time

import numpy as np

from dit import _kernels
from dit.oracle import _rates, stability_dt
from dit.params import paper_defaults


def workload(points, t_max):
    p = paper_defaults()
    grid = np.linspace(-1, 1, points)
    cav, dip = _rates(p, grid, 0j)
    drive = np.full(points, -math.sqrt(p.gamma) * 0.01, dtype=np.complex128)
    dt = min(stability_dt(p, x) for x in grid)
    window = math.ceil(1 / (p.gamma + p.kappa) / dt)
    return cav, dip, p.g1, drive, dt, window, math.ceil(t_max / dt), 1e-11


def timed(fn, args, repeat=3):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--t-max", type=float, default=200.0, help="integration horizon in ps")
    args = ap.parse_args()
    work = workload(args.points, args.t_max)
    steps = work[6]
    print(f"{args.points} points x {steps} RK4 steps (dt = {work[4]:.3e} ps)")

    t_np, r_np = timed(_kernels.numpy_steady, work, repeat=1)
    print(f"numpy : {t_np:8.3f} s  ({t_np / (steps * args.points) * 1e9:7.1f} ns/point-step)")
    if _kernels.HAS_NUMBA:
        t0 = time.perf_counter()
        _kernels.numba_steady(*work[:6], 1, work[7])
        print(f"numba compile: {time.perf_counter() - t0:.2f} s")
        t_nb, r_nb = timed(_kernels.numba_steady, work)
        print(f"numba : {t_nb:8.3f} s  ({t_nb / (steps * args.points) * 1e9:7.1f} ns/point-step)")
        print(f"speedup {t_np / t_nb:.1f}x, max |b_numba - b_numpy| = {np.max(np.abs(r_nb[0] - r_np[0])):.2e}")
    else:
        print("numba not installed")


if __name__ == "__main__":
    main()
