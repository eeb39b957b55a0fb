"""Compare the numba and pure-numpy kernel paths.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels (multi-start Newton for one target, a batch of
RK4 trajectories, the table1 preset end to end) on both backends and
prints a small table. The numba column is skipped when numba is disabled
(NILGEO_DISABLE_NUMBA=1) or missing.
"""

import argparse
import time

import numpy as np

from nilgeo import kernels
from nilgeo._accel import HAVE_NUMBA
from nilgeo.bvp import DEFAULT_CONFIG
from nilgeo.triangles import preset_scan


def best_of(fn, repeat):
    fn()  # warm-up (jit compile / caches)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def newton_case(backend):
    cfg = DEFAULT_CONFIG
    a0, t0 = cfg.start_grid()
    target = np.array([0.5, 3.0, 0.0])
    s0 = np.full(a0.shape, np.linalg.norm(target))
    return lambda: kernels.newton_starts(target, a0, t0, s0, cfg.tol, cfg.max_iter,
                                         cfg.fd_step, 4 * s0[0], backend=backend)


def rk4_case(backend):
    rng = np.random.default_rng(0)
    states = np.column_stack([np.zeros((64, 3)), rng.normal(size=(64, 3))])
    return lambda: kernels.rk4(states, 1e-3, 3000, 100, backend=backend)


def table_case(backend):
    return lambda: preset_scan("table1", backend=backend)


CASES = [
    ("newton, 408 starts", newton_case),
    ("rk4, 64 x 3000 steps", rk4_case),
    ("table1 preset", table_case),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    print(f"{'kernel':<24}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    for label, make in CASES:
        t = {b: best_of(make(b), args.repeat) for b in backends}
        cols = "".join(f"{t[b] * 1e3:>10.2f}ms" for b in backends)
        ratio = f"{t['numpy'] / t['numba']:>10.1f}x" if HAVE_NUMBA else ""
        print(f"{label:<24}{cols}  {ratio}")


if __name__ == "__main__":
    main()
