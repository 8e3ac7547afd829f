"""Time the compiled kernels against the numpy fallback.

Runs the full-series walk kernel (linear and nonlinear) and the loop
kernel on both backends and prints per-step costs plus the speedup.

    python benchmarks/kernel_benchmark.py --sites 4003 --steps 2000
"""

import argparse
import math
import time

import numpy as np

from nlqw import _pykernels
from nlqw.state import init_symmetric

try:
    from nlqw import _kernels
except ImportError:
    _kernels = None


def time_walk_series(kernels, sites, steps, chi, repeats):
    cos_t = math.cos(math.pi / 4)
    sin_t = math.sin(math.pi / 4)
    best = float("inf")
    for _ in range(repeats):
        st = init_symmetric(sites)
        xi = np.empty(steps + 1)
        sp = np.empty(steps + 1)
        start = time.perf_counter()
        kernels.walk_series(st.up, st.down, steps, cos_t, sin_t,
                            1.0, 0.0, chi, True, True, st.n0, xi, sp)
        best = min(best, time.perf_counter() - start)
    return best


def time_loop_series(kernels, sites, steps, gamma, repeats):
    best = float("inf")
    for _ in range(repeats):
        u = np.zeros(sites, dtype=np.complex128)
        v = np.zeros(sites, dtype=np.complex128)
        n0 = sites // 2
        u[n0] = 1 / math.sqrt(2)
        v[n0] = 1j / math.sqrt(2)
        xi = np.empty(steps + 1)
        sp = np.empty(steps + 1)
        start = time.perf_counter()
        kernels.loop_series(u, v, steps, gamma, n0, xi, sp)
        best = min(best, time.perf_counter() - start)
    return best


CASES = [
    ("walk linear (chi=0)", time_walk_series, dict(chi=0.0)),
    ("walk nonlinear (chi=0.4)", time_walk_series, dict(chi=0.4)),
    ("loop nonlinear (gamma=1)", time_loop_series, dict(gamma=1.0)),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sites", type=int, default=4003)
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=3,
                        help="take the best of this many runs (default 3)")
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not importable; timing the fallback only")

    print(f"sites={args.sites} steps={args.steps} best-of-{args.repeats}")
    header = f"{'case':<28}{'python':>12}{'c':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, runner, kwargs in CASES:
        py = runner(_pykernels, args.sites, args.steps, repeats=args.repeats,
                    **kwargs)
        if _kernels is not None:
            cc = runner(_kernels, args.sites, args.steps,
                        repeats=args.repeats, **kwargs)
            print(f"{name:<28}{py:>11.3f}s{cc:>11.3f}s{py / cc:>9.1f}x")
        else:
            print(f"{name:<28}{py:>11.3f}s{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
