"""Timing comparison of the compiled and pure-Python jet kernels.

Usage: python3 benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from walkergeom import _jetcore_py
from walkergeom.expr import EPS_DEN, parse_field
from walkergeom.jets import _compile, active_backend

try:
    from walkergeom import _jetcore
except ImportError:
    _jetcore = None

FIELDS = {
    "cubic": "0.5*x1^3 - 2*x2*x3 + x4^2 - 1.25",
    "warped": "x1*(-2*lin_inv(1.0, 1.0, 1.0)) + x2*(-2*lin_inv(1.0, 1.0, 1.0))",
    "transcendental": "exp(sin(x3) - 0.5*cos(x1*x2)) + log(4 + x3^2 + x4^2)",
}


def time_kernel(kernel, prog, points, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        for pt in points:
            kernel.eval_program(prog.code, prog.consts, pt, EPS_DEN)
        best = min(best, time.perf_counter() - start)
    return best / len(points)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--points", type=int, default=2000)
    args = ap.parse_args()

    rng = np.random.Generator(np.random.Philox(0))
    points = [np.ascontiguousarray(p) for p in rng.uniform(-1, 1, (args.points, 4))]

    print(f"active backend: {active_backend()}")
    print(f"{'field':16s} {'python':>12s} {'cython':>12s} {'speedup':>9s}")
    for name, src in FIELDS.items():
        prog = _compile(parse_field(src), 4)
        t_py = time_kernel(_jetcore_py, prog, points, args.repeats)
        if _jetcore is None:
            print(f"{name:16s} {t_py * 1e6:10.2f}us {'n/a':>12s} {'n/a':>9s}")
            continue
        t_cy = time_kernel(_jetcore, prog, points, args.repeats)
        print(f"{name:16s} {t_py * 1e6:10.2f}us {t_cy * 1e6:10.2f}us "
              f"{t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
