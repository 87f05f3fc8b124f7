"""Time the compiled and pure-Python divider kernels on the full x range.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from nsdiv import kernels
from nsdiv.divider import DividerConfig, divide_batch


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    xs = np.arange(1, 2**16, dtype=np.int64)
    print(f"{xs.size} divisions per call, best of {args.repeat}")
    if kernels.compiled is None:
        print("compiled kernel not built; only the Python fallback is timed")
    for degree in (2, 4):
        cfg = DividerConfig(degree=degree)
        row = {}
        for name, mod in (("python", kernels.python), ("cython", kernels.compiled)):
            if mod is None:
                continue
            row[name] = best_of(lambda: divide_batch(xs, 1 << 16, cfg, backend=mod), args.repeat)
        line = "  ".join(f"{k} {v * 1e3:8.2f} ms" for k, v in row.items())
        if len(row) == 2:
            line += f"  speedup {row['python'] / row['cython']:.0f}x"
        print(f"degree {degree}: {line}")


if __name__ == "__main__":
    main()
