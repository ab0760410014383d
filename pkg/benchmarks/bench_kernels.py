"""Benchmark: compiled kernels vs the numpy fallback.

Usage: python benchmarks/bench_kernels.py [n_paths] [n_steps]
"""

import sys
import time

import numpy as np

from warbench._kernels import compiled, fallback


def bench(fn, args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    n_paths = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    n_steps = int(sys.argv[2]) if len(sys.argv) > 2 else 20
    rng = np.random.default_rng(0)
    shocks = (rng.random((n_paths, n_steps, 2)) < 0.5).astype(np.uint8)

    real_args = (100.0, 80.0, 0.08, 0.1, 0.7, 1.0, shocks)
    cstep_args = (100.0, 80.0, 0.08, 0.1, 0.7, 1e-20, 1.0, shocks)

    rows = [("kernel", "backend", "best of 5", "paths/s")]
    for name, args, attr in (
        ("terminal (clamped)", real_args, "propagate_terminal"),
        ("terminal (complex-step)", cstep_args, "propagate_terminal_cstep"),
    ):
        times = {}
        for backend_name, module in (("fallback", fallback), ("compiled", compiled)):
            if module is None:
                continue
            t = bench(getattr(module, attr), args)
            times[backend_name] = t
            rows.append((name, backend_name, f"{t * 1e3:8.2f} ms", f"{n_paths / t:12.3e}"))
        if "compiled" in times:
            rows.append(
                (name, "speedup", f"{times['fallback'] / times['compiled']:8.2f}x", "")
            )

    print(f"\n{n_paths} paths x {n_steps} steps")
    widths = [max(len(str(r[i])) for r in rows) for i in range(4)]
    for row in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
    if compiled is None:
        print("\ncompiled extension not built; showing fallback only")


if __name__ == "__main__":
    main()
