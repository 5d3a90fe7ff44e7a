"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--T 2000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from fastoopsi import kernels
from fastoopsi.model import SimConfig, simulate
from fastoopsi.oopsi import map_estimate, run
from fastoopsi.preprocess import preprocess


def cases(T):
    rng = np.random.default_rng(0)
    n = rng.poisson(0.1, T).astype(float)
    diag = 2.0 + rng.random(T)
    off = -rng.random(T - 1)
    rhs = rng.normal(size=T)
    _, _, F = simulate(SimConfig(T=T, seed=0))
    Fp, P = preprocess(F)
    return {
        "ar1_filter": lambda: kernels.ar1_filter(n, 0.98),
        "tridiag_solve": lambda: kernels.tridiag_solve(off, diag, off, rhs),
        "map_estimate": lambda: map_estimate(Fp, P),
        "run": lambda: run(F),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = kernels.available_backends()
    previous = kernels.get_backend()
    timings = {}
    try:
        for name in backends:
            kernels.set_backend(name)
            for case, fn in cases(args.T).items():
                number = 1 if case in ("map_estimate", "run") else 20
                best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
                timings[case, name] = best
    finally:
        kernels.set_backend(previous)

    print(f"T={args.T}, best of {args.repeat}, seconds per call")
    print(f"{'case':<15}" + "".join(f"{b:>12}" for b in backends) +
          ("     speedup" if len(backends) > 1 else ""))
    for case in cases(args.T):
        row = f"{case:<15}" + "".join(f"{timings[case, b]:>12.3g}" for b in backends)
        if "python" in backends and len(backends) > 1:
            fast = [b for b in backends if b != "python"][0]
            row += f"{timings[case, 'python'] / timings[case, fast]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
