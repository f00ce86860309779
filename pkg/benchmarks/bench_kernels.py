"""Time the Ward.D2 kernel: compiled vs numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 100 500 1000 2432] [--repeat 3]

Also checks that both kernels return bit-identical trees on every input.
"""

import argparse
import time

import numpy as np

from cedagof import _backend
from cedagof.hcluster import euclidean_distances


def bench(kernel, sq, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kernel(sq)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 500, 1000, 2432])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernel not available; timing the fallback only")
    rng = np.random.default_rng(args.seed)
    print(f"{'M':>6} {'data':>10} " + " ".join(f"{b + ' (s)':>14}" for b in backends) + f" {'speedup':>8} {'identical':>9}")
    for M in args.sizes:
        for kind, x in (("normal", rng.normal(size=M)), ("rounded", np.round(rng.normal(95, 1.4, size=M), 1))):
            sq = euclidean_distances(x).squared
            times, outs = [], []
            for b in backends:
                t, o = bench(_backend.get_kernels(b), sq, args.repeat)
                times.append(t)
                outs.append(o)
            same = all(all(np.array_equal(a, b) for a, b in zip(outs[0], o)) for o in outs[1:])
            speed = f"{times[0] / times[-1]:8.1f}" if len(times) > 1 else f"{'-':>8}"
            print(f"{M:>6} {kind:>10} " + " ".join(f"{t:14.4f}" for t in times) + f" {speed} {str(same):>9}")


if __name__ == "__main__":
    main()
