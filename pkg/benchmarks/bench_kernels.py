"""Time the Monte Carlo kernels under numba and numpy.

    python3 benchmarks/bench_kernels.py [--size 200000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from walk_induction import _kernels
from walk_induction.config import bundled
from walk_induction.sampling import StepSampler


def _best(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    model, mu, action = bundled("f2_s3_index3").build()
    s = StepSampler(mu, action)
    rng = np.random.default_rng(0)
    backends = {"numpy": (_kernels.first_return_numpy, _kernels.reduce_paths_numpy)}
    if _kernels.HAVE_NUMBA:
        backends["numba"] = (_kernels.first_return_numba, _kernels.reduce_paths_numba)

    incr = s.draw(rng, (args.size, 40)).astype(np.int32)
    steps = rng.integers(0, 41, size=args.size).astype(np.int32)
    coset_step = s.coset_step
    start = np.zeros(args.size, dtype=np.int32)
    print(f"{'kernel':<14}{'backend':<8}{'seconds':>10}")
    for name, (first_return, reduce_paths) in backends.items():
        t = _best(lambda: first_return(coset_step, start, incr), args.repeat)
        print(f"{'first_return':<14}{name:<8}{t:>10.4f}")
        t = _best(lambda: reduce_paths(incr, steps, s.inc_letters, s.inc_len), args.repeat)
        print(f"{'reduce_paths':<14}{name:<8}{t:>10.4f}")


if __name__ == "__main__":
    main()
