"""Compare the compiled batch core against the pure-numpy fallback.

Run:  python3 benchmarks/bench_backends.py [--points 2000 --atoms 500]
"""

import argparse
import time

import numpy as np

from hsgrowth.core import _pure
from hsgrowth.kernels import KernelConstants

try:
    from hsgrowth.core import _native
except ImportError:
    _native = None


def make_inputs(rng, n_points, n_atoms, dim=3):
    atoms = np.column_stack([rng.uniform(-20, 20, (n_atoms, dim - 1)),
                             rng.uniform(0.1, 20, (n_atoms, 1))])
    masses = rng.uniform(0.01, 1.0, n_atoms)
    points = np.column_stack([rng.uniform(-40, 40, (n_points, dim - 1)),
                              rng.uniform(0.1, 40, (n_points, 1))])
    return points, atoms, masses


def bench(fn, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=2000)
    parser.add_argument("--atoms", type=int, default=500)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    points, atoms, masses = make_inputs(rng, args.points, args.atoms)
    r_const = KernelConstants.for_dim(points.shape[1]).r_const

    print(f"points={args.points} atoms={args.atoms} "
          f"(best of {args.repeats})")
    jobs = [
        ("green_potential_batch",
         lambda impl: impl.green_potential_batch(points, atoms, masses,
                                                 r_const)),
        ("maximal_batch (beta=5)",
         lambda impl: impl.maximal_batch(points, atoms, masses, 5.0)),
    ]
    for name, job in jobs:
        t_pure, ref = bench(lambda: job(_pure), args.repeats)
        line = f"{name:24s} pure: {t_pure * 1e3:8.2f} ms"
        if _native is not None:
            t_nat, out = bench(lambda: job(_native), args.repeats)
            err = float(np.max(np.abs(out - ref)
                               / np.maximum(np.abs(ref), 1e-300)))
            line += (f"   native: {t_nat * 1e3:8.2f} ms"
                     f"   speedup: {t_pure / t_nat:5.2f}x"
                     f"   max rel diff: {err:.2e}")
        else:
            line += "   (compiled extension unavailable)"
        print(line)


if __name__ == "__main__":
    main()
