#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Each kernel is checked for agreement first, then timed best-of-N on the
same inputs. Run from the repository root:

    python3 benchmarks/bench_backends.py --rows 200000 --repeat 5
"""

import argparse
import time

import numpy as np

from roughrisk.accel import get_backend


def best_of(fn, args, repeat):
    fn(*args)  # warm any JIT path
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def workloads(rows, rng):
    keys = rng.integers(0, rows // 4 + 1, size=rows).astype(np.int64)
    n_groups = int(keys.max()) + 1
    dec = rng.integers(0, 3, size=rows).astype(np.int64)

    cont = rng.integers(0, 50, size=(n_groups, 3)).astype(np.int64)
    max_tot = int(cont.sum(axis=1).max())
    thresholds = np.array([-(-4 * t // 5) for t in range(max_tot + 1)],
                          dtype=np.int64)

    samples = rng.integers(0, 8, size=(rows // 50, 9)).astype(np.int64)
    ants = rng.integers(0, 8, size=(600, 9)).astype(np.int64)
    eps = rng.random(9)
    eps /= eps.sum()
    widths = rng.integers(1, 8, size=9).astype(np.int64)

    return (
        ("factorize1d", (keys,)),
        ("contingency", (keys, n_groups, dec, 3)),
        ("quality_numerator", (cont, thresholds)),
        ("similarity_matrix", (samples, ants, eps, widths)),
    )


def agree(a, b):
    if isinstance(a, tuple):
        return all(agree(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return a.shape == b.shape and bool((a == b).all())
    return a == b


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=200_000,
                        help="synthetic universe size (default 200000)")
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions, best is kept (default 5)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    np_impl = get_backend("numpy")
    try:
        nb_impl = get_backend("numba")
    except ImportError:
        parser.error("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    print(f"rows={args.rows} repeat={args.repeat} seed={args.seed}")
    print(f"{'kernel':<20}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, work in workloads(args.rows, rng):
        f_np = getattr(np_impl, name)
        f_nb = getattr(nb_impl, name)
        if not agree(f_np(*work), f_nb(*work)):
            raise SystemExit(f"{name}: backends disagree, refusing to time")
        t_np = best_of(f_np, work, args.repeat)
        t_nb = best_of(f_nb, work, args.repeat)
        print(f"{name:<20}{1e3 * t_np:>10.3f}{1e3 * t_nb:>10.3f}"
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
