"""Time the numba kernels against their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--states 200 500 2000] [--repeat 5]

The numba column is missing when numba is not installed.
"""
import argparse
import timeit

import numpy as np

from autolearn import _kernels


def _cases(rng, n, k=2, n_words=2000, max_len=40):
    delta = rng.integers(0, n, size=(n, k)).astype(np.int64)
    accepting = rng.random(n) < 0.5
    lengths = rng.integers(0, max_len + 1, size=n_words).astype(np.int64)
    words = np.full((n_words, max_len), -1, dtype=np.int64)
    for i, m in enumerate(lengths):
        words[i, :m] = rng.integers(0, k, size=m)
    return {
        "run_batch": lambda impl: impl(delta, 0, words, lengths),
        "bfs_tree": lambda impl: impl(delta, 0),
        "moore_classes": lambda impl: impl(delta, accepting),
    }


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--states", type=int, nargs="+", default=[200, 1000, 5000])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<14} {'states':>7} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n in args.states:
        for name, call in _cases(rng, n).items():
            numpy_impl = getattr(_kernels, f"{name}_numpy")
            t_np = _best(lambda: call(numpy_impl), args.repeat)
            if _kernels.HAVE_NUMBA:
                numba_impl = getattr(_kernels, f"{name}_numba")
                call(numba_impl)  # compile outside the timed region
                t_nb = _best(lambda: call(numba_impl), args.repeat)
                print(f"{name:<14} {n:>7} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} {t_np / t_nb:>7.1f}x")
            else:
                print(f"{name:<14} {n:>7} {t_np * 1e3:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
