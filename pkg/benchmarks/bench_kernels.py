"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row also checks that both backends return identical results.
"""

import argparse
import timeit

import numpy as np

from seisrumble import _kernels_py as py

try:
    from seisrumble import _kernels as cy
except ImportError:  # extension not built
    cy = None


def cases(rng):
    sos = np.array([[0.1, 0.2, 0.1, 1.0, -0.9, 0.3], [1.0, 0.0, -1.0, 1.0, -1.2, 0.5],
                    [1.0, 0.0, -1.0, 1.0, 0.4, 0.2]])
    x = rng.normal(size=2850 * 40)
    s = rng.normal(size=(48, 65))
    t = tuple(np.percentile(s, [25, 50, 75]))
    a, d, b = rng.random((3, 480, 650))
    X = rng.normal(size=(200, 12))
    y = rng.integers(0, 2, 200)
    return {
        "sosfilt (3 biquads, 114k samples)": lambda k: k.sosfilt(sos, x),
        "threshold_adjust (48x65)": lambda k: k.threshold_adjust(s, *t, (5.0, 2.0, -2.0, -5.0)),
        "tensor_eigenvalues (480x650)": lambda k: k.tensor_eigenvalues(a, d, b),
        "coherence (480x650)": lambda k: k.coherence(a, d, 1e-12),
        "best_split (200x12)": lambda k: k.best_split(X, y),
    }


def _same(u, v):
    if isinstance(u, tuple):
        return all(_same(p, q) for p, q in zip(u, v))
    return np.array_equal(u, v)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}  identical")
    for name, fn in cases(rng).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:38s} {t_py:10.2f} {'n/a':>10s}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        same = _same(fn(py), fn(cy))
        print(f"{name:38s} {t_py:10.2f} {t_cy:10.2f} {t_py / t_cy:7.1f}x  {same}")


if __name__ == "__main__":
    main()
