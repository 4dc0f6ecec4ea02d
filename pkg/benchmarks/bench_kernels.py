"""Compare the compiled kernels against the numpy fallback.

Run from the repository root::

    python3 benchmarks/bench_kernels.py

Prints one row per (kernel, size) with the best-of-repeats wall time for
each backend and the speedup.  Works with the fallback alone if the
extension is not built.
"""

from __future__ import annotations

import time

import numpy as np

from orbitlab._kernels import _fallback

try:
    from orbitlab._kernels import _core
except ImportError:
    _core = None


def _best_of(fn, repeats=5):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def _cases():
    rng = np.random.default_rng(7)

    for dim, steps in ((4, 2000), (8, 2000), (16, 1000)):
        m = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / dim
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        yield (
            f"orbit_norms d={dim} n={steps}",
            lambda b, m=m, v=v, s=steps: b.orbit_norms(m, v, s, 1e-30, 1e30),
        )

    for dim, steps in ((4, 5000), (8, 5000)):
        m = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / dim
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        yield (
            f"orbit_points d={dim} n={steps}",
            lambda b, m=m, v=v, s=steps: b.orbit_points(m, v, s),
        )

    for n_targets, n_points, dim in ((300, 5000, 4), (600, 10000, 4)):
        targets = rng.standard_normal((n_targets, dim)) + 1j * rng.standard_normal(
            (n_targets, dim)
        )
        decay = 0.999 ** np.arange(n_points)[:, None]
        points = decay * (
            rng.standard_normal((n_points, dim)) + 1j * rng.standard_normal((n_points, dim))
        )
        yield (
            f"uncovered m={n_targets} k={n_points} d={dim}",
            lambda b, t=targets, p=points: b.uncovered_count(t, p, 0.1),
        )


def main():
    backends = [("fallback", _fallback)]
    if _core is not None:
        backends.append(("compiled", _core))
    else:
        print("compiled backend not built; timing fallback only\n")

    width = 34
    header = f"{'kernel':<{width}}" + "".join(f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for label, call in _cases():
        times = []
        results = []
        for _, backend in backends:
            t, r = _best_of(lambda b=backend: call(b))
            times.append(t)
            results.append(r)
        if len(results) == 2:
            a, b = np.asarray(results[0]), np.asarray(results[1])
            if a.shape != b.shape or not np.allclose(a, b, rtol=1e-9, atol=1e-12):
                raise AssertionError(f"backend results disagree on {label}")
        row = f"{label:<{width}}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
