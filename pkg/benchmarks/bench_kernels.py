"""Time the compiled kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel with the best wall time of each backend and the
speedup, after checking that both backends agree on the inputs.
"""
import argparse
import timeit

import numpy as np

from lorentziso.kernels import available_backends


def workloads(rng):
    m = 2048
    values = rng.uniform(0.1, 10.0, m)
    weights = rng.uniform(0.0, 1.0, m)
    centers = np.geomspace(0.1, 10.0, 2000)
    n = 2
    pts = rng.normal(size=(4000, n + 1))
    pts[:, 0] = np.sqrt(1.0 + np.sum(pts[:, 1:] ** 2, axis=1))
    logf = rng.uniform(-0.5, 0.5, 4000)
    pairs = rng.integers(0, 4000, size=(100_000, 2))
    verts = np.array([[2.0, 1, 0], [2, -1, 0], [2, 0, 1]])
    bary = rng.dirichlet(np.ones(3), size=200_000)
    return {
        "pairwise_sum (1e6)": ("pairwise_sum", (rng.normal(size=1_000_000),)),
        "l1_deviation_scan (2048 x 2000)": ("l1_deviation_scan", (values, weights, centers)),
        "lipschitz_excess (1e5 pairs)": ("lipschitz_excess", (pts, logf, pairs)),
        "inverse_power_moments (2e5)": ("inverse_power_moments", (bary, verts, 1.0, 3.0)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup")
    for label, (name, inputs) in workloads(rng).items():
        times = {}
        results = {}
        for b, mod in backends.items():
            fn = getattr(mod, name)
            results[b] = fn(*inputs)
            times[b] = min(timeit.repeat(lambda: fn(*inputs), number=1, repeat=args.repeat))
        ref = results["python"]
        for b, res in results.items():
            if not np.allclose(res, ref, rtol=1e-12, atol=1e-12):
                raise SystemExit(f"{name}: backend {b} disagrees with python")
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:34s} " + " ".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
              + f"   {speed:6.1f}x")


if __name__ == "__main__":
    main()
