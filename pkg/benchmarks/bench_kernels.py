"""Time the compiled and pure-Python kernels on the same random graphs.

    python3 benchmarks/bench_kernels.py [--nodes 500 1000 2000] [--degree 20] [--iterations 50]
"""

import argparse
import math
import time

import numpy as np

from coeditnet import _kernels_py
from coeditnet.graph import CollabGraph

try:
    from coeditnet import _kernels
except ImportError:
    _kernels = None


def random_graph(n, mean_degree, seed):
    rng = np.random.default_rng(seed)
    m = n * mean_degree // 2
    u = rng.integers(0, n, m)
    v = rng.integers(0, n, m)
    keep = u != v
    pairs = {(int(min(a, b)), int(max(a, b))) for a, b in zip(u[keep], v[keep])}
    return CollabGraph.from_edges(n, sorted(pairs))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, nargs="+", default=[250, 500, 1000, 2000])
    ap.add_argument("--degree", type=int, default=20)
    ap.add_argument("--iterations", type=int, default=50, help="layout iterations per run")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["cython"] = _kernels
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"{'kernel':<8} {'n':>6} {'m':>7} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in args.nodes:
        g = random_graph(n, args.degree, seed=n)
        indptr, indices = g.csr
        e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 3)
        pos0 = np.random.default_rng(42).random((n, 2))
        k = math.sqrt(1.0 / n)
        jobs = {
            "brandes": lambda mod: mod.brandes(indptr, indices),
            "layout": lambda mod: mod.fruchterman_reingold(pos0.copy(), e[:, 0], e[:, 1],
                                                           args.iterations, k, 0.1),
        }
        for name, job in jobs.items():
            t = {b: best_of(lambda: job(mod), args.repeat) for b, mod in backends.items()}
            row = f"{name:<8} {n:>6} {g.m:>7} " + " ".join(f"{t[b]:>9.3f}s" for b in backends)
            if "cython" in t:
                row += f"   {t['python'] / t['cython']:6.1f}x"
            print(row)


if __name__ == "__main__":
    main()
