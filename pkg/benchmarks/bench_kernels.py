"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--nodes 200000] [--enum-nodes 18] [--repeat 5]
"""

import argparse
import timeit

import numpy as np
import scipy.sparse as sp

from localspec import kernels


def random_csr(n, avg_degree, rng):
    m = n * avg_degree // 2
    u = rng.integers(0, n, m)
    v = rng.integers(0, n, m)
    keep = u != v
    a = sp.coo_matrix((rng.uniform(0.5, 2.0, keep.sum()), (u[keep], v[keep])), shape=(n, n))
    a = (a + a.T).tocsr()
    a.sum_duplicates()
    return a, np.asarray(a.sum(axis=1)).ravel()


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=200_000, help="graph size for the sweep kernel")
    ap.add_argument("--degree", type=int, default=10)
    ap.add_argument("--enum-nodes", type=int, default=18, help="graph size for exhaustive enumeration")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    backends = kernels.available_backends()
    print(f"backends: {', '.join(sorted(backends))} (selected: {kernels.BACKEND})")

    a, deg = random_csr(args.nodes, args.degree, rng)
    order = rng.permutation(args.nodes).astype(np.int64)
    small, sdeg = random_csr(args.enum_nodes, 4, rng)

    rows = []
    for name, impl in sorted(backends.items()):
        t_sweep = best_of(lambda: impl.sweep_prefixes(order, a.indptr, a.indices, a.data, deg), args.repeat)
        t_enum = best_of(lambda: impl.enumerate_cuts(small.indptr, small.indices, small.data, sdeg), args.repeat)
        rows.append((name, t_sweep, t_enum))

    ref = {name: (s, e) for name, s, e in rows}
    base = ref.get("python")
    print(f"{'backend':<8} {'sweep n=' + str(args.nodes):>18} {'enumerate n=' + str(args.enum_nodes):>18}")
    for name, s, e in rows:
        note = f"  ({base[0] / s:.1f}x, {base[1] / e:.1f}x vs python)" if base and name != "python" else ""
        print(f"{name:<8} {s * 1e3:>15.2f} ms {e * 1e3:>15.2f} ms{note}")


if __name__ == "__main__":
    main()
