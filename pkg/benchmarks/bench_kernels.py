"""Time the form/gradient kernels on each available backend.

    python3 benchmarks/bench_kernels.py --n 12 --r 3 --rows 64
"""

import argparse
import timeit

import numpy as np

from hyperlam import kernels
from hyperlam.hypergraph import balanced_chromatic, complete_graph


def bench(edges, X, backend, repeat):
    t_val = min(timeit.repeat(lambda: kernels.form_values(edges, X, backend), number=5,
                              repeat=repeat)) / 5
    t_grad = min(timeit.repeat(lambda: kernels.form_values_grads(edges, X, backend), number=5,
                               repeat=repeat)) / 5
    return t_val, t_grad


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--rows", type=int, default=32, help="restarts evaluated per call")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    graphs = {"complete": complete_graph(args.n, args.r),
              "chromatic-k2": balanced_chromatic(args.n, 2, args.r)}
    print(f"{'graph':<14}{'m':>8}{'backend':>10}{'value ms':>12}{'grad ms':>12}")
    for name, G in graphs.items():
        X = rng.random((args.rows, G.n))
        ref = None
        for backend in sorted(kernels.BACKENDS):
            tv, tg = bench(G.edge_array, X, backend, args.repeat)
            f, g = kernels.form_values_grads(G.edge_array, X, backend)
            if ref is None:
                ref = (f, g)
            else:
                assert np.allclose(f, ref[0]) and np.allclose(g, ref[1]), "backends disagree"
            print(f"{name:<14}{G.m:>8}{backend:>10}{1e3 * tv:>12.3f}{1e3 * tg:>12.3f}")


if __name__ == "__main__":
    main()
