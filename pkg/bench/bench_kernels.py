"""Time the compiled and pure-Python graph kernels on the same inputs.

Usage: python3 bench/bench_kernels.py [--assets 190] [--days 249] [--threshold 0.7]

The input is a synthetic sectored panel; the graph is the asset graph at
``--threshold`` plus the full edge list for Kruskal.  Both backends must
agree before their timings are reported.
"""
import argparse
import timeit

import numpy as np

from marketmap import kernels
from marketmap.correl import distance_from_correlation, spearman_correlation
from marketmap.netgraph import build_asset_graph
from marketmap.panel import compute_log_returns, generate_synthetic_panel


def inputs(n_assets, n_days, threshold, seed=1):
    sizes = [n_assets // 5 + (k < n_assets % 5) for k in range(5)]
    sectors = [(f"S{k}", s, 0.6) for k, s in enumerate(sizes)]
    panel, _ = generate_synthetic_panel(n_assets, n_days, sectors, 0.3, seed)
    dist = distance_from_correlation(spearman_correlation(compute_log_returns(panel)))
    indptr, indices, weights = build_asset_graph(dist, threshold=threshold).csr()
    iu, ju = np.triu_indices(n_assets, 1)
    order = np.lexsort((ju, iu, dist.values[iu, ju]))
    return {
        "betweenness": (indptr, indices, n_assets),
        "closeness_sums": (indptr, indices, weights, n_assets),
        "core_numbers": (indptr, indices, n_assets),
        "kruskal": (iu[order], ju[order], n_assets),
    }, len(indices) // 2


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a, float), np.asarray(b, float), rtol=1e-12, atol=1e-12)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--assets", type=int, default=190)
    parser.add_argument("--days", type=int, default=249)
    parser.add_argument("--threshold", type=float, default=0.7)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    cases, n_edges = inputs(args.assets, args.days, args.threshold)
    print(f"{args.assets} assets, asset graph T={args.threshold}: {n_edges} edges")
    print(f"backends: {', '.join(sorted(backends))}")
    print(f"{'kernel':<16}" + "".join(f"{name:>14}" for name in sorted(backends)) + f"{'speedup':>10}")
    for kernel, call_args in cases.items():
        results, times = {}, {}
        for name, impl in sorted(backends.items()):
            fn = getattr(impl, kernel)
            results[name] = fn(*call_args)
            number = 1 if name == "python" else 10
            best = min(timeit.repeat(lambda: fn(*call_args), number=number, repeat=args.repeat))
            times[name] = best / number
        if "cython" in results and not same(results["cython"], results["python"]):
            raise SystemExit(f"{kernel}: backends disagree")
        row = f"{kernel:<16}" + "".join(f"{times[n] * 1e3:>12.2f}ms" for n in sorted(times))
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
