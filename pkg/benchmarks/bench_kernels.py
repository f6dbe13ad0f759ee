"""Time the compiled kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py [--size 3] [--points 300] [--repeat 5]

Each kernel runs on identical inputs under both backends; results are
compared before any timing is reported.
"""
import argparse
import random
import statistics
import time

import numpy as np

from gridtrace import Element, ElementSet, ElementType
from gridtrace.kernels import backends
from gridtrace.paths import Constraints, Network


def grid_network(size: int, seed: int = 0) -> ElementSet:
    """Poles on a jittered lattice joined by short lines, customers on one edge."""
    rng = random.Random(seed)
    step = 10.0
    elements = []

    def jitter(v):
        return v + rng.uniform(-1, 1)

    for i in range(size):
        for j in range(size):
            elements.append(Element(f"p{i}_{j}", ElementType.POLE, ((i * step, j * step),)))
            if i + 1 < size:
                elements.append(
                    Element(f"h{i}_{j}", ElementType.LINE, ((i * step + 1, jitter(j * step)), ((i + 1) * step - 1, jitter(j * step))))
                )
            if j + 1 < size:
                elements.append(
                    Element(f"v{i}_{j}", ElementType.LINE, ((jitter(i * step), j * step + 1), (jitter(i * step), (j + 1) * step - 1)))
                )
    for j in range(size):
        elements.append(Element(f"c{j}", ElementType.CUSTOMER, ((-3.0, j * step),)))
    elements.append(Element("t1", ElementType.TRANSFORMER, (((size - 1) * step + 3, 0.0),)))
    elements.append(Element("t2", ElementType.TRANSFORMER, (((size - 1) * step + 3, (size - 1) * step),)))
    return ElementSet(elements)


def best_of(fn, repeat):
    times = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times), result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=3, help="lattice side length")
    parser.add_argument("--points", type=int, default=300, help="two-point elements for min_dist_matrix")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    found = backends()
    if "cython" not in found:
        print("compiled kernels are not built; only the Python backend is available")
    elements = grid_network(args.size)
    cons = Constraints(("hop", "length"), R=3.0, L=args.size * 10.0 * 1.6, hop_rule="radius")
    net = Network(elements, cons)
    rng = np.random.default_rng(0)
    xy = rng.uniform(0, 1000, size=(2 * args.points, 2))
    offsets = np.arange(0, 2 * args.points + 1, 2, dtype=np.int64)
    customers = [e.id for e in elements.values() if e.element_type is ElementType.CUSTOMER]

    def expand(mod):
        def run():
            total = 0
            for c in customers:
                total += len(
                    mod.expand_paths(
                        net.index[c],
                        np.array(net.first_hops(c), dtype=np.int64),
                        net.indptr,
                        net.indices,
                        net.dmat,
                        net.internal,
                        net.is_transformer,
                        net.is_customer,
                        net.tcode,
                        net.is_board,
                        float(cons.L),
                        float("inf"),
                        len(net.ids) + 1,
                        False,
                        False,
                    )
                )
            return total

        return run

    workloads = {
        f"min_dist_matrix ({args.points} elements)": lambda mod: lambda: mod.min_dist_matrix(xy, offsets),
        f"expand_paths ({len(elements)} elements)": expand,
    }
    print(f"{'kernel':40s} {'backend':8s} {'best ms':>10s} {'median ms':>10s}")
    for name, make in workloads.items():
        outputs = {}
        rows = []
        for backend, mod in found.items():
            best, median, out = best_of(make(mod), args.repeat)
            outputs[backend] = out
            rows.append((backend, best, median))
        values = list(outputs.values())
        same = all(
            np.array_equal(values[0], v) if isinstance(v, np.ndarray) else v == values[0] for v in values
        )
        for backend, best, median in rows:
            print(f"{name:40s} {backend:8s} {best * 1e3:10.2f} {median * 1e3:10.2f}")
        if len(rows) == 2:
            print(f"{'':40s} speedup  {rows[0][1] / rows[1][1]:10.1f}x   outputs equal: {same}")
        if not same:
            raise SystemExit(f"{name}: backends disagree")


if __name__ == "__main__":
    main()
