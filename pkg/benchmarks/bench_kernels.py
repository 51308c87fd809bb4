"""Compiled vs pure-Python kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from eqwreath import kernels
from eqwreath.catalog import by_name
from eqwreath.groups import _right_generators, cyclic, wreath_product
from eqwreath.solver import solve
from eqwreath.words import system


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads():
    Z2, Z8, S3 = cyclic(2), cyclic(8), by_name("S3")
    W2048 = wreath_product(Z2, Z8)
    W64 = wreath_product(Z2, cyclic(4))
    gens = _right_generators(W2048.table)
    comm = system("x1 x2 x1^-1 x2^-1 a1")
    return [
        ("build_wreath Z2 wr Z8 (2048)", lambda: kernels.build_wreath(Z2.table, Z8.table)),
        ("build_wreath Z3 wr S3 (4374)", lambda: kernels.build_wreath(cyclic(3).table, S3.table)),
        ("associativity Z2 wr Z8, Light's test",
         lambda: kernels.associativity_witness(W2048.table, gens)),
        ("associativity D4 exhaustive x200",
         lambda: [kernels.associativity_witness(by_name("D4").table, np.arange(8))
                  for _ in range(200)]),
        ("search: [x1, x2] = a1 for all a1 in Z2 wr Z4",
         lambda: [solve(W64, comm, [a]) for a in W64.elements]),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = kernels.available_backends()
    print(f"{'workload':45s}" + "".join(f"{b:>12s}" for b in backends) +
          ("     speedup" if len(backends) == 2 else ""))
    previous = kernels.backend()
    for name, fn in workloads():
        row = []
        for b in backends:
            kernels.use_backend(b)
            row.append(best_of(args.repeat, fn))
        kernels.use_backend(previous)
        line = f"{name:45s}" + "".join(f"{t:11.4f}s" for t in row)
        if len(row) == 2:
            line += f"{row[1] / row[0]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
