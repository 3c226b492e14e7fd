#!/usr/bin/env python3
"""Benchmark the compiled propagation kernel against the pure-Python fallback.

Times the two ``run_plan`` implementations on the element plans that
dominate real workloads: the basic nested layout (the unit of every sweep
and optimizer evaluation) and deep chained networks.  Run from a checkout
with the extension built:

    python3 benchmarks/kernel_benchmark.py [--repeats N]
"""

import argparse
import math
import timeit

import numpy as np

from cfoptics import ChainConfig, NestedConfig, build_chain_network, build_nested_network
from cfoptics.core import compile_network
from cfoptics.kernel import available_backends


def make_runner(run_plan, plan, mode_count):
    ops, arg_a, arg_b, theta = plan.ops, plan.arg_a, plan.arg_b, plan.theta
    n_slots = len(plan.ledger_labels)
    n_snaps = len(plan.checkpoint_names)

    def runner():
        amps = np.zeros(mode_count, dtype=np.complex128)
        amps[0] = 1.0
        absorbed = np.zeros(n_slots)
        snaps = np.zeros((n_snaps, mode_count), dtype=np.complex128)
        run_plan(ops, arg_a, arg_b, theta, amps, absorbed, snaps)
        return amps

    return runner


def scenarios():
    basic = build_nested_network(NestedConfig(0.25, 0.7173152392961322), 0)
    yield "basic layout (blocked arm)", compile_network(basic), 3
    for outer, inner in ((2, 4), (5, 25), (10, 100)):
        chain = build_chain_network(ChainConfig(outer, inner), 0)
        label = f"chain outer={outer} inner={inner} ({len(chain.elements)} elements)"
        yield label, compile_network(chain), 3


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="timeit repeats (best is reported)")
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends available: {', '.join(sorted(backends))}")
    header = f"{'scenario':45s} " + " ".join(f"{name + ' (us)':>14s}" for name in sorted(backends))
    if len(backends) > 1:
        header += f" {'speedup':>9s}"
    print(header)
    for label, plan, mode_count in scenarios():
        per_backend = {}
        for name in sorted(backends):
            runner = make_runner(backends[name], plan, mode_count)
            number = max(1, int(2000 / max(1, len(plan.ops) / 50)))
            best = min(timeit.repeat(runner, number=number, repeat=args.repeats))
            per_backend[name] = best / number * 1e6
        line = f"{label:45s} " + " ".join(f"{per_backend[name]:14.2f}" for name in sorted(backends))
        if "python" in per_backend and "cython" in per_backend:
            line += f" {per_backend['python'] / per_backend['cython']:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
