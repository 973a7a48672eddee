#!/usr/bin/env python3
"""Throughput comparison of the fictitious-play kernel backends.

Runs the same deterministic fictitious-play workload on every available
backend (numba, numpy, python) and prints rounds per second.  The numba
figures include JIT compilation in the first, discarded warm-up run.

Usage:
    python benchmarks/fp_bench.py [--rounds 20000] [--n 120] [--k 6]
"""

import argparse
import time
from fractions import Fraction

from blotto_lab import GameSpec, fp_run
from blotto_lab.kernels import available_backends


def bench(spec: GameSpec, rounds: int, backend: str) -> float:
    fp_run(spec, min(rounds, 500), backend=backend)  # warm up / compile
    start = time.perf_counter()
    fp_run(spec, rounds, backend=backend)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rounds", type=int, default=20_000)
    parser.add_argument("--n", type=int, default=120)
    parser.add_argument("--k", type=int, default=6)
    args = parser.parse_args()

    spec = GameSpec(args.n, args.k, Fraction(0))
    print(f"fictitious play, budget={args.n}, battlefields={args.k}, rounds={args.rounds}")
    results = []
    for backend in available_backends():
        elapsed = bench(spec, args.rounds, backend)
        results.append((backend, elapsed))
        print(f"  {backend:<8} {elapsed:8.2f}s   {args.rounds / elapsed:12.0f} rounds/s")
    results.sort(key=lambda item: item[1])
    fastest, runner_up = results[0], results[1]
    print(
        f"fastest: {fastest[0]} "
        f"({runner_up[1] / fastest[1]:.1f}x over {runner_up[0]})"
    )


if __name__ == "__main__":
    main()
