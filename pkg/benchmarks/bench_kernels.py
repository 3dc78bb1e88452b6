#!/usr/bin/env python3
"""Benchmark the hot kernels: compiled extension vs pure-Python fallback.

Workloads mirror the heaviest acceptance paths: generating dense van der
Corput blocks, generating two-dimensional Stirling blocks, and bucketing a
block into elementary intervals.

Run:  python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from badicnets import _backend, engine, genmatrix, quality
from badicnets.engine import BijectionFamily
from badicnets.field import make_field
from badicnets.inputseq import NaturalSequence


def time_call(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads():
    f5 = make_field(5)
    f2 = make_field(2)
    bij5 = BijectionFamily.identity(5)
    bij2 = BijectionFamily.identity(2)
    ident5 = genmatrix.identity_matrix_set(f5, 1, 8)
    stir5 = genmatrix.stirling_matrix_set(f5, 2, 6)
    pairs = genmatrix.MatrixSet(f2, [genmatrix.pairs_matrix(12)])
    nat5 = NaturalSequence(5)
    nat2 = NaturalSequence(2)

    block12 = engine.generate_block(pairs, bij2, nat2, 0, 2**12, 12)

    yield ("block identity b=5 m=8 (390625 pts)",
           lambda: engine.generate_block(ident5, bij5, nat5, 0, 5**8, 8))
    yield ("block stirling b=5 s=2 m=6 (15625 pts)",
           lambda: engine.generate_block(stir5, bij5, nat5, 0, 5**6, 6))
    yield ("net counts pairs b=2 m=12 t=6",
           lambda: quality.verify_net(block12, 6, 12))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per measurement (best is kept)")
    args = parser.parse_args()

    names = list(_backend.available_backends())
    if "compiled" not in names:
        print("note: compiled extension not built; benchmarking fallback only")
    rows = []
    for label, fn in workloads():
        timings = {}
        for name in names:
            with _backend.use_backend(name):
                timings[name] = time_call(fn, args.repeat)
        rows.append((label, timings))

    width = max(len(label) for label, _ in rows)
    header = f"{'workload':<{width}}  " + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, timings in rows:
        line = f"{label:<{width}}  " + "".join(f"{timings[n] * 1e3:>10.1f}ms"
                                               for n in names)
        if len(names) == 2:
            line += f"{timings['python'] / timings['compiled']:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
