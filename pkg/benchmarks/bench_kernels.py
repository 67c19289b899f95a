#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Runs the automaton reachability search and the oracle box enumeration on
workloads large enough to be meaningful, checks that both backends return
identical results, and prints a timing table.

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from ilpath import _kernels_py
from ilpath.automaton import residue_bounds
from ilpath.instance import IlpInstance

try:
    from ilpath import _speedups
except ImportError:
    _speedups = None

# Infeasible systems force the search to exhaust the reachable bounded
# space, which is the worst case for reachability.
REACH_CASES = [
    (
        "reach: 2x3 infeasible (parity row)",
        IlpInstance(
            coeffs=((2, -4, 6), (3, 5, -7)),
            rhs=(1, 2),
            var_names=("x1", "x2", "x3"),
        ),
    ),
    (
        "reach: 3x4 infeasible, dense lattice",
        IlpInstance(
            coeffs=((2, -4, 6, 8), (3, 5, -7, 1), (1, -2, 4, -3)),
            rhs=(1, 0, 0),
            var_names=("x1", "x2", "x3", "x4"),
        ),
    ),
    (
        "reach: 2x4 feasible, distant witness",
        IlpInstance(
            coeffs=((9, -5, 3, -7), (-4, 8, -6, 5)),
            rhs=(13, -11),
            var_names=("x1", "x2", "x3", "x4"),
        ),
    ),
]

ENUM_CASES = [
    (
        "enum: n=5 box=14, one constraint",
        IlpInstance(
            coeffs=((1, 2, 3, 4, 5),),
            rhs=(31,),
            var_names=tuple(f"x{i}" for i in range(1, 6)),
        ),
        14,
    ),
    (
        "enum: n=6 box=9, two constraints",
        IlpInstance(
            coeffs=((1, 1, 1, 1, 1, 1), (1, -1, 2, -2, 3, -3)),
            rhs=(20, 1),
            var_names=tuple(f"x{i}" for i in range(1, 7)),
        ),
        9,
    ),
]


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _speedups is None:
        print("compiled kernels not built; install with a C++ toolchain first")
        return 1

    rows = []
    for name, inst in REACH_CASES:
        cols = [inst.column(i) for i in range(1, inst.num_vars + 1)]
        bounds = residue_bounds(inst)
        budget = 20_000_000
        t_py, r_py = timed(
            lambda: _kernels_py.automaton_reach(cols, inst.rhs, bounds, budget),
            args.repeat,
        )
        t_cy, r_cy = timed(
            lambda: _speedups.automaton_reach(cols, inst.rhs, bounds, budget),
            args.repeat,
        )
        assert r_py == r_cy, f"{name}: backends disagree"
        rows.append((name, r_py[2], t_py, t_cy))

    for name, inst, box in ENUM_CASES:
        budget = 200_000_000
        t_py, r_py = timed(
            lambda: _kernels_py.enumerate_box(inst.coeffs, inst.rhs, box, budget, False),
            args.repeat,
        )
        t_cy, r_cy = timed(
            lambda: _speedups.enumerate_box(inst.coeffs, inst.rhs, box, budget, False),
            args.repeat,
        )
        assert r_py == r_cy, f"{name}: backends disagree"
        rows.append((name, r_py[1], t_py, t_cy))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'work':>10}  {'pure (s)':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, work, t_py, t_cy in rows:
        print(f"{name:<{width}}  {work:>10}  {t_py:>10.4f}  {t_cy:>10.4f}  {t_py / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
