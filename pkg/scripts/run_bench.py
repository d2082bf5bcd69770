#!/usr/bin/env python3
"""
Solver comparison over a batch of seeded instances.

For every seed the script generates one instance, runs the exact search
and the heuristic, optionally the exhaustive oracle on tiny shapes, and
prints one row per seed plus a summary: how often the heuristic hits
the proven optimum, node counts, wall times.

    python3 scripts/run_bench.py --seeds 25 --stations 2 --robots 2 --customers 5
"""

import argparse
import statistics
import sys

from mothership import (
    EnumerationLimitError,
    InfeasibleInstanceError,
    construct,
    generate,
    improve,
    solve_bnb,
    solve_oracle,
)


def parse_args(argv):
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--seeds", type=int, default=25, help="number of instances")
    ap.add_argument("--first-seed", type=int, default=0)
    ap.add_argument("--stations", type=int, default=2)
    ap.add_argument("--robots", type=int, default=2)
    ap.add_argument("--customers", type=int, default=5)
    ap.add_argument("--robot-range", type=float, default=200.0)
    ap.add_argument("--with-oracle", action="store_true",
                    help="also run the exhaustive oracle (tiny shapes only)")
    return ap.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    header = f"{'seed':>5}  {'exact':>12}  {'nodes':>7}  {'s':>7}  {'heuristic':>12}  {'gap%':>6}"
    if args.with_oracle:
        header += f"  {'oracle':>12}"
    print(header)
    print("-" * len(header))

    gaps = []
    exact_nodes = []
    exact_secs = []
    matches = 0
    solved = 0
    skipped = 0

    for i in range(args.seeds):
        seed = args.first_seed + i
        try:
            inst = generate(seed, args.stations, args.robots, args.customers,
                            robot_range=args.robot_range)
            exact = solve_bnb(inst)
            heur = improve(inst, construct(inst))
        except InfeasibleInstanceError as e:
            print(f"{seed:>5}  infeasible: {e}")
            skipped += 1
            continue

        solved += 1
        exact_nodes.append(exact.nodes)
        exact_secs.append(exact.wall_time)
        if exact.objective > 0.0:
            gap = 100.0 * (heur.objective - exact.objective) / exact.objective
        else:
            gap = 0.0 if heur.objective == 0.0 else float("inf")
        gaps.append(gap)
        if heur.objective == exact.objective:
            matches += 1

        row = (f"{seed:>5}  {exact.objective:>12.6f}  {exact.nodes:>7}  "
               f"{exact.wall_time:>7.3f}  {heur.objective:>12.6f}  {gap:>6.2f}")
        if args.with_oracle:
            try:
                oracle = solve_oracle(inst)
                row += f"  {oracle.objective:>12.6f}"
                assert oracle.objective == exact.objective, f"seed {seed}: oracle mismatch"
            except EnumerationLimitError:
                row += f"  {'too big':>12}"
        print(row)

    if solved:
        print()
        print(f"solved {solved}, infeasible {skipped}")
        print(f"heuristic matches exact on {matches}/{solved} "
              f"({100.0 * matches / solved:.1f}%)")
        print(f"mean gap {statistics.fmean(gaps):.3f}%  "
              f"mean nodes {statistics.fmean(exact_nodes):.0f}  "
              f"mean exact wall {statistics.fmean(exact_secs) * 1000.0:.1f} ms")
    return 0


if __name__ == "__main__":
    sys.exit(main())
