#!/usr/bin/env python3
"""Convergence-scaling experiment: rounds to converge vs network size.

Runs the structured protocol over a range of sizes and seeds, prints a
table of convergence rounds against the squared-log envelope, and drops
the raw data next to the summary. Equivalent to `ringgossip sweep` but
kept as a hackable script for trying different strategies side by side.
"""

import argparse
import json
import math
import os

from ringgossip.harness import run
from ringgossip.scenario import Scenario


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="16,64,256,1024,4096")
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--strategy", default="cycle", choices=["cycle", "furthest"])
    parser.add_argument("--out", default="out/convergence")
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    os.makedirs(args.out, exist_ok=True)
    rows = []
    print(f"{'n':>6} {'log2^2':>7} {'mean r':>7} {'ratio':>7}  per-seed")
    for n in sizes:
        per_seed = []
        for seed in range(args.seeds):
            scn = Scenario.build(
                n=n, seed=seed, max_rounds=4 * n, finger_strategy=args.strategy
            )
            res = run(scn)
            conv = res.sim.convergence_rounds()[0]
            per_seed.append(conv)
        envelope = math.ceil(math.log2(n)) ** 2
        mean = sum(per_seed) / len(per_seed)
        print(f"{n:>6} {envelope:>7} {mean:>7.1f} {mean / envelope:>7.3f}  {per_seed}")
        rows.append({"n": n, "envelope": envelope, "mean_rounds": mean, "rounds": per_seed})

    with open(os.path.join(args.out, "convergence.json"), "w") as fh:
        json.dump({"strategy": args.strategy, "rows": rows}, fh, indent=2)
    print(f"\nwrote {args.out}/convergence.json")


if __name__ == "__main__":
    main()
