#!/usr/bin/env python3
"""Structured gossip vs fanout-k epidemic: messages spent to converge.

For each size, runs both protocols to convergence and reports messages
per round and total messages, i.e. what bounding the per-node fanout at
two structure links actually buys.
"""

import argparse

from ringgossip.harness import run, run_baseline
from ringgossip.scenario import Scenario


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="16,64,256,1024")
    parser.add_argument("--fanout", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'n':>6} | {'structured':>21} | {'fanout-' + str(args.fanout):>21} | saving")
    print(f"{'':>6} | {'rounds':>6} {'msgs/rd':>7} {'total':>6} | "
          f"{'rounds':>6} {'msgs/rd':>7} {'total':>6} |")
    for n in (int(s) for s in args.sizes.split(",")):
        scn = Scenario.build(n=n, seed=args.seed, max_rounds=4 * n,
                             baseline_fanout=args.fanout)
        st = run(scn)
        st_rounds = st.sim.convergence_rounds()[0]
        st_total = sum(m.gossip_msgs_sent for m in st.metrics)
        st_rate = st_total / max(st.sim.round, 1)

        ep = run_baseline(scn)
        ep_rounds = ep.sim.convergence_rounds()[0]
        ep_total = sum(m.baseline_msgs_sent for m in ep.metrics)
        ep_rate = ep_total / max(ep.sim.round, 1)

        saving = ep_total / st_total if st_total else float("inf")
        print(f"{n:>6} | {st_rounds:>6} {st_rate:>7.0f} {st_total:>6} | "
              f"{ep_rounds:>6} {ep_rate:>7.0f} {ep_total:>6} | {saving:>5.2f}x")


if __name__ == "__main__":
    main()
