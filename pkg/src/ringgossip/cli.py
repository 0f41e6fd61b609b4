"""Command-line entry point: run scenarios, scaling sweeps, control service.

Exit codes: 0 success, 1 environment failure, 2 invalid scenario or
arguments, 3 non-convergence within max_rounds.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional

from ringgossip.harness import METRICS_CSV_HEADER, RunResult, run, run_baseline
from ringgossip.scenario import Scenario, ScenarioError

EXIT_OK = 0
EXIT_ENV = 1
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"environment error: {exc}", file=sys.stderr)
        return EXIT_ENV


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringgossip",
        description="Deterministic ring-overlay gossip simulator",
    )
    sub = parser.add_subparsers(required=True)

    p_run = sub.add_parser("run", help="run one scenario file")
    p_run.add_argument("scenario", help="path to scenario JSON")
    p_run.add_argument("--seed", type=int, default=None, help="override scenario seed")
    p_run.add_argument("--out", default="out", help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="convergence/message scaling sweep")
    p_sweep.add_argument(
        "--sizes", default="16,64,256,1024", help="comma-separated network sizes"
    )
    p_sweep.add_argument("--trials", type=int, default=5, help="seeds per size")
    p_sweep.add_argument("--seed", type=int, default=0, help="base seed")
    p_sweep.add_argument("--fanout", type=int, default=3, help="baseline fanout k")
    p_sweep.add_argument("--out", default="out", help="output directory")
    p_sweep.set_defaults(func=cmd_sweep)

    p_serve = sub.add_parser("serve", help="start the control API service")
    p_serve.add_argument("--scenario", default=None, help="optional scenario to preload")
    p_serve.add_argument("--n", type=int, default=None, help="create a network of n nodes")
    p_serve.add_argument("--seed", type=int, default=0)
    p_serve.add_argument("--bind", default="127.0.0.1:8000", help="host:port")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def cmd_run(args: argparse.Namespace) -> int:
    scn = Scenario.from_file(args.scenario, seed_override=args.seed)
    result = run(scn)
    baseline_result: Optional[RunResult] = None
    if scn.baseline_fanout:
        baseline_result = run_baseline(scn)
    write_outputs(args.out, result, baseline_result)
    summary = result.summary()
    print(json.dumps(summary, indent=2))
    if not summary["converged"]:
        return EXIT_NO_CONVERGENCE
    return EXIT_OK if summary["violations"] == 0 else EXIT_NO_CONVERGENCE


def write_outputs(
    out_dir: str, result: RunResult, baseline_result: Optional[RunResult] = None
) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "events.jsonl"), "w") as fh:
        fh.write(result.sim.event_log_text())
    baseline_by_round = {}
    if baseline_result is not None:
        baseline_by_round = {
            m.round: m.baseline_msgs_sent for m in baseline_result.metrics
        }
    with open(os.path.join(out_dir, "metrics.csv"), "w") as fh:
        fh.write(METRICS_CSV_HEADER + "\n")
        for row in result.metrics:
            merged = row
            if baseline_by_round:
                merged = RowProxy(row, baseline_by_round.get(row.round, 0))
            fh.write(merged.csv_row() + "\n")
    summary = result.summary()
    if baseline_result is not None:
        summary["baseline"] = baseline_result.summary()
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")


class RowProxy:
    """Metrics row with the baseline column filled from a parallel run."""

    def __init__(self, row, baseline_sent: int):
        self._row = row
        self._baseline = baseline_sent

    def csv_row(self) -> str:
        parts = self._row.csv_row().split(",")
        parts[3] = str(self._baseline)
        return ",".join(parts)


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        sizes = [int(s) for s in str(args.sizes).split(",") if s.strip()]
    except ValueError:
        print(f"bad --sizes value {args.sizes!r}", file=sys.stderr)
        return EXIT_INVALID
    if not sizes or any(n < 2 for n in sizes):
        print("sweep sizes must all be >= 2", file=sys.stderr)
        return EXIT_INVALID
    if args.trials < 1:
        print("trials must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    if args.fanout < 1:
        print("fanout must be >= 1", file=sys.stderr)
        return EXIT_INVALID

    os.makedirs(args.out, exist_ok=True)
    rows = []
    for n in sizes:
        for trial in range(args.trials):
            seed = args.seed + trial
            scn = Scenario.build(
                n=n, seed=seed, max_rounds=max(200, 4 * n), baseline_fanout=args.fanout
            )
            structured = run(scn)
            conv = structured.sim.convergence_rounds().get(min(structured.sim.ids))
            if conv is None:
                print(f"n={n} seed={seed}: structured run did not converge", file=sys.stderr)
                return EXIT_NO_CONVERGENCE
            st_msgs = _mean_msgs(structured, "gossip_msgs_sent")
            base = run_baseline(scn)
            base_conv = base.sim.convergence_rounds().get(min(base.sim.ids))
            if base_conv is None:
                print(f"n={n} seed={seed}: baseline run did not converge", file=sys.stderr)
                return EXIT_NO_CONVERGENCE
            base_msgs = _mean_msgs(base, "baseline_msgs_sent")
            rows.append(
                {
                    "n": n,
                    "seed": seed,
                    "structured_rounds": conv,
                    "structured_msgs_per_round": st_msgs,
                    "baseline_rounds": base_conv,
                    "baseline_msgs_per_round": base_msgs,
                }
            )
            if structured.violations or base.violations:
                print(f"n={n} seed={seed}: invariant violations", file=sys.stderr)
                return EXIT_NO_CONVERGENCE

    csv_path = os.path.join(args.out, "sweep.csv")
    with open(csv_path, "w") as fh:
        cols = list(rows[0].keys())
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(str(row[c]) for c in cols) + "\n")

    summary = sweep_summary(rows, sizes, args.fanout)
    with open(os.path.join(args.out, "sweep_summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _mean_msgs(result: RunResult, attr: str) -> float:
    counts = [getattr(m, attr) for m in result.metrics if m.round >= 1]
    return round(sum(counts) / len(counts), 2) if counts else 0.0


def sweep_summary(rows: List[dict], sizes: List[int], fanout: int) -> dict:
    per_size = {}
    for n in sizes:
        mine = [r for r in rows if r["n"] == n]
        per_size[str(n)] = {
            "structured_rounds_mean": round(
                sum(r["structured_rounds"] for r in mine) / len(mine), 2
            ),
            "structured_msgs_per_round_mean": round(
                sum(r["structured_msgs_per_round"] for r in mine) / len(mine), 2
            ),
            "baseline_rounds_mean": round(
                sum(r["baseline_rounds"] for r in mine) / len(mine), 2
            ),
            "baseline_msgs_per_round_mean": round(
                sum(r["baseline_msgs_per_round"] for r in mine) / len(mine), 2
            ),
        }
    return {
        "sizes": sizes,
        "fanout": fanout,
        "per_size": per_size,
        "fitted_exponents": fit_exponents(per_size, sizes),
    }


def fit_exponents(per_size: dict, sizes: List[int]) -> dict:
    """Least-squares growth exponents on log/log axes.

    Convergence rounds are fitted against log2(n) (rounds ~ a*log2(n)^b),
    messages per round against n itself (msgs ~ a*n^b). A single size
    cannot constrain a slope, so exponents degrade to N/A.
    """
    if len(sizes) < 2:
        return {"rounds_vs_log_n": "N/A", "msgs_vs_n": "N/A"}

    def slope(xs: List[float], ys: List[float]) -> float:
        mean_x = sum(xs) / len(xs)
        mean_y = sum(ys) / len(ys)
        num = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
        den = sum((x - mean_x) ** 2 for x in xs)
        return num / den if den else float("nan")

    log_logn = [math.log(math.log2(n)) for n in sizes]
    log_rounds = [
        math.log(max(per_size[str(n)]["structured_rounds_mean"], 1.0)) for n in sizes
    ]
    log_n = [math.log(n) for n in sizes]
    log_msgs = [
        math.log(max(per_size[str(n)]["structured_msgs_per_round_mean"], 1.0))
        for n in sizes
    ]
    return {
        "rounds_vs_log_n": round(slope(log_logn, log_rounds), 3),
        "msgs_vs_n": round(slope(log_n, log_msgs), 3),
    }


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        host, port_text = args.bind.rsplit(":", 1)
        port = int(port_text)
    except ValueError:
        print(f"bad --bind value {args.bind!r}, expected host:port", file=sys.stderr)
        return EXIT_INVALID

    from ringgossip.api import create_app

    initial = None
    if args.scenario:
        initial = Scenario.from_file(args.scenario, seed_override=None)
    elif args.n:
        initial = Scenario.build(n=args.n, seed=args.seed, max_rounds=10**9)
    app = create_app(initial)

    import uvicorn

    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"bind failure: {exc}", file=sys.stderr)
        return EXIT_ENV
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
