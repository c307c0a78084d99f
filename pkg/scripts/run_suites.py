#!/usr/bin/env python3
"""Run the seeded guarantee suites and print a summary table.

Reproduces the guarantees over randomized valuation profiles:

    cake      one cake, n pieces, k pieces per player
    cakes     k cakes, disjoint one-piece-per-cake selections
    shifts2   k=2 days, exact n-employee covers (Gallai)
    shifts3   k=3 days, n(1+ln k) covers (greedy/Lovasz)

Usage: python scripts/run_suites.py [--seeds 20] [--suite all]
"""
import argparse
import sys
import time
from fractions import Fraction

sys.path.insert(0, "src")

from fairdiv import oracles, solver

SUITES = {
    "cake": [
        dict(mode="cake", n=4, k=2, p=4, mesh=1, rounds=4),
        dict(mode="cake", n=4, k=2, p=4, mesh=2, rounds=4),
    ],
    "cakes": [
        dict(mode="cakes", n=3, k=2, p=5, mesh=1, rounds=3),
        dict(mode="cakes", n=3, k=2, p=5, mesh=2, rounds=3),
    ],
    "shifts2": [
        dict(mode="shifts", n=2, k=2, p=3, mesh=1, rounds=4),
        dict(mode="shifts", n=3, k=2, p=5, mesh=1, rounds=4),
    ],
    "shifts3": [
        dict(mode="shifts", n=2, k=3, p=4, mesh=1, rounds=4),
    ],
}


def run_config(cfg, seeds, epsilon):
    ids = tuple(f"p{i+1}" for i in range(cfg["p"]))
    results = []
    t0 = time.monotonic()
    for seed in seeds:
        profile = oracles.random_profile(
            ids, 1 if cfg["mode"] == "cake" else cfg["k"], seed
        )
        spec = solver.ProblemSpec(
            cfg["mode"],
            n=cfg["n"],
            k=cfg["k"],
            players=ids,
            mesh=cfg["mesh"],
            max_rounds=cfg["rounds"],
            epsilon=epsilon,
            seed=seed,
        )
        results.append(
            solver.refine_until_stable(spec, oracles.SimulatedOracle(profile))
        )
    elapsed = time.monotonic() - t0
    achieved = [r["bound"]["achieved"] for r in results]
    unstable = sum(r["flags"]["unstable"] for r in results)
    guaranteed = results[0]["bound"]["guaranteed"]
    return {
        "config": f"{cfg['mode']:7s} n={cfg['n']} k={cfg['k']} p={cfg['p']} m0={cfg['mesh']}",
        "guaranteed": guaranteed,
        "achieved": f"{min(achieved)}..{max(achieved)}",
        "unstable": unstable,
        "time": f"{elapsed:5.1f}s",
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    ap.add_argument("--epsilon", default="3/10")
    args = ap.parse_args()

    suites = SUITES if args.suite == "all" else {args.suite: SUITES[args.suite]}
    epsilon = Fraction(args.epsilon)
    rows = []
    for name, configs in suites.items():
        for cfg in configs:
            rows.append(run_config(cfg, range(args.seeds), epsilon))
            print(".", end="", flush=True)
    print()
    header = f"{'configuration':34s} {'bound':>5s} {'achieved':>9s} {'unstable':>8s} {'time':>7s}"
    print(header)
    print("-" * len(header))
    for r in rows:
        print(
            f"{r['config']:34s} {r['guaranteed']:>5d} {r['achieved']:>9s} "
            f"{r['unstable']:>8d} {r['time']:>7s}"
        )


if __name__ == "__main__":
    main()
