"""Command line driver.

Subcommands: cake | cakes | shifts (batch solves), hyper (hypergraph
numbers and certificates), tri (debug triangulation dump), serve (HTTP
session service). Exit codes for batch solves: 0 on a stable report with
the bound attained, 2 when flagged unstable, 1 on errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import hypergraph as hg
from . import solver
from .geometry import barycentric_complete, grid_triangulation, product_triangulation
from .oracles import SimulatedOracle, random_profile
from .serialize import (
    canonical_json,
    frac_str,
    parse_frac,
    parse_profile,
    triangulation_json,
)


def _add_solve_flags(sp):
    sp.add_argument("--n", type=int, required=True, help="pieces/shifts per factor")
    sp.add_argument("--k", type=int, default=1, help="pieces per player / factor count")
    sp.add_argument("--players", type=int, required=True, help="player count")
    sp.add_argument("--valuations", metavar="FILE", help="valuation profile JSON")
    sp.add_argument("--mesh", type=int, default=1, help="initial mesh")
    sp.add_argument("--rounds", type=int, default=4, help="max refinement rounds")
    sp.add_argument("--epsilon", default=None, help="stability tolerance (p/q)")
    sp.add_argument("--seed", type=int, default=None, help="profile seed")
    sp.add_argument("--out", metavar="FILE", help="write the report JSON here")


def _build_parser():
    ap = argparse.ArgumentParser(prog="fairdiv")
    sub = ap.add_subparsers(dest="command", required=True)
    for mode in (solver.MODE_CAKE, solver.MODE_CAKES, solver.MODE_SHIFTS):
        sp = sub.add_parser(mode, help=f"solve in {mode} mode")
        _add_solve_flags(sp)

    hp = sub.add_parser("hyper", help="hypergraph numbers and certificates")
    hp.add_argument("instance", metavar="FILE", help="edge-list JSON")
    hp.add_argument("--out", metavar="FILE")

    tp = sub.add_parser("tri", help="dump a triangulation as JSON")
    tp.add_argument("--n", type=int, required=True)
    tp.add_argument("--k", type=int, default=1)
    tp.add_argument("--mesh", type=int, default=1)
    tp.add_argument("--barycentric", action="store_true", help="owned subdivision")
    tp.add_argument("--out", metavar="FILE")

    vp = sub.add_parser("serve", help="run the HTTP session service")
    vp.add_argument("--port", type=int, default=8000)
    vp.add_argument("--host", default="127.0.0.1")
    return ap


def _emit(payload: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _run_solve(mode: str, args) -> int:
    players = tuple(f"p{i+1}" for i in range(args.players))
    epsilon = parse_frac(args.epsilon) if args.epsilon else solver.DEFAULT_EPSILON
    spec = solver.ProblemSpec(
        mode,
        n=args.n,
        k=args.k,
        players=players,
        mesh=args.mesh,
        max_rounds=args.rounds,
        epsilon=epsilon,
        seed=args.seed,
    )
    if args.valuations:
        with open(args.valuations) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(
                    f"{args.valuations}: line {exc.lineno} column {exc.colno}: {exc.msg}"
                ) from exc
        profile = parse_profile(data)
        missing = [p for p in players if p not in profile.players]
        if missing:
            raise ValueError(f"{args.valuations}: missing players {missing}")
    else:
        if args.seed is None:
            raise ValueError("need --valuations or --seed for simulated players")
        profile = random_profile(
            players, 1 if mode == solver.MODE_CAKE else args.k, args.seed
        )
    report = solver.refine_until_stable(spec, SimulatedOracle(profile))
    _emit(canonical_json(report), args.out)
    if report["flags"]["unstable"]:
        return 2
    ok = (
        report["bound"]["achieved"] <= report["bound"]["guaranteed"]
        if mode == solver.MODE_SHIFTS
        else report["bound"]["achieved"] >= report["bound"]["guaranteed"]
    )
    return 0 if ok else 1


def _run_hyper(args) -> int:
    with open(args.instance) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"{args.instance}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    try:
        h = hg.hypergraph(
            int(data["vertices"]),
            [frozenset(int(v) for v in e) for e in data["edges"]],
            data.get("partition"),
        )
    except KeyError as exc:
        raise ValueError(f"{args.instance}: missing field {exc}") from exc
    matching = hg.max_matching(h)
    nu_star, fm = hg.fractional_matching_number(h)
    tau_star, fc = hg.fractional_cover_number(h)
    cover = hg.exact_min_cover(h)
    pfm = hg.perfect_fractional_matching(h)
    out = {
        "nu": len(matching),
        "matching": list(matching),
        "nu_star": frac_str(nu_star),
        "fractional_matching": [frac_str(w) for w in fm],
        "tau": len(cover),
        "cover": list(cover),
        "tau_star": frac_str(tau_star),
        "fractional_cover": [frac_str(w) for w in fc],
        "perfect_fractional_matching": (
            [frac_str(w) for w in pfm] if pfm is not None else None
        ),
    }
    _emit(canonical_json(out), args.out)
    return 0


def _run_tri(args) -> int:
    t = (
        grid_triangulation(args.n, args.mesh)
        if args.k == 1
        else product_triangulation(args.n, args.k, args.mesh)
    )
    if args.barycentric:
        t = barycentric_complete(t)
    _emit(canonical_json(triangulation_json(t)), args.out)
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("FAIRDIV_LOG", "WARNING").upper())
    args = _build_parser().parse_args(argv)
    try:
        if args.command in (solver.MODE_CAKE, solver.MODE_CAKES, solver.MODE_SHIFTS):
            return _run_solve(args.command, args)
        if args.command == "hyper":
            return _run_hyper(args)
        if args.command == "tri":
            return _run_tri(args)
        if args.command == "serve":
            import uvicorn

            from .service import create_app

            uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
            return 0
    except (OSError, ValueError, solver.HypothesisError, hg.BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
