"""Wire-format helpers: rationals as "p/q" strings, canonical JSON."""
from __future__ import annotations

import json
from fractions import Fraction

from .geometry import PolytopePoint, SimplexPoint, Triangulation
from .oracles import PiecewiseDensity, ValuationProfile


def frac_str(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise ValueError(f"expected a rational as 'p/q' string or int, got {s!r}")


def point_json(p: PolytopePoint):
    return [[frac_str(c) for c in f.coords] for f in p.factors]


def point_approx(p: PolytopePoint, digits: int = 4):
    return [[round(float(c), digits) for c in f.coords] for f in p.factors]


def parse_point(data) -> PolytopePoint:
    return PolytopePoint(
        tuple(SimplexPoint(tuple(parse_frac(c) for c in f)) for f in data)
    )


def triangulation_json(t: Triangulation):
    return {
        "ambient": {"kind": t.ambient.kind, "n": t.ambient.n, "k": t.ambient.k},
        "mesh": t.mesh,
        "vertices": [point_json(v) for v in t.vertices],
        "cells": [list(c) for c in t.cells],
        "owners": list(t.owners) if t.owners is not None else None,
    }


def profile_json(profile: ValuationProfile):
    return {
        "players": [
            {
                "id": p,
                "factors": [
                    {
                        "breakpoints": [frac_str(b) for b in d.breakpoints],
                        "densities": [frac_str(v) for v in d.values],
                    }
                    for d in profile.densities[p]
                ],
            }
            for p in profile.players
        ]
    }


def parse_profile(data) -> ValuationProfile:
    players = []
    densities = {}
    for i, entry in enumerate(data["players"]):
        try:
            pid = str(entry["id"])
            factors = tuple(
                PiecewiseDensity(
                    tuple(parse_frac(b) for b in f["breakpoints"]),
                    tuple(parse_frac(v) for v in f["densities"]),
                )
                for f in entry["factors"]
            )
        except (KeyError, ValueError) as exc:
            raise ValueError(f"players[{i}]: {exc}") from exc
        players.append(pid)
        densities[pid] = factors
    if len(set(players)) != len(players):
        raise ValueError("duplicate player ids")
    return ValuationProfile(tuple(players), densities)


def canonical_json(obj) -> str:
    """Deterministic JSON used for reports: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
