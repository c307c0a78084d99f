"""Player preference models.

Simulated players value (or dread) each cake/day through a strictly
positive piecewise-constant density on [0,1]. Strict positivity makes the
two behavioral axioms automatic:

* hungry: a zero-width piece has value 0, so preferred pieces always lie
  in the support of the division;
* prefer-empty: a zero-width shift has burden 0, strictly below every
  positive-width shift, so employees pick an empty shift when one exists.

Interactive (human) players are served elsewhere; this module also houses
the selection validation rules shared with that path.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .geometry import PolytopePoint, SimplexPoint, empty_set, support

MODE_SUBSET = "subset"
MODE_TUPLE_SUPPORT = "one-per-factor"
MODE_TUPLE_EMPTY = "one-per-factor-prefer-empty"


class InvalidSelectionError(ValueError):
    """A selection violated one of the preference axioms."""

    def __init__(self, rule: str, message: str):
        super().__init__(message)
        self.rule = rule


@dataclass(frozen=True)
class PiecewiseDensity:
    """Strictly positive step density on [0,1] given by breakpoints."""

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.breakpoints) < 2 or len(self.values) != len(self.breakpoints) - 1:
            raise ValueError("breakpoints/values lengths do not match")
        if self.breakpoints[0] != 0 or self.breakpoints[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v <= 0 for v in self.values):
            raise ValueError("densities must be strictly positive")

    def measure(self, a: Fraction, b: Fraction) -> Fraction:
        """Exact integral of the density over [a, b]."""
        total = Fraction(0)
        for lo, hi, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            left = max(a, lo)
            right = min(b, hi)
            if right > left:
                total += v * (right - left)
        return total


@dataclass(frozen=True)
class ValuationProfile:
    """Per player, one density per cake/day (k of them)."""

    players: tuple[str, ...]
    densities: dict[str, tuple[PiecewiseDensity, ...]]

    def factor_count(self) -> int:
        return len(next(iter(self.densities.values())))


def _piece_bounds(x: SimplexPoint):
    bounds = []
    acc = Fraction(0)
    for w in x.coords:
        bounds.append((acc, acc + w))
        acc += w
    return bounds


def piece_values(density: PiecewiseDensity, x: SimplexPoint) -> tuple[Fraction, ...]:
    """Value of each consecutive piece of a division under the density."""
    return tuple(density.measure(a, b) for a, b in _piece_bounds(x))


def cake_preference(
    profile: ValuationProfile, player: str, division: SimplexPoint, k: int
) -> frozenset[int]:
    """Most valuable subset of at most k supported pieces.

    Ties break lexicographically on the sorted subset, so the answer is
    deterministic. The result is a subset of the division's support.
    """
    density = profile.densities[player][0]
    values = piece_values(density, division)
    supp = sorted(support(division))
    size = min(k, len(supp))
    best = None
    best_val = None
    for combo in combinations(supp, size):
        val = sum(values[i] for i in combo)
        if best_val is None or val > best_val:
            best, best_val = combo, val
    return frozenset(best)


def multicake_preference(
    profile: ValuationProfile, player: str, division: PolytopePoint
) -> tuple[int, ...]:
    """Per cake, the most valuable supported piece (ties to lowest index)."""
    out = []
    for density, factor in zip(profile.densities[player], division.factors):
        values = piece_values(density, factor)
        supp = sorted(support(factor))
        out.append(max(supp, key=lambda i: (values[i], -i)))
    return tuple(out)


def shift_preference(
    profile: ValuationProfile, player: str, division: PolytopePoint
) -> tuple[int, ...]:
    """Per day, the least burdensome shift over all n shifts.

    Ties go to the lowest shift index; since burdens are strictly positive,
    any empty shift strictly beats every nonempty one.
    """
    out = []
    for density, factor in zip(profile.densities[player], division.factors):
        burdens = piece_values(density, factor)
        out.append(min(range(factor.n), key=lambda i: (burdens[i], i)))
    return tuple(out)


def validate_selection(mode: str, division: PolytopePoint, selection, k: int) -> None:
    """Raise InvalidSelectionError naming the violated rule, if any.

    Shared by the labeling layer (simulated oracles, contract check) and
    the live-session API (human answers, re-prompt path).
    """
    if mode == MODE_SUBSET:
        if not isinstance(selection, frozenset):
            selection = frozenset(selection)
        supp = support(division.factors[0])
        if len(selection) != min(k, len(supp)):
            raise InvalidSelectionError(
                "arity", f"expected {min(k, len(supp))} pieces, got {len(selection)}"
            )
        if not selection <= supp:
            raise InvalidSelectionError(
                "hungry", "selection includes an empty piece"
            )
        return
    selection = tuple(selection)
    if len(selection) != division.k:
        raise InvalidSelectionError(
            "arity", f"expected one choice per factor ({division.k}), got {len(selection)}"
        )
    for i, (choice, factor) in enumerate(zip(selection, division.factors)):
        if choice < 0 or choice >= factor.n:
            raise InvalidSelectionError("arity", f"factor {i} choice out of range")
        if mode == MODE_TUPLE_SUPPORT:
            if choice not in support(factor):
                raise InvalidSelectionError(
                    "hungry", f"factor {i}: chose an empty piece"
                )
        elif mode == MODE_TUPLE_EMPTY:
            empt = empty_set(factor)
            if empt and choice not in empt:
                raise InvalidSelectionError(
                    "prefer-empty",
                    f"factor {i}: an empty shift exists but a nonempty one was chosen",
                )


class SimulatedOracle:
    """Deterministic oracle over a valuation profile, cached per query."""

    def __init__(self, profile: ValuationProfile):
        self.profile = profile
        self._cache: dict = {}

    def select(self, player: str, mode: str, division: PolytopePoint, k: int):
        key = (player, mode, division)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if mode == MODE_SUBSET:
            sel = cake_preference(self.profile, player, division.factors[0], k)
        elif mode == MODE_TUPLE_SUPPORT:
            sel = multicake_preference(self.profile, player, division)
        elif mode == MODE_TUPLE_EMPTY:
            sel = shift_preference(self.profile, player, division)
        else:
            raise ValueError(f"unknown mode {mode}")
        validate_selection(mode, division, sel, k)
        self._cache[key] = sel
        return sel

    def ties(self, player: str, mode: str, division: PolytopePoint, k: int) -> bool:
        return selection_ties(self.profile, player, mode, division, k)


def selection_ties(
    profile: ValuationProfile, player: str, mode: str, division: PolytopePoint, k: int
) -> bool:
    """True when the player's optimum at this division is not unique."""
    if mode == MODE_SUBSET:
        density = profile.densities[player][0]
        values = piece_values(density, division.factors[0])
        supp = sorted(support(division.factors[0]))
        size = min(k, len(supp))
        totals = sorted(
            (sum(values[i] for i in combo) for combo in combinations(supp, size)),
            reverse=True,
        )
        return len(totals) > 1 and totals[0] == totals[1]
    for density, factor in zip(profile.densities[player], division.factors):
        scores = piece_values(density, factor)
        if mode == MODE_TUPLE_SUPPORT:
            cand = sorted(scores[i] for i in support(factor))
            cand.reverse()
        else:
            cand = sorted(scores)
        if len(cand) > 1 and cand[0] == cand[1]:
            return True
    return False


def random_profile(
    players, k: int, seed: int, max_segments: int = 4, grid: int = 20
) -> ValuationProfile:
    """Seeded random profile: 1-4 segments per factor, densities in [1, 10]."""
    rng = random.Random(seed)
    players = tuple(players)
    densities = {}
    for p in players:
        factors = []
        for _ in range(k):
            segs = rng.randint(1, max_segments)
            cuts = sorted(rng.sample(range(1, grid), segs - 1)) if segs > 1 else []
            breakpoints = (
                [Fraction(0)] + [Fraction(c, grid) for c in cuts] + [Fraction(1)]
            )
            values = [Fraction(rng.randint(1, 10)) for _ in range(segs)]
            factors.append(PiecewiseDensity(tuple(breakpoints), tuple(values)))
        densities[p] = tuple(factors)
    return ValuationProfile(players, densities)
