"""Solve pipelines: duplicate players, label a complete triangulation,
find a balanced cell, extract an allocation or shift cover, refine.

Three modes share the skeleton:

* cake: one cake, n pieces, subsets of k pieces; the guarantee is a set of
  players whose preferred k-piece sets are pairwise disjoint.
* cakes: k cakes of n pieces; selections are one piece per cake, the
  guarantee again pairwise disjoint.
* shifts: k days of n shifts; the output is a small set of employees whose
  selections cover all kn shifts.

Per round, the discrete guarantees hold exactly and are asserted; the
continuous limit of the underlying existence results is replaced by a
finite refinement loop with a stability tolerance (same satisfied players
or cover on consecutive rounds, division drift below epsilon).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import hypergraph as hg
from .geometry import (
    PolytopePoint,
    Triangulation,
    cell_barycenter,
    cell_barycenter_floats,
    complete_triangulation,
    empty_set,
)
from .labeling import (
    FLAVOR_DUAL,
    FLAVOR_SUPPORTWISE,
    build_subset_labeling,
    build_tuple_labeling,
    to_equivalent_sperner,
)
from .oracles import MODE_SUBSET, MODE_TUPLE_EMPTY, MODE_TUPLE_SUPPORT
from .serialize import frac_str, point_json

MODE_CAKE = "cake"
MODE_CAKES = "cakes"
MODE_SHIFTS = "shifts"

DEFAULT_EPSILON = Fraction(1, 10**6)


class HypothesisError(ValueError):
    """Problem parameters violate the mode's player-count hypothesis."""


class ExhaustionError(RuntimeError):
    """No balanced cell found: a labeling-condition bug, since existence
    is guaranteed for valid inputs."""


@dataclass(frozen=True)
class ProblemSpec:
    mode: str
    n: int
    k: int
    players: tuple[str, ...]
    mesh: int = 1
    refine_factor: int = 2
    max_rounds: int = 4
    epsilon: Fraction = DEFAULT_EPSILON
    seed: int | None = None

    @property
    def p(self) -> int:
        return len(self.players)

    def __post_init__(self):
        if self.mode not in (MODE_CAKE, MODE_CAKES, MODE_SHIFTS):
            raise HypothesisError(f"unknown mode {self.mode!r}")
        if self.n < 1 or self.k < 1 or self.p < 1:
            raise HypothesisError("need n, k, players >= 1")
        if self.mesh < 1 or self.max_rounds < 1 or self.refine_factor < 1:
            raise HypothesisError("need mesh, rounds, refine factor >= 1")
        if self.mode == MODE_CAKE and self.p > self.n:
            raise HypothesisError(
                f"cake mode requires players <= n ({self.p} > {self.n})"
            )
        owner_count = self.k * (self.n - 1) + 1
        if self.mode == MODE_CAKES and self.p > owner_count:
            raise HypothesisError(
                f"cakes mode requires players <= k(n-1)+1 ({self.p} > {owner_count})"
            )
        if self.mode == MODE_SHIFTS and self.p < owner_count:
            raise HypothesisError(
                f"shifts mode requires players >= k(n-1)+1 ({self.p} < {owner_count})"
            )

    @property
    def owner_count(self) -> int:
        if self.mode == MODE_CAKE:
            return self.n
        return self.k * (self.n - 1) + 1

    @property
    def geometry_k(self) -> int:
        return 1 if self.mode == MODE_CAKE else self.k


def duplicate_players(spec: ProblemSpec) -> tuple[str, ...]:
    """Owner -> player assignment, round robin over the player list.

    Cake mode needs n owners, the product modes k(n-1)+1; shift mode ends
    up using one copy each of the first k(n-1)+1 players.
    """
    count = spec.owner_count
    return tuple(spec.players[i % spec.p] for i in range(count))


def _ceil(num: int, den: int) -> int:
    return -(-num // den)


@dataclass(frozen=True)
class BalancedCellCertificate:
    cell_index: int
    vertex_labels: tuple[tuple[int, object], ...]  # (vertex index, label)
    edges: tuple[object, ...]                      # distinct labels
    weights: tuple[Fraction, ...]
    parts: int                                     # 1 => ground set [n]


def _label_edge(label, n: int, parts: int) -> frozenset[int]:
    if parts == 1:
        return frozenset(label)
    return frozenset(f * n + c for f, c in enumerate(label))


def _label_hypergraph(labels, n: int, parts: int) -> hg.Hypergraph:
    if parts == 1:
        return hg.hypergraph(n, [frozenset(l) for l in labels])
    partition = [range(f * n, (f + 1) * n) for f in range(parts)]
    return hg.hypergraph(
        parts * n, [_label_edge(l, n, parts) for l in labels], partition
    )


def balanced_cells(
    t: Triangulation,
    labeling,
    n: int,
    parts: int,
    anchor: PolytopePoint | None = None,
):
    """Lazily yield certificates of balanced cells in scan order.

    Labels are fetched lazily so that only visited vertices are ever
    queried. The scan order is the cell order, except that an anchor from
    the previous refinement round reorders cells by distance so the search
    stays near the division it is refining.
    """
    scan_order = range(len(t.cells))
    if anchor is not None:
        af = [float(c) for c in anchor.flat()]
        centers = cell_barycenter_floats(t.ambient.n, t.ambient.k, t.mesh)
        scan_order = sorted(
            scan_order,
            key=lambda ci: (
                max(abs(a - b) for a, b in zip(af, centers[ci])),
                ci,
            ),
        )
    full = frozenset(range(n * parts))
    for ci in scan_order:
        cell = t.cells[ci]
        labels = [labeling.label(v) for v in cell]
        distinct = list(dict.fromkeys(labels))
        union = frozenset()
        for l in distinct:
            union |= _label_edge(l, n, parts)
        if union != full:
            continue
        h = _label_hypergraph(distinct, n, parts)
        if not hg.has_perfect_fractional_matching(h):
            continue
        weights = hg.perfect_fractional_matching(h)
        assert weights is not None
        yield BalancedCellCertificate(
            ci,
            tuple(zip(cell, labels)),
            tuple(distinct),
            tuple(weights),
            parts,
        )


def find_balanced_cell(
    t: Triangulation,
    labeling,
    n: int,
    parts: int,
    anchor: PolytopePoint | None = None,
) -> BalancedCellCertificate:
    """First cell (in scan order) whose label set is balanced."""
    for cert in balanced_cells(t, labeling, n, parts, anchor):
        return cert
    raise ExhaustionError(
        "no balanced cell found; the labeling violates its flavor condition"
    )


def verify_certificate(cert: BalancedCellCertificate, n: int) -> bool:
    h = _label_hypergraph(cert.edges, n, cert.parts)
    return hg.verify_perfect_fractional_matching(h, cert.weights)


@dataclass(frozen=True)
class Allocation:
    satisfied: tuple[tuple[str, object], ...]  # (player, selection)
    matching_size: int


def _greedy_players(cert, matching, owner_map, owners, prefer):
    """Player-first-seen selection of one carrier per matched label.

    Among carriers whose player is still unused, ones mapping to preferred
    players (the previous round's satisfied set) win, then the lowest
    vertex index; an edge with no unused player is skipped. The classical
    bound |result| >= |matching| / copies-per-player is preserved for any
    preference order.
    """
    carriers: dict[object, list[int]] = {}
    for vi, lab in cert.vertex_labels:
        carriers.setdefault(lab, []).append(vi)
    used: set[str] = set()
    satisfied = []
    for ei in matching:
        lab = cert.edges[ei]
        candidates = [
            (owner_map[owners[vi]], vi) for vi in sorted(carriers[lab])
        ]
        pick = next(
            (pv for pv in candidates if pv[0] not in used and pv[0] in prefer),
            None,
        ) or next((pv for pv in candidates if pv[0] not in used), None)
        if pick is not None:
            used.add(pick[0])
            satisfied.append((pick[0], lab))
    return tuple(satisfied)


def extract_disjoint_allocation(
    cert: BalancedCellCertificate,
    owner_map: tuple[str, ...],
    owners: tuple[int, ...],
    n: int,
    k: int,
    mode: str,
    prefer: frozenset = frozenset(),
) -> Allocation:
    """Disjoint selections for distinct players from a balanced cell.

    A maximum matching of the cell's label hypergraph gives pairwise
    disjoint selections; matched labels are assigned to carrying vertices
    by a player-first-seen greedy, which loses at most the duplication
    factor. Which maximum matching (and which carrier) is unspecified by
    the guarantee, so among them the ones agreeing with the previous
    round's satisfied players are preferred: refinement then looks for a
    recurring satisfied set, the finite analogue of picking a convergent
    subsequence.
    """
    parts = cert.parts
    h = _label_hypergraph(cert.edges, n, parts)
    matchings = hg.all_max_matchings(h)
    if mode == MODE_CAKE:
        kk = k * k - k + 1
        floor_bound = n if kk == 1 else _ceil(n, kk)
    else:
        floor_bound = n if k == 1 else _ceil(n, k - 1)
    assert len(matchings[0]) >= floor_bound, (
        f"matching {len(matchings[0])} below the guaranteed {floor_bound}"
    )
    best = None
    best_key = None
    for matching in matchings:
        satisfied = _greedy_players(cert, matching, owner_map, owners, prefer)
        players = sorted(p for p, _ in satisfied)
        key = (-len(satisfied), -len(set(players) & prefer), players)
        if best_key is None or key < best_key:
            best, best_key = satisfied, key
    return Allocation(best, len(matchings[0]))


@dataclass(frozen=True)
class ShiftCover:
    cover: tuple[tuple[str, tuple[int, ...]], ...]  # (player, shift tuple)
    gallai_exact: bool


def extract_shift_cover(
    cert: BalancedCellCertificate,
    owner_map: tuple[str, ...],
    owners: tuple[int, ...],
    n: int,
    k: int,
    prefer: frozenset = frozenset(),
) -> ShiftCover:
    """Employees covering all kn shifts, via the dual of the label set.

    k = 2 goes through the exact bipartite minimum edge cover (size n);
    otherwise greedy covering of the dual certifies size <= n(1 + ln k).
    Carrier choice prefers the previous round's employees.
    """
    h = _label_hypergraph(cert.edges, n, cert.parts)
    carriers: dict[object, list[int]] = {}
    for vi, lab in cert.vertex_labels:
        carriers.setdefault(lab, []).append(vi)

    def assemble(chosen):
        cover = []
        taken: set[str] = set()
        for ei in chosen:
            lab = cert.edges[ei]
            candidates = [
                (owner_map[owners[vi]], vi) for vi in sorted(carriers[lab])
            ]
            pick = next(
                (pv for pv in candidates if pv[0] not in taken and pv[0] in prefer),
                None,
            ) or next(pv for pv in candidates if pv[0] not in taken)
            taken.add(pick[0])
            cover.append((pick[0], tuple(lab)))
        return tuple(cover)

    if k == 2:
        # Gallai equality: the dual's cover number equals its fractional
        # one, which is n here; minimum edge covers are exactly the
        # perfect matchings of the label graph, so they can be enumerated
        # and the one agreeing best with the previous round kept.
        tau_star, _ = hg.fractional_cover_number(hg.dualize(h))
        matchings = hg.all_max_matchings(h)
        assert Fraction(len(matchings[0])) == tau_star == n
        best = None
        best_key = None
        for matching in matchings:
            cover = assemble(matching)
            players = sorted(p for p, _ in cover)
            key = (frozenset(players) != prefer, -len(set(players) & prefer), players)
            if best_key is None or key < best_key:
                best, best_key = cover, key
        cover = best
        gallai = True
    else:
        dual = hg.dualize(h)
        tau_star, _ = hg.fractional_cover_number(dual)
        assert tau_star == n  # k-uniform with a perfect fractional matching
        chosen = tuple(sorted(hg.greedy_cover(dual, tau_star=tau_star)))
        cover = assemble(chosen)
        gallai = False
    players = [p for p, _ in cover]
    assert len(set(players)) == len(players)
    hit = {(f, c) for _, lab in cover for f, c in enumerate(lab)}
    assert hit == {(f, i) for f in range(k) for i in range(n)}, "shifts uncovered"
    bound = n if k <= 2 else hg.log_cover_bound_floor(Fraction(n), k)
    assert len(cover) <= bound
    return ShiftCover(tuple(cover), gallai)


def guaranteed_bound(spec: ProblemSpec) -> tuple[int, str]:
    """The per-round guarantee and which form of it applies.

    Modes cake/cakes: a lower bound on disjointly satisfied players, the
    stronger form when the player count divides the owner count. Shifts:
    an upper bound on the cover size (n for k <= 2, floor(n(1+ln k)) else).
    """
    p, n, k = spec.p, spec.n, spec.k
    if spec.mode == MODE_CAKE:
        kk = k * k - k + 1
        if n % p == 0:
            return _ceil(p, kk), "exact-divisor"
        return _ceil(p, 2 * kk), "halved"
    if spec.mode == MODE_CAKES:
        kk = max(k * (k - 1), 1)
        if spec.owner_count % p == 0:
            return _ceil(p, kk), "exact-divisor"
        return _ceil(p, 2 * kk), "halved"
    if k <= 2:
        return n, "gallai"
    return hg.log_cover_bound_floor(Fraction(n), k), "log-cover"


@dataclass(frozen=True)
class RoundResult:
    mesh: int
    cert: BalancedCellCertificate
    division: PolytopePoint
    outcome: tuple[tuple[str, object], ...]   # satisfied players or cover
    achieved: int
    gallai_exact: bool = False

    def player_set(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.outcome)


# Balanced cells inspected per round while trying to reproduce the previous
# round's satisfied set before falling back on the most frequent candidate.
CONTINUATION_WINDOW = 400


def run_round(
    spec: ProblemSpec,
    oracle,
    mesh: int,
    anchor: PolytopePoint | None = None,
    prev_players: frozenset = frozenset(),
) -> RoundResult:
    """One full pipeline pass at a fixed mesh; bounds asserted.

    When a previous round's satisfied set is supplied, the first few
    balanced cells near the anchor are inspected for one that realizes the
    same players again (the finite analogue of the convergent-subsequence
    step); the first balanced cell is used when none of them does.
    """
    t = complete_triangulation(spec.n, spec.geometry_k, mesh)
    owner_map = duplicate_players(spec)
    assert len(owner_map) == t.dim + 1
    if spec.mode == MODE_CAKE:
        labeling = build_subset_labeling(t, oracle, owner_map, spec.k)
        parts = 1
    elif spec.mode == MODE_CAKES:
        labeling = build_tuple_labeling(t, oracle, owner_map, FLAVOR_SUPPORTWISE)
        parts = spec.k
    else:
        dual = build_tuple_labeling(t, oracle, owner_map, FLAVOR_DUAL)
        labeling = to_equivalent_sperner(dual, t)
        parts = spec.k
    guaranteed, _ = guaranteed_bound(spec)

    def finish(cert) -> RoundResult:
        division = cell_barycenter(t, cert.cell_index)
        if spec.mode == MODE_SHIFTS:
            cover = extract_shift_cover(
                cert, owner_map, t.owners, spec.n, spec.k, prev_players
            )
            achieved = len(cover.cover)
            assert achieved <= guaranteed
            return RoundResult(
                mesh, cert, division, cover.cover, achieved, cover.gallai_exact
            )
        alloc = extract_disjoint_allocation(
            cert, owner_map, t.owners, spec.n, spec.k, spec.mode, prev_players
        )
        achieved = len(alloc.satisfied)
        assert achieved >= guaranteed, (
            f"achieved {achieved} below guaranteed {guaranteed}"
        )
        _assert_disjoint(alloc.satisfied, spec.mode)
        return RoundResult(mesh, cert, division, alloc.satisfied, achieved)

    window = CONTINUATION_WINDOW if prev_players else 1
    candidates: list[RoundResult] = []
    freq: dict[frozenset, int] = {}
    for cert in balanced_cells(t, labeling, spec.n, parts, anchor):
        assert verify_certificate(cert, spec.n)
        result = finish(cert)
        if not prev_players or result.player_set() == prev_players:
            return result
        candidates.append(result)
        freq[result.player_set()] = freq.get(result.player_set(), 0) + 1
        window -= 1
        if window <= 0:
            break
    if not candidates:
        raise ExhaustionError(
            "no balanced cell found; the labeling violates its flavor condition"
        )
    # The previous satisfied set is not realizable nearby: move to the most
    # frequent candidate set, which is the likeliest to persist under
    # further refinement (earliest cell among ties).
    target = max(freq, key=lambda s: freq[s])
    return next(r for r in candidates if r.player_set() == target)


def _assert_disjoint(satisfied, mode) -> None:
    if mode == MODE_CAKE:
        taken: set[int] = set()
        for _, lab in satisfied:
            assert not (set(lab) & taken), "selections overlap"
            taken |= set(lab)
    else:
        for f in range(len(satisfied[0][1]) if satisfied else 0):
            comps = [lab[f] for _, lab in satisfied]
            assert len(set(comps)) == len(comps), "selections overlap"


def _max_drift(a: PolytopePoint, b: PolytopePoint) -> Fraction:
    return max(abs(x - y) for x, y in zip(a.flat(), b.flat()))


def _selection_json(mode, selection):
    if mode == MODE_CAKE:
        return sorted(selection)
    return list(selection)


def _consistency_mode(mode: str) -> str:
    return {
        MODE_CAKE: MODE_SUBSET,
        MODE_CAKES: MODE_TUPLE_SUPPORT,
        MODE_SHIFTS: MODE_TUPLE_EMPTY,
    }[mode]


def _selection_consistent(mode, division, reported, answered) -> bool:
    if mode == MODE_CAKE:
        return frozenset(reported) == frozenset(answered)
    if mode == MODE_CAKES:
        return tuple(reported) == tuple(answered)
    for rep, ans, factor in zip(reported, answered, division.factors):
        if rep == ans:
            continue
        empt = empty_set(factor)
        # Indifference between empty shifts: equivalent labelings may move
        # a component anywhere inside the empty set.
        if rep in empt and ans in empt:
            continue
        return False
    return True


def refine_until_stable(spec: ProblemSpec, oracle) -> dict:
    """Run the pipeline over the mesh schedule until the outcome is stable.

    Stability: the satisfied-player set (or covering employee set) agrees
    on two consecutive rounds and the division drift is below epsilon in
    max norm. On budget exhaustion the best round is reported and flagged
    unstable. The final report re-queries every reported player at the
    final division; disagreements set the tie-hit flag when the oracle is
    at a tie there, otherwise a consistency flag.
    """
    guaranteed, bound_form = guaranteed_bound(spec)
    rounds: list[RoundResult] = []
    trace = []
    stable = False
    mesh = spec.mesh
    prev: RoundResult | None = None
    for _ in range(spec.max_rounds):
        rr = run_round(
            spec,
            oracle,
            mesh,
            prev.division if prev else None,
            prev.player_set() if prev else frozenset(),
        )
        drift = _max_drift(rr.division, prev.division) if prev else None
        rounds.append(rr)
        trace.append(
            {
                "round": len(rounds),
                "mesh": rr.mesh,
                "cell": rr.cert.cell_index,
                "achieved": rr.achieved,
                "players": sorted(rr.player_set()),
                "outcome": [
                    {"player": p, "selection": _selection_json(spec.mode, lab)}
                    for p, lab in rr.outcome
                ],
                "division": point_json(rr.division),
                "drift": frac_str(drift) if drift is not None else None,
            }
        )
        if (
            prev is not None
            and rr.player_set() == prev.player_set()
            and drift < spec.epsilon
        ):
            stable = True
            break
        prev = rr
        mesh *= spec.refine_factor

    if stable:
        final = rounds[-1]
    elif spec.mode == MODE_SHIFTS:
        final = min(reversed(rounds), key=lambda r: r.achieved)
    else:
        final = max(reversed(rounds), key=lambda r: r.achieved)

    tie_hit = False
    mismatch = False
    consistency = []
    cmode = _consistency_mode(spec.mode)
    for player, selection in final.outcome:
        answered = oracle.select(player, cmode, final.division, spec.k)
        ok = _selection_consistent(spec.mode, final.division, selection, answered)
        tied = bool(oracle.ties(player, cmode, final.division, spec.k))
        consistency.append({"player": player, "consistent": ok, "tie": tied})
        if not ok:
            if tied:
                tie_hit = True
            else:
                mismatch = True

    report = {
        "mode": spec.mode,
        "n": spec.n,
        "k": spec.k,
        "p": spec.p,
        "config": {
            "mesh": spec.mesh,
            "refine_factor": spec.refine_factor,
            "rounds": spec.max_rounds,
            "epsilon": frac_str(spec.epsilon),
            "seed": spec.seed,
        },
        "division": point_json(final.division),
        "bound": {
            "guaranteed": guaranteed,
            "achieved": final.achieved,
            "form": bound_form,
        },
        "certificate": {
            "cell": final.cert.cell_index,
            "mesh": final.mesh,
            "labels": [
                _selection_json(spec.mode, lab) for lab in final.cert.edges
            ],
            "weights": [frac_str(w) for w in final.cert.weights],
        },
        "trace": trace,
        "flags": {
            "unstable": not stable,
            "tie_hit": tie_hit,
            "consistency_mismatch": mismatch,
        },
        "consistency": consistency,
    }
    key = "cover" if spec.mode == MODE_SHIFTS else "satisfied"
    report[key] = [
        {"player": p, "selection": _selection_json(spec.mode, lab)}
        for p, lab in final.outcome
    ]
    return report
