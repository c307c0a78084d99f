"""Exact hypergraph kernel: fractional matchings, matchings, covers.

Feasibility and optima are certified with exact rational arithmetic; no
certificate leaves this module without being re-verified by direct
summation. Vertices are 0-based ints; edges are frozensets of vertices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath

from . import lp
from .linalg import solve_unique, system_consistent, gauss_eliminate


class BudgetExceededError(RuntimeError):
    """Exact search exceeded its node budget; caller may fall back."""


class IsolatedVertexError(ValueError):
    """Operation requires every vertex to lie in at least one edge."""


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: tuple[frozenset[int], ...]
    partition: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        for e in self.edges:
            if not e:
                raise ValueError("empty edge")
            if any(v < 0 or v >= self.vertex_count for v in e):
                raise ValueError("edge vertex out of range")
        if self.partition is not None:
            seen = sorted(v for part in self.partition for v in part)
            if seen != list(range(self.vertex_count)):
                raise ValueError("partition must cover the vertex set exactly")
            for e in self.edges:
                for part in self.partition:
                    if len(e & set(part)) != 1:
                        raise ValueError(
                            "declared partite hypergraph has an edge not "
                            "meeting every class exactly once"
                        )

    @property
    def rank(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.vertex_count)), default=0)

    def is_uniform(self, k: int) -> bool:
        return all(len(e) == k for e in self.edges)


@dataclass(frozen=True)
class DualHypergraph(Hypergraph):
    """The incidence transpose of a primal hypergraph."""

    primal: Hypergraph | None = None


def hypergraph(vertex_count, edges, partition=None) -> Hypergraph:
    part = tuple(tuple(p) for p in partition) if partition is not None else None
    return Hypergraph(vertex_count, tuple(frozenset(e) for e in edges), part)


def dualize(h: Hypergraph) -> DualHypergraph:
    """Swap vertices and edges. Requires no isolated vertices: an isolated
    vertex would turn into an empty dual edge."""
    dual_edges = []
    for v in range(h.vertex_count):
        e = frozenset(i for i, edge in enumerate(h.edges) if v in edge)
        if not e:
            raise IsolatedVertexError(f"vertex {v} lies in no edge")
        dual_edges.append(e)
    return DualHypergraph(len(h.edges), tuple(dual_edges), None, primal=h)


def _incidence(h: Hypergraph):
    """Vertex-by-edge 0/1 incidence matrix as rows of ints."""
    return [
        [1 if v in e else 0 for e in h.edges] for v in range(h.vertex_count)
    ]


def verify_perfect_fractional_matching(h: Hypergraph, weights) -> bool:
    """Direct summation check: per-vertex weight sums all exactly 1."""
    if len(weights) != len(h.edges):
        return False
    if any(w < 0 or w > 1 for w in weights):
        return False
    for v in range(h.vertex_count):
        if sum(w for e, w in zip(h.edges, weights) if v in e) != 1:
            return False
    return True


def _pfm_basic_solutions(h: Hypergraph, first_only=False):
    """Basic feasible solutions of {f >= 0 : A f = 1} by basis enumeration.

    The polytope is bounded and pointed, so it is nonempty iff some basis
    yields a nonnegative solution. Instances here are tiny (edges bounded
    by dim+1 of the ambient polytope), so enumeration is exact and cheap.
    """
    a = _incidence(h)
    ones = [1] * h.vertex_count
    if not system_consistent(a, ones):
        return []
    aug = [[Fraction(v) for v in row] + [Fraction(0)] for row in a]
    _, pivots = gauss_eliminate(aug)
    rank = len(pivots)
    ne = len(h.edges)
    found = []
    seen = set()
    for cols in combinations(range(ne), rank):
        sub = [[a[r][c] for c in cols] for r in range(h.vertex_count)]
        sol = solve_unique(sub, ones)
        if sol is None or any(v < 0 for v in sol):
            continue
        full = [Fraction(0)] * ne
        for c, v in zip(cols, sol):
            full[c] = v
        key = tuple(full)
        if key not in seen:
            seen.add(key)
            found.append(full)
            if first_only:
                return found
    return found


def has_perfect_fractional_matching(h: Hypergraph) -> bool:
    if not h.edges:
        return h.vertex_count == 0
    return bool(_pfm_basic_solutions(h, first_only=True))


def perfect_fractional_matching(h: Hypergraph):
    """Canonical perfect fractional matching, or None when none exists.

    The returned weights are the average of all basic feasible solutions of
    the perfect-matching system: deterministic, invariant under symmetries
    of the instance, and exactly verified before return.
    """
    if not h.edges:
        return None
    sols = _pfm_basic_solutions(h)
    if not sols:
        return None
    count = len(sols)
    avg = tuple(sum(col) / count for col in zip(*sols))
    assert verify_perfect_fractional_matching(h, avg)
    return avg


def fractional_matching_number(h: Hypergraph):
    """Exact nu*: max total weight with per-vertex sums <= 1.

    Returns (value, weights)."""
    a = _incidence(h)
    res = lp.solve_lp(
        [1] * len(h.edges),
        a,
        [lp.LE] * h.vertex_count,
        [1] * h.vertex_count,
        maximize=True,
    )
    assert res.status == lp.OPTIMAL
    for v in range(h.vertex_count):
        assert sum(w for e, w in zip(h.edges, res.x) if v in e) <= 1
    return res.value, res.x


def fractional_cover_number(h: Hypergraph):
    """Exact tau*: min total vertex weight with per-edge sums >= 1.

    Returns (value, weights)."""
    rows = [[1 if v in e else 0 for v in range(h.vertex_count)] for e in h.edges]
    res = lp.solve_lp(
        [1] * h.vertex_count,
        rows,
        [lp.GE] * len(h.edges),
        [1] * len(h.edges),
        maximize=False,
    )
    assert res.status == lp.OPTIMAL
    for e in h.edges:
        assert sum(res.x[v] for v in e) >= 1
    return res.value, res.x


def max_matching(h: Hypergraph, node_budget: int = 10**6) -> tuple[int, ...]:
    """A maximum matching (edge indices), exact branch and bound.

    Edges are explored in increasing degree-sum order for faster pruning;
    the result is still exact. Raises BudgetExceededError past the budget.
    """
    deg = [h.degree(v) for v in range(h.vertex_count)]
    order = sorted(
        range(len(h.edges)), key=lambda i: (sum(deg[v] for v in h.edges[i]), i)
    )
    edges = [h.edges[i] for i in order]
    ne = len(edges)

    def greedy(start, used):
        chosen = []
        occupied = set(used)
        for i in range(start, ne):
            if not (edges[i] & occupied):
                chosen.append(i)
                occupied |= edges[i]
        return chosen

    best = greedy(0, set())
    nodes = 0

    def search(i, chosen, used):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError(f"matching search exceeded {node_budget} nodes")
        if i == ne:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        remaining = sum(1 for j in range(i, ne) if not (edges[j] & used))
        if len(chosen) + remaining <= len(best):
            return
        if not (edges[i] & used):
            chosen.append(i)
            search(i + 1, chosen, used | edges[i])
            chosen.pop()
        search(i + 1, chosen, used)

    search(0, [], set())
    picked = sorted(order[i] for i in best)
    occupied: set[int] = set()
    for i in picked:
        assert not (h.edges[i] & occupied)
        occupied |= h.edges[i]
    return tuple(picked)


def all_max_matchings(
    h: Hypergraph, node_budget: int = 10**6, cap: int = 256
) -> tuple[tuple[int, ...], ...]:
    """All maximum matchings (up to cap), each as sorted edge indices.

    Exhaustive over subsets of the (tiny) edge set; deterministic order.
    """
    nu = len(max_matching(h, node_budget))
    ne = len(h.edges)
    out = []

    def search(i, chosen, used):
        if len(out) >= cap:
            return
        if len(chosen) == nu:
            out.append(tuple(chosen))
            return
        if i == ne or len(chosen) + (ne - i) < nu:
            return
        if not (h.edges[i] & used):
            chosen.append(i)
            search(i + 1, chosen, used | h.edges[i])
            chosen.pop()
        search(i + 1, chosen, used)

    search(0, [], set())
    return tuple(out)


def exact_min_cover(h: Hypergraph, node_budget: int = 10**6) -> tuple[int, ...]:
    """A minimum vertex cover (exact branch and bound on uncovered edges)."""
    best = sorted(set(v for e in h.edges for v in e))
    nodes = 0

    def search(chosen):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError(f"cover search exceeded {node_budget} nodes")
        if len(chosen) >= len(best):
            return
        target = next((e for e in h.edges if not (e & chosen)), None)
        if target is None:
            best = sorted(chosen)
            return
        for v in sorted(target):
            chosen.add(v)
            search(chosen)
            chosen.remove(v)

    search(set())
    return tuple(best)


@dataclass(frozen=True)
class FurediReport:
    nu: int
    nu_star: Fraction
    rank: int
    bound: Fraction
    partite_bound: Fraction | None
    ok: bool


def check_furedi(h: Hypergraph, node_budget: int = 10**6) -> FurediReport:
    """Check nu >= nu*/(r-1+1/r), and nu >= nu*/(r-1) when declared r-partite."""
    r = h.rank
    if r < 2:
        raise ValueError("rank must be at least 2")
    nu = len(max_matching(h, node_budget))
    nu_star, _ = fractional_matching_number(h)
    bound = nu_star / (r - 1 + Fraction(1, r))
    ok = Fraction(nu) >= bound
    partite_bound = None
    if h.partition is not None and len(h.partition) == r:
        partite_bound = nu_star / (r - 1)
        ok = ok and Fraction(nu) >= partite_bound
    return FurediReport(nu, nu_star, r, bound, partite_bound, ok)


def log_cover_bound_floor(mult: Fraction, d: int) -> int:
    """floor(mult * (1 + ln d)) as an exact integer, d >= 1.

    For d >= 2 the value is irrational whenever mult != 0, so the floor is
    unambiguous; it is computed at 60 digits and sanity-checked.
    """
    mult = Fraction(mult)
    if d <= 1:
        return mult.numerator // mult.denominator
    with mpmath.workdps(60):
        x = mpmath.mpf(mult.numerator) / mult.denominator * (1 + mpmath.log(d))
        f = int(mpmath.floor(x))
        if not (x - f > mpmath.mpf("1e-40") and (f + 1) - x > mpmath.mpf("1e-40")):
            raise ArithmeticError("log bound too close to an integer to floor safely")
    return f


def greedy_cover(h: Hypergraph, tau_star: Fraction | None = None) -> tuple[int, ...]:
    """Greedy vertex cover: most uncovered edges first, ties to lowest index.

    When tau_star is supplied, the classical guarantee
    size <= (1 + ln maxdeg) * tau_star is asserted on the result.
    """
    if any(not e for e in h.edges):
        raise ValueError("empty edge cannot be covered")
    uncovered = set(range(len(h.edges)))
    cover: list[int] = []
    while uncovered:
        gains = [
            sum(1 for i in uncovered if v in h.edges[i])
            for v in range(h.vertex_count)
        ]
        v = max(range(h.vertex_count), key=lambda u: (gains[u], -u))
        if gains[v] == 0:
            raise AssertionError("uncoverable edge remained")
        cover.append(v)
        uncovered = {i for i in uncovered if v not in h.edges[i]}
    for e in h.edges:
        assert e & set(cover)
    if tau_star is not None:
        d = h.max_degree()
        assert len(cover) <= log_cover_bound_floor(tau_star, max(d, 1))
    return tuple(cover)


def _bipartite_parts(h: Hypergraph):
    if h.partition is None or len(h.partition) != 2:
        raise ValueError("expected a declared bipartite graph")
    if not h.is_uniform(2):
        raise ValueError("expected 2-uniform edges")
    return h.partition


def bipartite_max_matching(h: Hypergraph) -> tuple[int, ...]:
    """Maximum matching of a bipartite graph via augmenting paths."""
    left, right = _bipartite_parts(h)
    left_set = set(left)
    adj: dict[int, list[int]] = {v: [] for v in left}
    edge_of = {}
    for i, e in enumerate(h.edges):
        (u,) = tuple(e & left_set)
        (w,) = tuple(e - left_set)
        adj[u].append(w)
        edge_of.setdefault((u, w), i)
    for u in adj:
        adj[u] = sorted(set(adj[u]))
    match_right: dict[int, int] = {}

    def augment(u, seen):
        for w in adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in match_right or augment(match_right[w], seen):
                match_right[w] = u
                return True
        return False

    for u in sorted(adj):
        augment(u, set())
    return tuple(sorted(edge_of[(u, w)] for w, u in match_right.items()))


def bipartite_min_edge_cover(h: Hypergraph) -> tuple[int, ...]:
    """Minimum edge cover of a bipartite graph (edge indices).

    Equivalently a minimum cover of the dual hypergraph; its size equals
    |V| - nu and the fractional optimum of the dual, which is asserted.
    """
    for v in range(h.vertex_count):
        if h.degree(v) == 0:
            raise IsolatedVertexError(f"vertex {v} is isolated")
    matching = bipartite_max_matching(h)
    covered = set()
    for i in matching:
        covered |= h.edges[i]
    chosen = set(matching)
    for v in range(h.vertex_count):
        if v not in covered:
            i = next(i for i, e in enumerate(h.edges) if v in e)
            chosen.add(i)
            covered |= h.edges[i]
    cover = tuple(sorted(chosen))
    assert len(cover) == h.vertex_count - len(matching)
    tau_star, _ = fractional_cover_number(dualize(h))
    assert Fraction(len(cover)) == tau_star
    return cover
