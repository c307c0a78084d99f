import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fairdiv import hypergraph as hg


def worked_example():
    """Six vertices 1,2,3 and their barred partners; five pair edges."""
    return hg.hypergraph(6, [{0, 3}, {1, 3}, {0, 4}, {1, 4}, {2, 5}])


def brute_force_nu(h):
    best = 0
    for r in range(len(h.edges), 0, -1):
        for combo in itertools.combinations(range(len(h.edges)), r):
            sets = [h.edges[i] for i in combo]
            if all(
                not (a & b) for a, b in itertools.combinations(sets, 2)
            ):
                return r
    return best


def brute_force_tau(h):
    verts = sorted(set(v for e in h.edges for v in e))
    for r in range(len(verts) + 1):
        for combo in itertools.combinations(verts, r):
            cs = set(combo)
            if all(e & cs for e in h.edges):
                return r
    return len(verts)


def random_hypergraph(rng, max_rank=3, max_edges=12, nv=None):
    nv = nv or rng.randint(3, 8)
    ne = rng.randint(1, max_edges)
    edges = []
    for _ in range(ne):
        size = rng.randint(1, max_rank)
        edges.append(frozenset(rng.sample(range(nv), min(size, nv))))
    used = sorted(set(v for e in edges for v in e))
    remap = {v: i for i, v in enumerate(used)}
    return hg.hypergraph(len(used), [frozenset(remap[v] for v in e) for e in edges])


# -- perfect fractional matchings -------------------------------------------

def test_worked_example_weights_exact():
    w = hg.perfect_fractional_matching(worked_example())
    assert w == (
        Fraction(1, 2),
        Fraction(1, 2),
        Fraction(1, 2),
        Fraction(1, 2),
        Fraction(1),
    )


def test_pfm_single_full_edge():
    h = hg.hypergraph(3, [{0, 1, 2}])
    assert hg.perfect_fractional_matching(h) == (Fraction(1),)


def test_pfm_uncoverable_vertex():
    h = hg.hypergraph(2, [{0}])
    assert hg.perfect_fractional_matching(h) is None
    assert not hg.has_perfect_fractional_matching(h)


def test_pfm_verified_by_summation():
    h = worked_example()
    w = hg.perfect_fractional_matching(h)
    assert hg.verify_perfect_fractional_matching(h, w)
    assert not hg.verify_perfect_fractional_matching(h, (1, 0, 0, 1, 0))


# -- fractional matching / cover numbers ------------------------------------

def brute_force_nu_star_triangle():
    """Oracle: enumerate vertices of the tiny LP polytope for the triangle."""
    best = Fraction(0)
    # all basic points of {f >= 0, f_i + f_j <= 1}: intersect 3 of 6 bounds
    for vals in itertools.product([Fraction(0), Fraction(1), Fraction(1, 2)], repeat=3):
        if all(vals[i] + vals[j] <= 1 for i, j in [(0, 1), (1, 2), (0, 2)]):
            best = max(best, sum(vals))
    return best


def test_triangle_nu_star():
    tri = hg.hypergraph(3, [{0, 1}, {1, 2}, {0, 2}])
    val, w = hg.fractional_matching_number(tri)
    assert val == brute_force_nu_star_triangle() == Fraction(3, 2)


def test_perfect_matching_value():
    h = hg.hypergraph(6, [{0, 1}, {2, 3}, {4, 5}])
    val, _ = hg.fractional_matching_number(h)
    assert val == 3


def test_worked_example_nu_star_rank_equality():
    # uniform hypergraphs with a perfect fractional matching: nu* = |V|/n
    h = worked_example()
    val, _ = hg.fractional_matching_number(h)
    assert val == Fraction(6, 2)


def test_uniform_pfm_implies_equality():
    rng = random.Random(7)
    found = 0
    while found < 50:
        n = rng.choice([2, 3])
        h = random_hypergraph(rng, max_rank=n, max_edges=10)
        if not h.is_uniform(n) or not hg.has_perfect_fractional_matching(h):
            continue
        found += 1
        val, _ = hg.fractional_matching_number(h)
        assert val == Fraction(h.vertex_count, n)


# -- integral matching -------------------------------------------------------

def test_max_matching_simple():
    h = hg.hypergraph(4, [{0, 1}, {2, 3}, {0, 2}])
    m = hg.max_matching(h)
    assert len(m) == 2


def test_max_matching_triangle():
    tri = hg.hypergraph(3, [{0, 1}, {1, 2}, {0, 2}])
    assert len(hg.max_matching(tri)) == 1


def test_max_matching_matches_brute_force():
    rng = random.Random(99)
    for _ in range(30):
        h = random_hypergraph(rng, max_rank=3, max_edges=10)
        assert len(hg.max_matching(h)) == brute_force_nu(h)


def test_max_matching_budget():
    h = hg.hypergraph(12, [frozenset({i, j}) for i in range(12) for j in range(i + 1, 12)])
    with pytest.raises(hg.BudgetExceededError):
        hg.max_matching(h, node_budget=5)


def test_all_max_matchings():
    h = hg.hypergraph(4, [{0, 1}, {2, 3}, {0, 2}, {1, 3}])
    ms = hg.all_max_matchings(h)
    assert all(len(m) == 2 for m in ms)
    assert (0, 1) in ms and (2, 3) in ms


# -- Furedi bound ------------------------------------------------------------

def test_furedi_triangle():
    tri = hg.hypergraph(3, [{0, 1}, {1, 2}, {0, 2}])
    rep = hg.check_furedi(tri)
    assert rep.ok
    assert rep.nu == 1 and rep.nu_star == Fraction(3, 2)
    assert rep.bound == Fraction(3, 2) / Fraction(3, 2)


def test_furedi_bipartite_equality():
    h = hg.hypergraph(
        4, [{0, 2}, {0, 3}, {1, 3}], partition=[(0, 1), (2, 3)]
    )
    rep = hg.check_furedi(h)
    assert rep.ok
    assert rep.partite_bound is not None
    assert Fraction(rep.nu) >= rep.partite_bound


def test_furedi_matching_only():
    h = hg.hypergraph(4, [{0, 1}, {2, 3}])
    rep = hg.check_furedi(h)
    assert rep.ok and Fraction(rep.nu) == rep.nu_star


def test_furedi_random_instances():
    rng = random.Random(5)
    checked = 0
    while checked < 50:
        h = random_hypergraph(rng, max_rank=3, max_edges=12)
        if h.rank < 2:
            continue
        checked += 1
        rep = hg.check_furedi(h)
        assert rep.ok
        assert rep.nu == brute_force_nu(h)


def test_duality_sandwich_random():
    rng = random.Random(17)
    for _ in range(50):
        h = random_hypergraph(rng, max_rank=3, max_edges=10)
        nu = len(hg.max_matching(h))
        nu_star, _ = hg.fractional_matching_number(h)
        tau_star, _ = hg.fractional_cover_number(h)
        tau = len(hg.exact_min_cover(h))
        assert Fraction(nu) <= nu_star == tau_star <= Fraction(tau)


# -- duals ---------------------------------------------------------------------

def test_dualize_single_edge():
    h = hg.hypergraph(2, [{0, 1}])
    d = hg.dualize(h)
    assert d.vertex_count == 1
    assert sorted(d.edges) == [frozenset({0}), frozenset({0})]


def test_dualize_worked_example():
    h = worked_example()
    d = hg.dualize(h)
    assert d.vertex_count == 5
    assert len(d.edges) == 6
    # dual edge of each primal vertex = its incidence list
    for v in range(6):
        assert d.edges[v] == frozenset(
            i for i, e in enumerate(h.edges) if v in e
        )


def test_dualize_involution():
    h = worked_example()
    dd = hg.dualize(hg.dualize(h))
    assert dd.vertex_count == h.vertex_count
    assert tuple(dd.edges) == tuple(h.edges)


def test_dualize_uniform_degree():
    h = hg.hypergraph(4, [{0, 1, 2}, {1, 2, 3}, {0, 2, 3}])
    d = hg.dualize(h)
    assert all(d.degree(v) == 3 for v in range(d.vertex_count))


def test_dualize_isolated_vertex():
    with pytest.raises(hg.IsolatedVertexError):
        hg.dualize(hg.hypergraph(3, [{0, 1}]))


# -- covers ---------------------------------------------------------------------

def test_greedy_cover_star():
    h = hg.hypergraph(4, [{0, 1}, {0, 2}, {0, 3}])
    assert hg.greedy_cover(h) == (0,)


def fano_plane():
    lines = [
        {0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5},
    ]
    return hg.hypergraph(7, lines)


def test_greedy_cover_fano():
    h = fano_plane()
    tau_star, _ = hg.fractional_cover_number(h)
    assert tau_star == Fraction(7, 3)
    cover = hg.greedy_cover(h, tau_star=tau_star)
    assert len(hg.exact_min_cover(h)) == 3
    assert len(cover) <= hg.log_cover_bound_floor(tau_star, 3)


def test_log_cover_bound_values():
    assert hg.log_cover_bound_floor(Fraction(2), 3) == 4  # 2(1+ln3) = 4.197
    assert hg.log_cover_bound_floor(Fraction(7, 2), 1) == 3
    assert hg.log_cover_bound_floor(Fraction(3), 2) == 5  # 3(1+ln2) = 5.079


# -- bipartite edge cover ---------------------------------------------------------

def bip(nl, nr, pairs):
    return hg.hypergraph(
        nl + nr,
        [{u, nl + w} for u, w in pairs],
        partition=[tuple(range(nl)), tuple(range(nl, nl + nr))],
    )


def test_min_edge_cover_perfect_matching():
    g = bip(3, 3, [(0, 0), (1, 1), (2, 2)])
    cover = hg.bipartite_min_edge_cover(g)
    assert len(cover) == 3


def test_min_edge_cover_star():
    g = bip(1, 3, [(0, 0), (0, 1), (0, 2)])
    cover = hg.bipartite_min_edge_cover(g)
    assert len(cover) == 3


def test_min_edge_cover_isolated():
    g = hg.hypergraph(
        4, [{0, 2}], partition=[(0, 1), (2, 3)]
    )
    with pytest.raises(hg.IsolatedVertexError):
        hg.bipartite_min_edge_cover(g)


def test_min_edge_cover_random_gallai():
    rng = random.Random(23)
    done = 0
    while done < 25:
        nl, nr = rng.randint(2, 6), rng.randint(2, 6)
        pairs = set()
        for u in range(nl):
            for w in range(nr):
                if rng.random() < 0.5:
                    pairs.add((u, w))
        g_pairs = list(sorted(pairs))
        counts_l = {u for u, _ in g_pairs}
        counts_r = {w for _, w in g_pairs}
        if len(counts_l) < nl or len(counts_r) < nr:
            continue
        done += 1
        g = bip(nl, nr, g_pairs)
        cover = hg.bipartite_min_edge_cover(g)
        nu = len(hg.bipartite_max_matching(g))
        assert len(cover) == g.vertex_count - nu
        tau_star, _ = hg.fractional_cover_number(hg.dualize(g))
        assert Fraction(len(cover)) == tau_star


def test_bipartite_matching_matches_generic():
    g = bip(3, 3, [(0, 0), (0, 1), (1, 0), (2, 2)])
    assert len(hg.bipartite_max_matching(g)) == len(hg.max_matching(g)) == 3


# -- invariants -------------------------------------------------------------------

def test_partite_validation():
    with pytest.raises(ValueError):
        hg.hypergraph(4, [{0, 1, 2}], partition=[(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        hg.hypergraph(3, [{0}], partition=[(0,), (1,)])


def test_empty_edge_rejected():
    with pytest.raises(ValueError):
        hg.hypergraph(2, [set()])


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_sandwich_property(data):
    nv = data.draw(st.integers(2, 6))
    ne = data.draw(st.integers(1, 8))
    edges = []
    for _ in range(ne):
        size = data.draw(st.integers(1, min(3, nv)))
        edges.append(frozenset(data.draw(
            st.lists(st.integers(0, nv - 1), min_size=size, max_size=size, unique=True)
        )))
    used = sorted(set(v for e in edges for v in e))
    remap = {v: i for i, v in enumerate(used)}
    h = hg.hypergraph(len(used), [frozenset(remap[v] for v in e) for e in edges])
    nu = len(hg.max_matching(h))
    nu_star, _ = hg.fractional_matching_number(h)
    tau_star, _ = hg.fractional_cover_number(h)
    tau = len(hg.exact_min_cover(h))
    assert Fraction(nu) <= nu_star == tau_star <= Fraction(tau)
