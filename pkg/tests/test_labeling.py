import random
from fractions import Fraction

import pytest

from fairdiv import labeling as lb
from fairdiv import oracles as orc
from fairdiv.geometry import (
    barycentric_complete,
    grid_triangulation,
    product_triangulation,
    product_lattice_vertices,
    empty_set,
    support,
)


def uniform_profile(players, k):
    dens = orc.PiecewiseDensity((Fraction(0), Fraction(1)), (Fraction(1),))
    return orc.ValuationProfile(tuple(players), {p: (dens,) * k for p in players})


def complete(n, k, m):
    base = grid_triangulation(n, m) if k == 1 else product_triangulation(n, k, m)
    return barycentric_complete(base)


# -- building labelings -------------------------------------------------------

def test_subset_labeling_respects_support():
    t = complete(3, 1, 2)
    oracle = orc.SimulatedOracle(orc.random_profile(["a", "b", "c"], 1, 3))
    lab = lb.build_subset_labeling(t, oracle, ("a", "b", "c"), 2)
    for vi, v in enumerate(t.vertices):
        l = lab.label(vi)
        assert l <= support(v.factors[0])
        assert len(l) <= 2


def test_corner_label_forced():
    t = complete(3, 1, 1)
    oracle = orc.SimulatedOracle(orc.random_profile(["a", "b", "c"], 1, 5))
    lab = lb.build_subset_labeling(t, oracle, ("a", "b", "c"), 2)
    for vi, v in enumerate(t.vertices):
        supp = support(v.factors[0])
        if len(supp) == 1:
            assert lab.label(vi) == supp


def test_tuple_labeling_flavors():
    t = complete(3, 2, 1)
    players = tuple(f"p{i}" for i in range(5))
    oracle = orc.SimulatedOracle(orc.random_profile(players, 2, 8))
    supw = lb.build_tuple_labeling(t, oracle, players, lb.FLAVOR_SUPPORTWISE)
    dual = lb.build_tuple_labeling(t, oracle, players, lb.FLAVOR_DUAL)
    for vi, v in enumerate(t.vertices):
        ls = supw.label(vi)
        for c, f in zip(ls, v.factors):
            assert c in support(f)
        ld = dual.label(vi)
        for c, f in zip(ld, v.factors):
            if empty_set(f):
                assert c in empty_set(f)


def test_oracle_violation_reported():
    t = complete(2, 1, 1)

    class BadOracle:
        def select(self, player, mode, division, k):
            return frozenset({0, 1})  # ignores support

    lab = lb.Labeling(t, lb.FLAVOR_SUBSET, BadOracle(), ("a", "b"), 1)
    corner = next(
        vi for vi, v in enumerate(t.vertices) if len(support(v.factors[0])) == 1
    )
    with pytest.raises(lb.OracleViolationError):
        lab.label(corner)


def test_memoization_single_call():
    t = complete(2, 1, 2)
    calls = []

    class CountingOracle:
        def select(self, player, mode, division, k):
            calls.append((player, division))
            return frozenset({min(support(division.factors[0]))})

    lab = lb.Labeling(t, lb.FLAVOR_SUBSET, CountingOracle(), ("a", "b"), 1)
    lab.label(0)
    lab.label(0)
    assert len(calls) == 1


# -- cyclic-shift rule ----------------------------------------------------------

def test_shift_rule_examples():
    # 0-based translations of the support patterns
    assert lb.shift_rule_component(frozenset({0, 1}), 3) == 2
    assert lb.shift_rule_component(frozenset({1}), 3) == 2
    assert lb.shift_rule_component(frozenset({0, 2}), 4) == 1


def test_shift_rule_lands_in_empty():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(2, 6)
        size = rng.randint(1, n - 1)
        supp = frozenset(rng.sample(range(n), size))
        c = lb.shift_rule_component(supp, n)
        assert c not in supp


# -- equivalent Sperner transform ----------------------------------------------

def random_dual_labeling(t, rng):
    out = {}
    for vi, v in enumerate(t.vertices):
        comps = []
        for f in v.factors:
            empt = sorted(empty_set(f))
            comps.append(rng.choice(empt) if empt else rng.randint(0, f.n - 1))
        out[vi] = tuple(comps)
    return out


def test_transform_preserves_full_support_components():
    t = product_triangulation(3, 2, 2)
    rng = random.Random(5)
    ell = random_dual_labeling(t, rng)
    ell2 = lb.to_equivalent_sperner(ell, t)
    for vi, v in enumerate(t.vertices):
        for i, f in enumerate(v.factors):
            if not empty_set(f):
                assert ell2.label(vi)[i] == ell[vi][i]
            else:
                assert ell2.label(vi)[i] in empty_set(f)


def test_transform_idempotent_on_constrained_factors():
    t = product_triangulation(3, 2, 1)
    rng = random.Random(6)
    ell = random_dual_labeling(t, rng)
    once = lb.to_equivalent_sperner(ell, t)
    twice = lb.to_equivalent_sperner(
        {vi: once.label(vi) for vi in range(len(t.vertices))}, t
    )
    for vi in range(len(t.vertices)):
        assert once.label(vi) == twice.label(vi)


def test_transform_output_is_sperner():
    for (n, k, m) in [(2, 2, 1), (3, 2, 1), (3, 2, 2), (2, 3, 1), (4, 2, 1)]:
        t = product_triangulation(n, k, m)
        rng = random.Random(n * 100 + k * 10 + m)
        ell = lb.to_equivalent_sperner(random_dual_labeling(t, rng), t)
        rep = lb.validate_sperner(ell, t)
        assert rep.ok, rep.detail


def test_validate_sperner_constant_labeling_fails():
    t = product_triangulation(2, 2, 1)
    const = {vi: (0, 0) for vi in range(len(t.vertices))}
    rep = lb.validate_sperner(const, t)
    assert not rep.ok


def test_validate_sperner_reports_mutated_vertex():
    t = product_triangulation(3, 2, 2)
    rng = random.Random(9)
    ell = lb.to_equivalent_sperner(random_dual_labeling(t, rng), t)
    labels = {vi: ell.label(vi) for vi in range(len(t.vertices))}
    assert lb.validate_sperner(labels, t).ok
    # move one non-corner vertex's first component so that its witness
    # corner falls off the vertex's minimal face: breaks condition (b)
    victim = next(
        vi
        for vi, v in enumerate(t.vertices)
        if any(len(support(f)) > 1 for f in v.factors)
    )
    v = t.vertices[victim]
    supp0 = support(v.factors[0])
    bad_witness = next(j for j in range(3) if j not in supp0)
    lab = list(labels[victim])
    lab[0] = (bad_witness + 1) % 3
    labels[victim] = tuple(lab)
    rep = lb.validate_sperner(labels, t)
    assert not rep.ok
    assert victim in rep.offenders


def test_product_lattice_vertices_matches_triangulation():
    t = product_triangulation(3, 2, 2)
    via_helper = product_lattice_vertices(3, 2, 2)
    assert tuple(t.vertices) == via_helper
