from fractions import Fraction

import pytest

from fairdiv import hypergraph as hg
from fairdiv import oracles as orc
from fairdiv import solver
from fairdiv.geometry import complete_triangulation
from fairdiv.labeling import build_subset_labeling


def players(p):
    return tuple(f"p{i+1}" for i in range(p))


def uniform_profile(ids, k):
    dens = orc.PiecewiseDensity((Fraction(0), Fraction(1)), (Fraction(1),))
    return orc.ValuationProfile(tuple(ids), {p: (dens,) * k for p in ids})


# -- spec hypotheses ----------------------------------------------------------

def test_spec_hypotheses():
    with pytest.raises(solver.HypothesisError):
        solver.ProblemSpec("cake", n=3, k=1, players=players(4))
    with pytest.raises(solver.HypothesisError):
        solver.ProblemSpec("cakes", n=3, k=2, players=players(6))
    with pytest.raises(solver.HypothesisError):
        solver.ProblemSpec("shifts", n=3, k=2, players=players(4))
    with pytest.raises(solver.HypothesisError):
        solver.ProblemSpec("lunch", n=3, k=1, players=players(1))


# -- player duplication -------------------------------------------------------

def test_duplicate_identity():
    spec = solver.ProblemSpec("cake", n=4, k=1, players=players(4))
    assert solver.duplicate_players(spec) == ("p1", "p2", "p3", "p4")


def test_duplicate_round_robin():
    spec = solver.ProblemSpec("cake", n=5, k=1, players=players(2))
    owners = solver.duplicate_players(spec)
    assert owners == ("p1", "p2", "p1", "p2", "p1")
    copies = max(owners.count(p) for p in set(owners))
    assert copies == -(-5 // 2)


def test_duplicate_cakes_identity():
    spec = solver.ProblemSpec("cakes", n=3, k=2, players=players(5))
    assert solver.duplicate_players(spec) == players(5)


def test_duplicate_shifts_subset():
    spec = solver.ProblemSpec("shifts", n=2, k=2, players=players(5))
    owners = solver.duplicate_players(spec)
    assert owners == ("p1", "p2", "p3")  # k(n-1)+1 of the 5


# -- balanced cell search -------------------------------------------------------

def test_balanced_cell_single_player_segment():
    """One uniform player on a segment: the balanced cell straddles the
    midpoint and carries both singleton labels with unit weights."""
    ids = ("p1",)
    spec = solver.ProblemSpec("cake", n=2, k=1, players=ids, mesh=4)
    t = complete_triangulation(2, 1, 4)
    oracle = orc.SimulatedOracle(uniform_profile(ids, 1))
    lab = build_subset_labeling(t, oracle, solver.duplicate_players(spec), 1)
    cert = solver.find_balanced_cell(t, lab, 2, 1)
    assert sorted(tuple(sorted(e)) for e in cert.edges) == [(0,), (1,)]
    assert cert.weights == (Fraction(1), Fraction(1))
    assert solver.verify_certificate(cert, 2)


def test_balanced_cell_unbalanced_skipped():
    h = solver._label_hypergraph([(0, 0)], 2, 2)
    assert not hg.has_perfect_fractional_matching(h)


def test_certificate_weights_verify():
    ids = players(4)
    spec = solver.ProblemSpec("cake", n=4, k=2, players=ids, mesh=2)
    oracle = orc.SimulatedOracle(orc.random_profile(ids, 1, 12))
    rr = solver.run_round(spec, oracle, 2)
    assert solver.verify_certificate(rr.cert, 4)
    for _, lab in rr.outcome:
        assert lab in rr.cert.edges


# -- allocation extraction ------------------------------------------------------

def test_extraction_k1_all_players():
    ids = players(3)
    spec = solver.ProblemSpec("cake", n=3, k=1, players=ids, mesh=2)
    oracle = orc.SimulatedOracle(orc.random_profile(ids, 1, 3))
    rr = solver.run_round(spec, oracle, 2)
    # k=1: singleton labels, bound k^2-k+1 = 1 means all n pieces matched
    assert rr.achieved == 3


def test_extraction_respects_duplication():
    ids = players(2)
    spec = solver.ProblemSpec("cake", n=4, k=2, players=ids, mesh=2)
    oracle = orc.SimulatedOracle(orc.random_profile(ids, 1, 21))
    rr = solver.run_round(spec, oracle, 2)
    g, _ = solver.guaranteed_bound(spec)
    assert g == 1  # ceil(2/(2*3))
    assert rr.achieved >= g
    names = [p for p, _ in rr.outcome]
    assert len(set(names)) == len(names)


def test_guaranteed_bounds_table():
    assert solver.guaranteed_bound(
        solver.ProblemSpec("cake", n=4, k=2, players=players(4))
    ) == (2, "exact-divisor")
    assert solver.guaranteed_bound(
        solver.ProblemSpec("cake", n=5, k=2, players=players(3))
    ) == (1, "halved")
    assert solver.guaranteed_bound(
        solver.ProblemSpec("cakes", n=3, k=2, players=players(5))
    ) == (3, "exact-divisor")
    assert solver.guaranteed_bound(
        solver.ProblemSpec("shifts", n=3, k=2, players=players(5))
    ) == (3, "gallai")
    assert solver.guaranteed_bound(
        solver.ProblemSpec("shifts", n=2, k=3, players=players(4))
    ) == (4, "log-cover")  # floor(2(1+ln3))


# -- full pipelines ----------------------------------------------------------------

def test_refine_single_uniform_player_converges_to_half():
    ids = ("p1",)
    spec = solver.ProblemSpec(
        "cake", n=2, k=1, players=ids, mesh=2, max_rounds=5,
        epsilon=Fraction(1, 8), seed=0,
    )
    rep = solver.refine_until_stable(spec, orc.SimulatedOracle(uniform_profile(ids, 1)))
    final_mesh = rep["trace"][-1]["mesh"]
    x0 = Fraction(rep["division"][0][0])
    assert abs(x0 - Fraction(1, 2)) <= Fraction(1, final_mesh)
    assert rep["bound"]["achieved"] == 1


def test_refine_cakes_bounds_and_disjointness():
    ids = players(5)
    spec = solver.ProblemSpec(
        "cakes", n=3, k=2, players=ids, mesh=1, max_rounds=3,
        epsilon=Fraction(3, 10), seed=7,
    )
    rep = solver.refine_until_stable(
        spec, orc.SimulatedOracle(orc.random_profile(ids, 2, 7))
    )
    assert rep["bound"]["achieved"] >= 3
    sels = [tuple(s["selection"]) for s in rep["satisfied"]]
    for f in range(2):
        comps = [s[f] for s in sels]
        assert len(set(comps)) == len(comps)
    for t in rep["trace"]:
        assert t["achieved"] >= 3


def test_refine_shift_cover_small():
    ids = players(3)
    spec = solver.ProblemSpec(
        "shifts", n=2, k=2, players=ids, mesh=1, max_rounds=4,
        epsilon=Fraction(3, 10), seed=11,
    )
    rep = solver.refine_until_stable(
        spec, orc.SimulatedOracle(orc.random_profile(ids, 2, 11))
    )
    assert rep["bound"]["achieved"] <= 2
    covered = set()
    for entry in rep["cover"]:
        for day, shift in enumerate(entry["selection"]):
            covered.add((day, shift))
    assert covered == {(d, s) for d in range(2) for s in range(2)}
    assert not rep["flags"]["unstable"]


def test_refine_shift_rerun_same_cover():
    ids = players(3)
    base = dict(n=2, k=2, players=ids, mesh=1, epsilon=Fraction(3, 10), seed=5)
    prof = orc.random_profile(ids, 2, 5)
    rep4 = solver.refine_until_stable(
        solver.ProblemSpec("shifts", max_rounds=4, **base), orc.SimulatedOracle(prof)
    )
    rep8 = solver.refine_until_stable(
        solver.ProblemSpec("shifts", max_rounds=8, **base), orc.SimulatedOracle(prof)
    )
    assert rep4["cover"] == rep8["cover"]


def test_refine_k3_log_cover():
    ids = players(4)
    spec = solver.ProblemSpec(
        "shifts", n=2, k=3, players=ids, mesh=1, max_rounds=4,
        epsilon=Fraction(3, 10), seed=2,
    )
    rep = solver.refine_until_stable(
        spec, orc.SimulatedOracle(orc.random_profile(ids, 3, 2))
    )
    assert rep["bound"]["achieved"] <= 4
    covered = {
        (d, s)
        for entry in rep["cover"]
        for d, s in enumerate(entry["selection"])
    }
    assert covered == {(d, s) for d in range(3) for s in range(2)}


def test_determinism_same_seed_same_report():
    ids = players(4)
    spec = solver.ProblemSpec(
        "cake", n=4, k=2, players=ids, mesh=1, max_rounds=3,
        epsilon=Fraction(3, 10), seed=9,
    )
    prof = orc.random_profile(ids, 1, 9)
    r1 = solver.refine_until_stable(spec, orc.SimulatedOracle(prof))
    r2 = solver.refine_until_stable(spec, orc.SimulatedOracle(prof))
    assert r1 == r2


def test_degenerate_single_player_single_piece():
    ids = ("p1",)
    spec = solver.ProblemSpec("cake", n=1, k=1, players=ids, mesh=1, max_rounds=2)
    rep = solver.refine_until_stable(
        spec, orc.SimulatedOracle(uniform_profile(ids, 1))
    )
    assert rep["bound"]["achieved"] == 1
    assert rep["satisfied"][0]["selection"] == [0]
