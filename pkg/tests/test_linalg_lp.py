from fractions import Fraction

from hypothesis import given, settings, strategies as st

from fairdiv import lp
from fairdiv.linalg import det_bareiss, det_rational, matrix_rank, solve_unique


def test_solve_unique_square():
    x = solve_unique([[2, 1], [1, 3]], [5, 10])
    assert x == [Fraction(1), Fraction(3)]


def test_solve_unique_inconsistent():
    assert solve_unique([[1, 1], [1, 1]], [1, 2]) is None


def test_solve_unique_underdetermined():
    assert solve_unique([[1, 1]], [1]) is None


def test_solve_unique_overdetermined_consistent():
    # three rows, two unknowns, consistent
    x = solve_unique([[1, 0], [0, 1], [1, 1]], [2, 3, 5])
    assert x == [Fraction(2), Fraction(3)]


def test_rank():
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([[1, 0], [0, 1]]) == 2
    assert matrix_rank([]) == 0


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_det_bareiss_matches_cofactor(mat):
    def cofactor(m):
        if len(m) == 1:
            return m[0][0]
        return sum(
            (-1) ** j * m[0][j] * cofactor(
                [row[:j] + row[j + 1:] for row in m[1:]]
            )
            for j in range(len(m))
        )

    assert det_bareiss(mat) == cofactor(mat)


def test_det_rational_scaling():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
    assert det_rational(m) == Fraction(1, 2) * Fraction(1, 5) - Fraction(1, 3) * Fraction(1, 4)


def test_lp_basic_max():
    r = lp.solve_lp([3, 2], [[1, 1], [1, 0]], [lp.LE, lp.LE], [4, 2])
    assert r.status == lp.OPTIMAL
    assert r.value == 10  # x=2, y=2


def test_lp_infeasible():
    r = lp.solve_lp([1], [[1], [1]], [lp.LE, lp.GE], [1, 2])
    assert r.status == lp.INFEASIBLE


def test_lp_unbounded():
    r = lp.solve_lp([1], [[-1]], [lp.LE], [0])
    assert r.status == lp.UNBOUNDED


def test_lp_equality_and_min():
    # min x + y subject to x + y = 2, x <= 1
    r = lp.solve_lp([1, 1], [[1, 1], [1, 0]], [lp.EQ, lp.LE], [2, 1], maximize=False)
    assert r.status == lp.OPTIMAL
    assert r.value == 2


def test_lp_exact_fractions():
    # max x s.t. 3x <= 1
    r = lp.solve_lp([1], [[3]], [lp.LE], [1])
    assert r.value == Fraction(1, 3)


@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
@settings(max_examples=60, deadline=None)
def test_lp_duality_on_random_instances(nv, nc, data):
    """Weak duality: primal max <= dual min on random nonnegative LPs."""
    a = [
        [data.draw(st.integers(0, 3)) for _ in range(nv)]
        for _ in range(nc)
    ]
    # Make every column nonzero so the primal is bounded.
    for j in range(nv):
        if all(a[i][j] == 0 for i in range(nc)):
            a[data.draw(st.integers(0, nc - 1))][j] = 1
    b = [data.draw(st.integers(1, 5)) for _ in range(nc)]
    c = [data.draw(st.integers(0, 4)) for _ in range(nv)]
    primal = lp.solve_lp(c, a, [lp.LE] * nc, b)
    cols = [[a[i][j] for i in range(nc)] for j in range(nv)]
    dual = lp.solve_lp(b, cols, [lp.GE] * nv, c, maximize=False)
    assert primal.status == lp.OPTIMAL
    assert dual.status == lp.OPTIMAL
    assert primal.value == dual.value
