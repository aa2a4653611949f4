from fractions import Fraction

import oracles
from perfectforms.simplex import feasible_nonnegative, solve_lp


def test_small_lp():
    # max x + y with x + 2y + s = 4, 3x + y + t = 6
    res = solve_lp([[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], [1, 1, 0, 0])
    assert res.status == "optimal"
    assert res.value == Fraction(14, 5)
    assert res.x[:2] == (Fraction(8, 5), Fraction(6, 5))


def test_infeasible_and_unbounded():
    assert solve_lp([[1, 1]], [-1], [0, 0]).status == "infeasible"
    assert solve_lp([[1, -1]], [0], [1, 0]).status == "unbounded"
    assert feasible_nonnegative([[1, 1]], [2])
    assert not feasible_nonnegative([[1, 1]], [-2])
    assert feasible_nonnegative([], [0])


def test_degenerate_rows():
    # duplicated constraint leaves an artificial variable in the basis
    res = solve_lp([[1, 1, 1], [2, 2, 2]], [3, 6], [1, 2, 3])
    assert res.status == "optimal" and res.value == 9


def test_random_lps_against_vertex_oracle(rng):
    checked = 0
    while checked < 80:
        m = rng.randint(1, 3)
        n = rng.randint(m + 1, m + 3)
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        # bounded feasible region: add a row with positive coefficients
        a.append([rng.randint(1, 3) for _ in range(n)])
        b = [rng.randint(-4, 6) for _ in range(m)] + [rng.randint(1, 8)]
        c = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
        want = oracles.lp_vertex_optimum(a, b, c)
        res = solve_lp(a, b, c)
        if want is None:
            assert res.status == "infeasible"
        else:
            assert res.status == "optimal"
            assert res.value == want
            for row, rhs in zip(a, b):
                assert sum(x * v for x, v in zip(row, res.x)) == rhs
            assert all(v >= 0 for v in res.x)
        checked += 1
