import numpy as np
import pytest

from rbgames import LinearProgram, LPStatus, solve_lp, seeded_rng

from oracles import scipy_lp

_VAL_TOL = 1e-7


def _lp(c, A, b, lb, ub):
    return LinearProgram(
        np.asarray(c, dtype=float),
        np.asarray(A, dtype=float).reshape(len(b), len(c)) if len(b) else np.zeros((0, len(c))),
        np.asarray(b, dtype=float),
        np.asarray(lb, dtype=float),
        np.asarray(ub, dtype=float),
    )


def test_knapsack_relaxation_vertex():
    # min -x1 - 2 x2 over 3 x1 + 4 x2 <= 5, x in [0,1]^2
    lp = _lp([-1.0, -2.0], [[3.0, 4.0]], [5.0], [0.0, 0.0], [1.0, 1.0])
    res = solve_lp(lp)
    assert res.status is LPStatus.OPTIMAL
    assert np.allclose(res.x, [1.0 / 3.0, 1.0], atol=1e-9)
    assert abs(res.value - (-1.0 / 3.0 - 2.0)) < _VAL_TOL


def test_pure_box_problem():
    lp = _lp([2.0, -3.0], [], [], [-1.0, -1.0], [4.0, 5.0])
    res = solve_lp(lp)
    assert res.status is LPStatus.OPTIMAL
    assert np.allclose(res.x, [-1.0, 5.0])
    assert abs(res.value - (-17.0)) < _VAL_TOL


def test_infeasible():
    lp = _lp([1.0], [[1.0]], [-2.0], [0.0], [1.0])
    res = solve_lp(lp)
    assert res.status is LPStatus.INFEASIBLE


def test_unbounded():
    lp = _lp([-1.0], [], [], [0.0], [np.inf])
    res = solve_lp(lp)
    assert res.status is LPStatus.UNBOUNDED


def test_free_variable_equality_pair():
    # x1 + x2 <= 1 and -(x1 + x2) <= -1 pins the sum; x2 free
    lp = _lp([0.0, 1.0], [[1.0, 1.0], [-1.0, -1.0]], [1.0, -1.0],
             [0.0, -np.inf], [np.inf, np.inf])
    res = solve_lp(lp)
    assert res.status is LPStatus.UNBOUNDED  # x2 -> -inf with x1 = 1 - x2


def test_duals_on_knapsack_vertex():
    lp = _lp([-1.0, -2.0], [[3.0, 4.0]], [5.0], [0.0, 0.0], [1.0, 1.0])
    res = solve_lp(lp)
    # row dual: lowering b by 1 unit raises the optimum by lambda
    lam = res.row_duals[0]
    assert lam >= -1e-9
    bumped = solve_lp(_lp([-1.0, -2.0], [[3.0, 4.0]], [4.0], [0.0, 0.0], [1.0, 1.0]))
    assert abs((bumped.value - res.value) - lam) < 1e-6
    # weak duality certificate matches the primal value at optimality
    assert abs(res.dual_value(lp) - res.value) < 1e-6


def test_random_lps_match_reference():
    rng = seeded_rng(11)
    solved = 0
    for trial in range(300):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(0, 7))
        c = np.round(rng.normal(size=n) * 5)
        A = np.round(rng.normal(size=(k, n)) * 3)
        b = np.round(rng.normal(size=k) * 4 + 2)
        lb = np.where(rng.random(n) < 0.8, 0.0, -np.inf)
        ub = np.where(rng.random(n) < 0.8, rng.integers(1, 5, size=n).astype(float), np.inf)
        ub = np.maximum(ub, lb)
        lp = _lp(c, A, b, lb, ub)
        res = solve_lp(lp)
        status, val, _ = scipy_lp(c, lp.A, b, lb, ub)
        if status == "infeasible":
            assert res.status is LPStatus.INFEASIBLE, trial
        elif status == "unbounded":
            assert res.status is LPStatus.UNBOUNDED, trial
        else:
            assert res.status is LPStatus.OPTIMAL, (trial, res.status)
            assert abs(res.value - val) < 1e-6 * (1 + abs(val)), (trial, res.value, val)
            solved += 1
            # primal feasibility of the returned point
            if lp.A.size:
                assert np.all(lp.A @ res.x <= b + 1e-7)
            assert np.all(res.x >= lb - 1e-9)
            assert np.all(res.x <= ub + 1e-9)
            # weak duality: the dual certificate never exceeds the optimum
            assert res.dual_value(lp) <= res.value + 1e-6 * (1 + abs(res.value))
    assert solved > 150  # the generator must exercise plenty of optimal cases


def test_validation_rejects_bad_shapes():
    with pytest.raises(ValueError):
        LinearProgram(np.zeros(2), np.zeros((1, 3)), np.zeros(1), np.zeros(2), np.ones(2))
    with pytest.raises(ValueError):
        LinearProgram(np.zeros(2), np.zeros((1, 2)), np.zeros(1), np.ones(2), np.zeros(2))  # lb > ub
    with pytest.raises(ValueError):
        LinearProgram(np.array([np.nan, 0.0]), np.zeros((0, 2)), np.zeros(0), np.zeros(2), np.ones(2))
