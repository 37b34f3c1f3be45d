import numpy as np
import pytest

from entropy_duel.classical_game import (best_response, biconjugate_relent,
                                         log_partition, maxminimizer,
                                         minimax_estimate,
                                         minimax_orders_report, nash_check,
                                         relative_entropy, zero_sum_value)
from entropy_duel.errors import ValidationError
from entropy_duel.herm_core import make_rng
from oracles import (classical_relent, pgd_min_log_partition, project_simplex,
                     solve_2x2)

HALF = np.array([0.5, 0.5])
PENNIES = np.array([[1.0, -1.0], [-1.0, 1.0]])


def test_log_partition_zero_awards():
    assert log_partition(HALF, np.zeros(2)) == pytest.approx(0.0, abs=1e-15)


def test_log_partition_fixture():
    got = log_partition(HALF, np.array([np.log(2.0), 0.0]))
    assert got == pytest.approx(np.log(1.5), abs=1e-14)


def test_log_partition_degenerate_prior():
    assert log_partition(np.array([1.0, 0.0]), np.array([3.3, -7.0])) \
        == pytest.approx(3.3)


def test_log_partition_between_award_extremes():
    rng = make_rng(0)
    for _ in range(20):
        m = rng.dirichlet(np.ones(4))
        q = rng.normal(size=4) * 3
        v = log_partition(m, q)
        assert v <= np.max(q) + 1e-12
        assert v >= np.min(q[m > 0]) - 1e-12


def test_log_partition_rejects_zero_prior():
    with pytest.raises(ValidationError):
        log_partition(np.zeros(2), np.zeros(2))


def test_best_response_constant_awards():
    m = np.array([0.2, 0.3, 0.5])
    assert np.allclose(best_response(m, np.full(3, 1.7)), m, atol=1e-15)


def test_best_response_fixture():
    got = best_response(HALF, np.array([np.log(2.0), 0.0]))
    assert np.allclose(got, [2.0 / 3.0, 1.0 / 3.0], atol=1e-14)


def test_best_response_keeps_support():
    got = best_response(np.array([0.0, 1.0]), np.array([9.0, -9.0]))
    assert np.allclose(got, [0.0, 1.0])


def test_best_response_achieves_the_sup():
    rng = make_rng(1)
    for _ in range(50):
        m = rng.dirichlet(np.ones(3))
        q = rng.normal(size=3) * 2
        p = best_response(m, q)
        gap = log_partition(m, q) - (p @ q - float(relative_entropy(p, m)))
        assert abs(gap) <= 1e-10


def test_gibbs_duality_sweep():
    """Partition value equals the tilted payoff minus divergence, across
    dims 2 to 8."""
    worst = 0.0
    for seed in range(60):
        rng = make_rng(seed)
        n = 2 + seed % 7
        m = rng.dirichlet(np.ones(n))
        q = rng.normal(size=n) * 2.5
        p = best_response(m, q)
        lhs = log_partition(m, q)
        rhs = p @ q - float(relative_entropy(p, m))
        worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-10


def test_relative_entropy_zero_iff_equal():
    m = np.array([0.4, 0.6])
    assert float(relative_entropy(m, m)) == pytest.approx(0.0, abs=1e-15)
    assert float(relative_entropy(np.array([0.5, 0.5]), m)) > 0


def test_relative_entropy_vertex():
    got = relative_entropy(np.array([1.0, 0.0]), HALF)
    assert float(got) == pytest.approx(np.log(2.0), abs=1e-14)


def test_relative_entropy_three_quarters_fixture():
    got = relative_entropy(np.array([0.75, 0.25]), HALF)
    want = 0.75 * np.log(1.5) + 0.25 * np.log(0.5)
    assert float(got) == pytest.approx(want, abs=1e-14)
    assert float(got) == pytest.approx(classical_relent([0.75, 0.25], HALF),
                                       abs=1e-14)


def test_relative_entropy_support_violation_is_infinite():
    got = relative_entropy(HALF, np.array([1.0, 0.0]))
    assert got.is_infinite


def test_conjugate_dominance():
    # payoff minus divergence never beats the partition value
    rng = make_rng(2)
    for _ in range(40):
        m = rng.dirichlet(np.ones(4))
        p = rng.dirichlet(np.ones(4))
        q = rng.normal(size=4) * 3
        lhs = p @ q - float(relative_entropy(p, m))
        assert lhs <= log_partition(m, q) + 1e-12


def test_biconjugate_at_reference_is_zero():
    res = biconjugate_relent(HALF, HALF)
    assert abs(res.value) <= 1e-8
    assert not res.truncated


def test_biconjugate_fixture_three_quarters():
    res = biconjugate_relent(np.array([0.75, 0.25]), HALF)
    want = 0.75 * np.log(1.5) + 0.25 * np.log(0.5)
    assert res.value == pytest.approx(want, abs=1e-5)


def test_biconjugate_fixture_two_thirds():
    p = np.array([2.0 / 3.0, 1.0 / 3.0])
    res = biconjugate_relent(p, HALF)
    assert res.value == pytest.approx(classical_relent(p, HALF), abs=1e-5)


def test_biconjugate_truncation_flag_on_support_violation():
    res = biconjugate_relent(HALF, np.array([1.0, 0.0]))
    assert res.truncated
    # box-capped lower bound of an infinite supremum
    assert res.value < 30.0


def test_biconjugate_recovery_sweep():
    rng = make_rng(3)
    for _ in range(30):
        n = 2 + int(rng.integers(0, 3))
        p = rng.dirichlet(np.ones(n) * 2)
        m = rng.dirichlet(np.ones(n) * 2)
        if np.max(np.abs(np.log(p / m))) > 15:
            continue
        res = biconjugate_relent(p, m)
        assert res.value == pytest.approx(classical_relent(p, m), abs=1e-5)


def test_minimax_estimate_fixture():
    value, mstar = minimax_estimate(np.array([0.3, 1.0]))
    assert value == pytest.approx(0.3, abs=1e-12)
    assert np.allclose(mstar, [1.0, 0.0])


def test_minimax_estimate_constant_awards():
    value, mstar = minimax_estimate(np.full(3, 0.7))
    assert value == pytest.approx(0.7)
    assert np.sum(mstar) == pytest.approx(1.0)


def test_minimax_estimate_argmin_vertex():
    value, mstar = minimax_estimate(np.array([5.0, -5.0, 0.0]))
    assert value == pytest.approx(-5.0)
    assert np.allclose(mstar, [0.0, 1.0, 0.0])


def test_minimax_estimate_tie_breaks_low_index():
    _, mstar = minimax_estimate(np.array([2.0, 2.0]))
    assert np.allclose(mstar, [1.0, 0.0])


def test_minimax_estimate_against_projected_gradient():
    rng = make_rng(4)
    for _ in range(15):
        q = rng.normal(size=4) * 2
        value, _ = minimax_estimate(q)
        oracle, _ = pgd_min_log_partition(q)
        assert value == pytest.approx(oracle, abs=1e-6)


def test_zero_sum_matching_pennies():
    sol = zero_sum_value(PENNIES)
    assert abs(sol.value) <= 1e-6
    assert np.allclose(sol.row, HALF, atol=1e-6)
    assert np.allclose(sol.col, HALF, atol=1e-6)
    assert sol.gap <= 1e-6


def test_zero_sum_dominant_row():
    sol = zero_sum_value(np.array([[1.0, 1.0], [0.0, 0.0]]))
    assert sol.value == pytest.approx(1.0, abs=1e-9)
    assert sol.row[0] == pytest.approx(1.0, abs=1e-9)


def test_zero_sum_mixed_fixture():
    g = np.array([[3.0, 1.0], [0.0, 2.0]])
    sol = zero_sum_value(g)
    value, row, col = solve_2x2(g)
    assert value == pytest.approx(1.5)
    assert sol.value == pytest.approx(value, abs=1e-8)
    assert np.allclose(sol.row, row, atol=1e-7)
    assert np.allclose(sol.col, col, atol=1e-7)


def test_zero_sum_certificate_on_random_matrices():
    rng = make_rng(5)
    for _ in range(30):
        shape = (int(rng.integers(2, 7)), int(rng.integers(2, 7)))
        g = rng.normal(size=shape) * 3
        sol = zero_sum_value(g)
        assert sol.gap <= 1e-6
        # certificate recomputed here, not trusted from the solver
        worst_row = np.max(g @ sol.col) - sol.row @ g @ sol.col
        worst_col = sol.row @ g @ sol.col - np.min(sol.row @ g)
        assert worst_row <= 1e-6 + 1e-9
        assert worst_col <= 1e-6 + 1e-9


def test_zero_sum_shift_scale_equivariance():
    g = np.array([[3.0, 1.0], [0.0, 2.0]])
    base = zero_sum_value(g)
    shifted = zero_sum_value(2.5 * g + 7.0)
    assert shifted.value == pytest.approx(2.5 * base.value + 7.0, abs=1e-6)
    assert np.allclose(shifted.row, base.row, atol=1e-6)
    assert np.allclose(shifted.col, base.col, atol=1e-6)


def test_zero_sum_2x2_oracle_sweep():
    rng = make_rng(6)
    for _ in range(40):
        g = rng.normal(size=(2, 2)) * 2
        sol = zero_sum_value(g)
        value, _, _ = solve_2x2(g)
        assert sol.value == pytest.approx(value, abs=1e-8)


def test_maxminimizer_pennies():
    strat, guarantee = maxminimizer(PENNIES, "row")
    assert np.allclose(strat, HALF, atol=1e-6)
    assert guarantee == pytest.approx(0.0, abs=1e-9)


def test_maxminimizer_guarantees_sum_to_zero():
    rng = make_rng(7)
    g = rng.normal(size=(3, 4))
    _, me = maxminimizer(g, "row")
    _, you = maxminimizer(g, "col")
    assert me + you == pytest.approx(0.0, abs=1e-6)


def test_maxminimizer_dominant_row():
    strat, guarantee = maxminimizer(np.array([[1.0, 1.0], [0.0, 0.0]]), "row")
    assert strat[0] == pytest.approx(1.0, abs=1e-9)
    assert guarantee == pytest.approx(1.0, abs=1e-9)


def test_maxminimizer_constant_shift():
    g = np.array([[3.0, 1.0], [0.0, 2.0]])
    s0, g0 = maxminimizer(g, "row")
    s1, g1 = maxminimizer(g + 7.0, "row")
    assert np.allclose(s0, s1, atol=1e-6)
    assert g1 == pytest.approx(g0 + 7.0, abs=1e-8)


def test_nash_check_pennies_equilibrium():
    assert nash_check(PENNIES, HALF, HALF, 1e-9)


def test_nash_check_rejects_pure_pennies():
    e1 = np.array([1.0, 0.0])
    assert not nash_check(PENNIES, e1, e1, 1e-6)


def test_nash_check_accepts_solver_output():
    rng = make_rng(8)
    g = rng.normal(size=(4, 3)) * 2
    sol = zero_sum_value(g, tol=1e-6)
    assert nash_check(g, sol.row, sol.col, 2e-6)


def test_equilibria_interchangeable():
    """Near-equilibria from different solver seeds cross-combine into
    near-equilibria."""
    g = PENNIES  # continuum of optima; crossing is the interesting case
    a = zero_sum_value(g, tol=1e-8)
    b = zero_sum_value(g + 0.0, tol=1e-8)
    assert nash_check(g, a.row, b.col, 3e-8)
    assert nash_check(g, b.row, a.col, 3e-8)


def test_minimax_orders_report_shape():
    rep = minimax_orders_report(np.array([0.3, 1.0]), resolution=10)
    assert rep["minimax"] == pytest.approx(0.3)
    assert "reversed_order_grid" in rep or len(rep) >= 2


def test_simplex_projection_oracle_sane():
    # oracle self-check: projection lands on the simplex
    v = np.array([0.4, -1.0, 2.2])
    p = project_simplex(v)
    assert np.sum(p) == pytest.approx(1.0, abs=1e-12)
    assert np.min(p) >= 0.0
