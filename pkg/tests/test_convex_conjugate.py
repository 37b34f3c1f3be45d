import numpy as np
import pytest

from entropy_duel.convex_conjugate import (SampledFunction, affine_conjugate,
                                           conjugate_at, conjugate_function,
                                           exp_conjugate, fenchel_gap,
                                           inf_convolution,
                                           inf_convolution_check,
                                           norm_conjugate, quadratic_conjugate,
                                           sample_function, support_function,
                                           uniform_grid)
from entropy_duel.errors import ValidationError
from entropy_duel.extreal import ExtReal


def exp_grid(step=1e-3):
    return sample_function(uniform_grid(-5.0, 5.0, step), np.exp)


def quad_grid(step=1e-2):
    return sample_function(uniform_grid(-5.0, 5.0, step), lambda x: 0.5 * x * x)


def test_conjugate_of_exp_at_one():
    # closed form p ln p - p evaluates to -1 at p = 1
    val = conjugate_at(exp_grid(), np.array([1.0]))
    assert abs(float(val) - (-1.0)) <= 1e-3


def test_conjugate_monotone_under_refinement():
    coarse = sample_function(uniform_grid(-5.0, 5.0, 0.5), np.exp)
    fine = sample_function(uniform_grid(-5.0, 5.0, 0.25), np.exp)
    p = np.array([0.7])
    assert float(conjugate_at(fine, p)) >= float(conjugate_at(coarse, p)) - 1e-15


def test_conjugate_of_affine_is_intercept():
    a, b = 1.5, 0.4
    f = sample_function(uniform_grid(-3.0, 3.0, 0.01), lambda x: a * x - b)
    assert float(conjugate_at(f, np.array([a]))) == pytest.approx(b, abs=1e-12)


def test_conjugate_of_point_indicator_is_zero_everywhere():
    f = SampledFunction(np.array([[0.0]]), np.array([0.0]))
    for p in (-3.0, 0.0, 7.0):
        assert float(conjugate_at(f, np.array([p]))) == 0.0


def test_empty_effective_domain_rejected():
    with pytest.raises(ValidationError):
        SampledFunction(np.array([[0.0], [1.0]]), np.array([0.0, 0.0]),
                        np.array([False, False]))


def test_conjugate_dimension_mismatch():
    with pytest.raises(ValidationError):
        conjugate_at(exp_grid(0.5), np.array([1.0, 2.0]))


def test_fenchel_gap_quadratic_at_gradient_pair():
    f = quad_grid()
    gap = fenchel_gap(f, np.array([1.0]), np.array([1.0]))
    assert 0.0 <= float(gap) <= 1e-3


def test_fenchel_gap_exp_fixture():
    gap = fenchel_gap(exp_grid(), np.array([0.0]), np.array([1.0]))
    assert abs(float(gap)) <= 1e-3


def test_fenchel_gap_nonnegative_random():
    rng = np.random.default_rng(0)
    f = exp_grid(0.01)
    for _ in range(25):
        x = np.array([np.round(rng.uniform(-5, 5), 2)])
        p = np.array([rng.uniform(-3, 3)])
        assert float(fenchel_gap(f, x, p)) >= -1e-12


def test_fenchel_gap_requires_sampled_point():
    with pytest.raises(ValidationError):
        fenchel_gap(exp_grid(0.5), np.array([0.123]), np.array([1.0]))


def test_support_function_simplex():
    verts = np.eye(4)
    x = np.array([0.3, -2.0, 1.7, 0.0])
    assert support_function(verts, x) == pytest.approx(1.7)


def test_support_function_singleton():
    a = np.array([2.0, -1.0])
    x = np.array([0.5, 3.0])
    assert support_function(a[None, :], x) == pytest.approx(float(a @ x))


def test_support_function_square():
    verts = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
    assert support_function(verts, np.array([2.0, 3.0])) == pytest.approx(5.0)


def test_inf_convolution_with_point_indicator_is_identity():
    f = quad_grid(0.1)
    unit = sample_function(
        f.points, lambda x: ExtReal(0.0) if abs(x) < 1e-12
        else ExtReal.infinity())
    conv = inf_convolution(f, unit)
    assert np.allclose(conv.values[conv.finite_mask],
                       f.values[conv.finite_mask])


def test_inf_convolution_conjugate_identity_quadratic():
    """(f box f)* = 2 f* for f = x^2/2; both sides near 1 at p = 1."""
    f = quad_grid()
    lhs, rhs = inf_convolution_check(f, f, np.array([1.0]))
    assert abs(float(lhs) - 1.0) <= 2e-2
    assert abs(float(rhs) - 1.0) <= 2e-2
    assert abs(float(lhs) - float(rhs)) <= 2e-2


def test_inf_convolution_affine_pair():
    """Same-slope affine pieces: the only dual point where both exact
    sides are finite is the shared slope, and there both sides are the
    sum of the intercepts, exactly (a sup of constants is grid-exact)."""
    a, b, c = 0.5, 0.3, -0.2
    grid = uniform_grid(-2.0, 2.0, 0.01)
    f = sample_function(grid, lambda x: a * x - b)
    g = sample_function(grid, lambda x: a * x - c)
    lhs, rhs = inf_convolution_check(f, g, np.array([a]))
    assert not lhs.is_infinite and not rhs.is_infinite
    assert float(lhs) == pytest.approx(b + c, abs=1e-12)
    assert float(rhs) == pytest.approx(b + c, abs=1e-12)


def test_inf_convolution_requires_common_grid():
    with pytest.raises(ValidationError):
        inf_convolution(quad_grid(0.1), quad_grid(0.2))


def test_order_reversal_exact():
    grid = uniform_grid(-3.0, 3.0, 0.05)
    f = sample_function(grid, lambda x: 0.5 * x * x)
    g = sample_function(grid, lambda x: 0.5 * x * x + 0.3 + abs(x))
    for p in (-2.0, 0.0, 0.5, 3.0):
        assert float(conjugate_at(f, np.array([p]))) >= \
            float(conjugate_at(g, np.array([p])))


def test_biconjugate_dominated_by_original():
    f = quad_grid(0.05)
    duals = uniform_grid(-6.0, 6.0, 0.05)
    fstar = conjugate_function(f, duals)
    for i in range(0, len(f.values), 17):
        bi = conjugate_at(fstar, f.points[i])
        assert float(bi) <= f.values[i] + 1e-12


def test_biconjugate_recovers_convex_functions():
    # grid-tolerance equality for x^2/2 and exp
    for fn, pts in ((lambda x: 0.5 * x * x, uniform_grid(-5, 5, 0.02)),
                    (np.exp, uniform_grid(-5, 5, 0.02))):
        f = sample_function(pts, fn)
        duals = uniform_grid(-8.0, 8.0, 0.02)
        fstar = conjugate_function(f, duals)
        for i in range(len(f.values) // 4, 3 * len(f.values) // 4, 29):
            bi = conjugate_at(fstar, f.points[i])
            assert abs(float(bi) - f.values[i]) <= 0.05


def test_conjugate_convex_in_dual_argument():
    f = exp_grid(0.01)
    p1, p2 = np.array([0.5]), np.array([2.5])
    v1 = float(conjugate_at(f, p1))
    v2 = float(conjugate_at(f, p2))
    for t in (0.25, 0.5, 0.75):
        mid = float(conjugate_at(f, t * p1 + (1 - t) * p2))
        assert mid <= t * v1 + (1 - t) * v2 + 1e-12


def test_exp_conjugate_closed_form():
    assert float(exp_conjugate(1.0)) == pytest.approx(-1.0)
    assert float(exp_conjugate(0.0)) == 0.0
    assert exp_conjugate(-0.5).is_infinite
    p = 2.0
    assert float(exp_conjugate(p)) == pytest.approx(p * np.log(p) - p)


def test_quadratic_conjugate_self():
    p = np.array([0.3, -1.2])
    assert float(quadratic_conjugate(p)) == pytest.approx(0.5 * float(p @ p))


def test_affine_conjugate_values():
    a = np.array([1.0, -2.0])
    assert float(affine_conjugate(a, 0.7, a)) == pytest.approx(0.7)
    assert affine_conjugate(a, 0.7, a + 0.1).is_infinite


def test_norm_conjugate_is_ball_indicator():
    assert float(norm_conjugate(np.array([0.6, 0.8]))) == 0.0
    assert norm_conjugate(np.array([0.8, 0.8])).is_infinite


def test_infinity_tag_arithmetic():
    inf = ExtReal.infinity(witness="top")
    assert (inf + ExtReal(3.0)).is_infinite
    assert float(ExtReal(2.0) + ExtReal(0.5)) == 2.5
    with pytest.raises(ArithmeticError):
        _ = inf - ExtReal.infinity()
    with pytest.raises(ArithmeticError):
        float(inf)
