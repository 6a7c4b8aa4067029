import math

import numpy as np
import pytest

from adaseries.basis import SUP_NORM_SQ, TrigBasis
from adaseries.dependence import Sample, gen_density_sample, gen_regression_sample
from adaseries.estimators import (CoefficientTable, SeriesEstimate,
                                  empirical_coefficients, ise, ise_of_estimate,
                                  ise_profile, l2_gap, sigma_y_hat)
from adaseries.quadrature import integrate, simpson_weights, unit_grid
from adaseries.targets import (MarginalLaw, density_f1, regression_f1,
                               true_coefficients)


def density_sample(x):
    x = np.asarray(x, dtype=float)
    return Sample(model="density", n=x.size, case=1, seed=0, rep_index=0, x=x)


def regression_sample(y, u):
    y = np.asarray(y, dtype=float)
    return Sample(model="regression", n=y.size, case=1, seed=0, rep_index=0,
                  y=y, u=np.asarray(u, dtype=float))


def test_density_coefficients_pinned():
    table = empirical_coefficients(density_sample([0.25, 0.25]), 3)
    assert table.theta_hat[0] == 1.0
    assert table.theta_hat[1] == pytest.approx(0.0, abs=1e-15)  # cos(pi/2) = 0
    single = empirical_coefficients(density_sample([0.0]), 1)
    assert single.theta_hat[1] == pytest.approx(math.sqrt(2.0))


def test_regression_zero_responses():
    table = empirical_coefficients(regression_sample([0.0, 0.0, 0.0], [0.1, 0.5, 0.9]), 4)
    np.testing.assert_allclose(table.theta_hat, 0.0, atol=0.0)


def test_empty_sample_rejected():
    with pytest.raises(ValueError):
        empirical_coefficients(density_sample([]), 3)


def test_nested_prefix_bit_exact():
    rng = np.random.default_rng(0)
    sample = density_sample(rng.uniform(size=100))
    full = empirical_coefficients(sample, 30)
    small = empirical_coefficients(sample, 12)
    np.testing.assert_array_equal(full.theta_hat[:13], small.theta_hat)
    np.testing.assert_array_equal(full.prefix(12), small.theta_hat)


def test_l2_gap_examples():
    table = CoefficientTable("regression", n=10, m_max=2,
                             theta_hat=np.array([0.7, 0.3, 0.4]))
    assert l2_gap(table, 1, 1) == 0.0
    assert l2_gap(table, 0, 2) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        l2_gap(table, 2, 1)


def test_l2_gap_matches_quadrature():
    rng = np.random.default_rng(4)
    sample = density_sample(rng.uniform(size=64))
    table = empirical_coefficients(sample, 12)
    grid = unit_grid()
    est_m = SeriesEstimate(table, 4).evaluate(grid)
    est_k = SeriesEstimate(table, 11).evaluate(grid)
    gap_quad = ise(est_m, est_k)
    assert gap_quad == pytest.approx(l2_gap(table, 4, 11), abs=1e-8)


def test_series_estimate_matches_direct_sum():
    rng = np.random.default_rng(8)
    table = CoefficientTable("density", n=50, m_max=9,
                             theta_hat=np.concatenate(([1.0], rng.standard_normal(9))))
    basis = TrigBasis(max_index=9)
    x = rng.uniform(size=40)
    est = SeriesEstimate(table, 7)
    direct = sum(table.theta_hat[j] * basis.eval_one(j, x) for j in range(8))
    np.testing.assert_allclose(est.evaluate(x), direct, atol=1e-12)


def test_ise_zero_and_orthonormal_perturbation():
    truth = density_f1()
    grid = unit_grid()
    truth_vals = truth.eval(grid)
    assert ise(truth_vals, truth_vals) == 0.0
    basis = TrigBasis(max_index=2)
    perturbed = truth_vals + 0.2 * basis.eval_one(1, grid)
    assert ise(perturbed, truth_vals) == pytest.approx(0.04, abs=1e-8)


def test_ise_parseval_split_oracle():
    # quadrature ISE equals sum of coefficient errors plus the truncated tail
    truth = density_f1()
    theta_true = true_coefficients(truth.eval, 400)
    sample = gen_density_sample(500, 1, MarginalLaw(truth), seed=3, rep_index=0)
    table = empirical_coefficients(sample, 20)
    m = 14
    quad = ise_of_estimate(SeriesEstimate(table, m), truth.eval)
    split = (np.sum((table.theta_hat[: m + 1] - theta_true[: m + 1]) ** 2)
             + np.sum(theta_true[m + 1 :] ** 2))
    assert quad == pytest.approx(split, abs=1e-4)


def test_ise_profile_matches_per_m_quadrature():
    law_target = density_f1()
    sample = density_sample(np.random.default_rng(9).uniform(size=128))
    table = empirical_coefficients(sample, 15)
    grid = unit_grid(1025)
    weights = simpson_weights(1025)
    basis = TrigBasis(max_index=15)
    profile = ise_profile(table, law_target.eval(grid), basis.design_matrix(grid, 15),
                          weights)
    for m in (1, 5, 15):
        direct = ise(SeriesEstimate(table, m).evaluate(grid), law_target.eval(grid))
        assert profile[m - 1] == pytest.approx(direct, rel=1e-12)


def test_sigma_y_hat_pinned():
    assert sigma_y_hat(regression_sample([1.0, -1.0], [0.2, 0.8])) == pytest.approx(1.0)
    assert sigma_y_hat(regression_sample([0.0, 0.0, 0.0], [0.1, 0.2, 0.3])) == 0.0
    with pytest.raises(ValueError):
        sigma_y_hat(density_sample([0.5]))


def test_sigma_y_hat_matches_population_identity():
    target = regression_f1()
    s = gen_regression_sample(10**5, 1, target, seed=21, rep_index=0)
    expected = 0.25 + integrate(lambda x: target.eval(x) ** 2)
    se = (s.y**2).std(ddof=1) / math.sqrt(s.n)
    assert sigma_y_hat(s) == pytest.approx(expected, abs=3.0 * se)


def test_density_estimator_is_one_plus_series():
    rng = np.random.default_rng(13)
    sample = density_sample(rng.uniform(size=200))
    table = empirical_coefficients(sample, 8)
    est = SeriesEstimate(table, 8)
    x = np.linspace(0.0, 1.0, 31)
    basis = TrigBasis(max_index=8)
    tail = sum(table.theta_hat[j] * basis.eval_one(j, x) for j in range(1, 9))
    np.testing.assert_allclose(est.evaluate(x), 1.0 + tail, atol=1e-12)


def test_coefficient_unbiasedness_monte_carlo():
    # MC mean of theta_hat_j within 4 MC standard errors of the quadrature value
    reps, n, m_top = 2000, 200, 10
    law = MarginalLaw(density_f1())
    theta_true = true_coefficients(law.density.eval, m_top)
    rng = np.random.default_rng(31)
    draws = law.quantile(rng.uniform(size=(reps * n)))
    basis = TrigBasis(max_index=m_top)
    acc = np.zeros((reps, m_top))
    for r in range(reps):
        design = basis.design_matrix(draws[r * n : (r + 1) * n], m_top)
        acc[r] = np.sum(design[1:], axis=1) / n
    mc_mean = acc.mean(axis=0)
    mc_se = acc.std(axis=0, ddof=1) / math.sqrt(reps)
    assert np.all(np.abs(mc_mean - theta_true[1:]) <= 4.0 * mc_se)

    target = regression_f1()
    theta_true_r = true_coefficients(target.eval, m_top)
    acc_r = np.zeros((reps, m_top + 1))
    for r in range(reps):
        s = gen_regression_sample(n, 1, target, seed=77, rep_index=r)
        acc_r[r] = empirical_coefficients(s, m_top).theta_hat
    mc_mean_r = acc_r.mean(axis=0)
    mc_se_r = acc_r.std(axis=0, ddof=1) / math.sqrt(reps)
    assert np.all(np.abs(mc_mean_r - theta_true_r) <= 4.0 * mc_se_r)


def test_variance_bound_small():
    # lighter version of the acceptance variance criterion
    reps, n = 600, 500
    law = MarginalLaw(density_f1())
    basis = TrigBasis(max_index=20)
    rng = np.random.default_rng(41)
    draws = law.quantile(rng.uniform(size=(reps * n)))
    thetas = np.empty((reps, 20))
    for r in range(reps):
        design = basis.design_matrix(draws[r * n : (r + 1) * n], 20)
        thetas[r] = np.sum(design[1:], axis=1) / n
    variances = thetas.var(axis=0, ddof=1)
    for m in (5, 10, 20):
        assert np.sum(variances[:m]) <= 1.1 * SUP_NORM_SQ * m / n
