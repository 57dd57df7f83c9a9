import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import gammainc

from corelab.thresholds import (DELTA, compute_ck, fit_truncated_poisson, gamma_bound,
                                poisson_cdf, poisson_tail, truncated_poisson_mean,
                                truncated_poisson_pmf)
from oracles import ck_dense_grid


def test_tail_analytic():
    assert poisson_tail(1.0, 1) == pytest.approx(1 - math.exp(-1), rel=1e-13)
    assert poisson_tail(3.7, 0) == 1.0
    assert poisson_tail(0.0, 2) == 0.0
    with pytest.raises(ValueError):
        poisson_tail(-1.0, 2)


@pytest.mark.parametrize("lam", [0.3, 1.0, 5.5, 18.2, 34.6667, 60.0, 119.0])
@pytest.mark.parametrize("j", [1, 2, 5, 14, 30, 59, 100])
def test_tail_against_regularised_gamma(lam, j):
    # P(X >= j) = P(j, lam), the regularised lower incomplete gamma
    ref = gammainc(j, lam)
    if ref > 1e-300:
        assert poisson_tail(lam, j) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_tail_monte_carlo():
    rng = np.random.default_rng(2024)
    N = 10_000_000
    x = rng.poisson(34.6667, size=N)
    p_hat = float(np.mean(x >= 14))
    p = poisson_tail(34.6667, 14)
    sigma = math.sqrt(max(p * (1 - p), 1e-12) / N)
    assert abs(p_hat - p) <= 3 * sigma + 1e-7


@given(st.floats(0.01, 120), st.integers(1, 80))
def test_tail_properties(lam, j):
    t = poisson_tail(lam, j)
    assert 0.0 <= t <= 1.0
    assert poisson_tail(lam, j + 1) <= t
    assert poisson_tail(lam * 1.1, j) >= t - 1e-15
    assert abs(t + poisson_cdf(lam, j - 1) - 1.0) <= 1e-12


def test_c15_value():
    r = compute_ck(15, 1e-3)
    assert abs(r.c_k - 20.98) <= 0.02
    # frozen from a 10^-6 grid over [17, 20] with scipy's Poisson survival function
    assert r.c_k == pytest.approx(ck_dense_grid(15, 17.0, 20.0, 1e-6), abs=1e-6)
    assert r.c_k == pytest.approx(20.984275610, abs=1e-8)
    assert r.c_k == pytest.approx(r.lambda_star / poisson_tail(r.lambda_star, 14), rel=1e-12)


def test_c3_against_dense_grid():
    r = compute_ck(3, 1e-3)
    grid = ck_dense_grid(3, 0.01, 20.0, 1e-4)
    assert abs(r.c_k - grid) <= 1e-3
    assert r.c_k == pytest.approx(3.350918872, abs=1e-8)


@pytest.mark.parametrize("k", range(15, 41))
def test_ck_bounds(k):
    r = compute_ck(k)
    assert max(20, k) <= r.c_k <= 2 * k


@pytest.mark.parametrize("k", [3, 4, 7, 15, 40, 60])
def test_ck_local_minimum_certificate(k):
    r = compute_ck(k, 1e-6)
    for lam in (r.lambda_star - 1e-6, r.lambda_star + 1e-6):
        assert lam / poisson_tail(lam, k - 1) >= r.c_k - 1e-12


def test_ck_domain():
    with pytest.raises(ValueError):
        compute_ck(2)
    with pytest.raises(ValueError):
        compute_ck(5, 0.0)


def gamma_mp(k, lam):
    mpmath.mp.dps = 50
    d = mpmath.mpf(DELTA)
    lam = mpmath.mpf(lam)
    return (1 + d) * mpmath.e ** k * (lam / (k - 1)) ** (k - 1) * mpmath.e ** (-(1 - d) * lam)


def test_gamma_claim_value():
    lam = (7 * 15 - 1) / 3
    b = gamma_bound(15, lam)
    assert b.within_hypothesis and b.value < 1e-3
    assert b.value == pytest.approx(float(gamma_mp(15, lam)), rel=1e-12)
    assert b.value == pytest.approx(9.712733963e-4, rel=1e-9)


def test_gamma_flags_outside_hypothesis():
    b = gamma_bound(15, 20.0)
    assert not b.within_hypothesis and b.value > 0


def test_gamma_decreasing_in_lambda():
    lams = np.linspace(15, 120, 100)
    vals = [gamma_bound(15, x).log_value for x in lams]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_gamma_decreasing_in_k_at_hypothesis_edge():
    vals = [gamma_bound(k, (7 * k - 1) / 3).log_value for k in range(5, 61)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@given(st.floats(0.0, 80.0), st.integers(1, 40))
def test_truncated_pmf_normalised(mu, k):
    p = truncated_poisson_pmf(mu, k)
    assert (p >= 0).all()
    assert abs(p.sum() - 1.0) <= 1e-9


def test_fit_synthetic_truncated_poisson():
    rng = np.random.default_rng(7)
    draws = rng.poisson(25.0, size=1_400_000)
    draws = draws[draws >= 15][:1_000_000]
    assert len(draws) == 1_000_000
    values, counts = np.unique(draws, return_counts=True)
    fit = fit_truncated_poisson(dict(zip(values.tolist(), counts.tolist())), 15)
    assert abs(fit.mu_hat - 25.0) <= 0.05
    assert fit.tv_distance <= 0.005


def test_fit_single_point_and_degenerate():
    fit = fit_truncated_poisson({16: 50}, 15)
    assert not fit.degenerate and fit.mu_hat > 0 and 0 <= fit.tv_distance <= 1
    fit = fit_truncated_poisson({15: 50}, 15)
    assert fit.degenerate and fit.mu_hat == 0.0 and fit.tv_distance == 0.0


def test_fit_rejects_bad_histograms():
    with pytest.raises(ValueError):
        fit_truncated_poisson({}, 5)
    with pytest.raises(ValueError):
        fit_truncated_poisson({4: 3, 6: 1}, 5)


def test_fit_is_mean_matching_mle():
    hist = {15: 30, 16: 40, 18: 25, 22: 5}
    fit = fit_truncated_poisson(hist, 15)

    def loglik(mu):
        return sum(c * (d * math.log(mu) - mu - math.lgamma(d + 1) - math.log(poisson_tail(mu, 15)))
                   for d, c in hist.items())

    for mu in (fit.mu_hat * 0.98, fit.mu_hat * 1.02):
        assert loglik(mu) < loglik(fit.mu_hat)


@pytest.mark.parametrize("mu", [1e-300, 1e-30, 1e-5])
def test_tiny_mean_does_not_underflow(mu):
    assert poisson_tail(mu, 40) >= 0.0
    p = truncated_poisson_pmf(mu, 40)
    assert p[0] == pytest.approx(1.0)
    assert truncated_poisson_mean(mu, 40) == pytest.approx(40.0, abs=1e-3)
