import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from signconf import distributions as dist
from signconf.distributions import Interval
from signconf.errors import DomainError, NumericError

mpmath.mp.dps = 40

INF = math.inf


def mp_norm_cdf(x):
    return float(mpmath.ncdf(mpmath.mpf(x)))


# -- normal CDF ------------------------------------------------------------

def test_norm_cdf_symmetry_point():
    assert dist.norm_cdf(0.0) == 0.5


def test_norm_cdf_far_tail():
    v = dist.norm_cdf(-3.92)
    assert 2 * v == pytest.approx(8.85e-5, abs=0.005e-5)
    assert v == pytest.approx(4.43e-5, abs=0.005e-5)


def test_norm_cdf_at_975_quantile_matches_integrated_density():
    integral, _ = integrate.quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi),
                                 -INF, 1.959964, epsabs=1e-14)
    assert dist.norm_cdf(1.959964) == pytest.approx(0.975, abs=1e-9)
    assert dist.norm_cdf(1.959964) == pytest.approx(integral, abs=1e-12)


def test_norm_cdf_absolute_error_against_mpmath():
    xs = np.linspace(-40, 40, 801)
    err = max(abs(dist.norm_cdf(x) - mp_norm_cdf(x)) for x in xs)
    assert err <= 1e-14


def test_norm_cdf_limits_and_nan():
    assert dist.norm_cdf(-INF) == 0.0
    assert dist.norm_cdf(INF) == 1.0
    with pytest.raises(DomainError):
        dist.norm_cdf(math.nan)


def test_norm_cdf_monotone():
    xs = np.linspace(-12, 12, 20001)
    assert np.all(np.diff(dist.norm_cdf(xs)) >= 0)


def test_norm_sf_keeps_relative_accuracy_in_tail():
    for x in (5.0, 10.0, 20.0, 37.0):
        exact = float(mpmath.ncdf(-mpmath.mpf(x)))
        assert dist.norm_sf(x) == pytest.approx(exact, rel=1e-13)


# -- normal quantile -------------------------------------------------------

def test_norm_quantile_examples():
    assert dist.norm_quantile(0.5) == 0.0
    assert dist.norm_quantile(0.975) == pytest.approx(1.96, abs=1e-3)
    # 1 - 0.95 is not exactly 0.05 in binary
    assert dist.norm_quantile(0.05) == pytest.approx(-dist.norm_quantile(0.95), rel=1e-15)
    assert dist.norm_quantile(0.25) == -dist.norm_quantile(0.75)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
def test_norm_quantile_domain(p):
    with pytest.raises(DomainError):
        dist.norm_quantile(p)


def test_norm_quantile_round_trip_dense_grid():
    p = np.concatenate([np.linspace(1e-6, 1 - 1e-6, 200_001), 10.0 ** -np.arange(1, 300)])
    err = np.abs(dist.norm_cdf(dist.norm_quantile(p)) - p)
    assert err.max() <= 1e-12


def test_norm_quantile_matches_mpmath_relative():
    for p in (1e-300, 1e-100, 1e-20, 1e-5, 0.01, 0.3, 0.49):
        guess = float(stats.norm.ppf(p))
        exact = float(mpmath.findroot(lambda x: mpmath.ncdf(x) - mpmath.mpf(p), guess))
        assert dist.norm_quantile(p) == pytest.approx(exact, rel=1e-14)


def test_norm_quantile_strictly_increasing():
    p = np.linspace(1e-4, 1 - 1e-4, 5001)
    assert np.all(np.diff(dist.norm_quantile(p)) > 0)


@given(st.floats(min_value=1e-300, max_value=1 - 1e-16))
def test_norm_quantile_round_trip_property(p):
    assert abs(dist.norm_cdf(dist.norm_quantile(p)) - p) <= 1e-12


def test_norm_isf_small_tail():
    assert dist.norm_isf(5e-5) == pytest.approx(3.8905918864131, abs=1e-10)
    assert dist.norm_isf(1e-200) == pytest.approx(-dist.norm_quantile(1e-200), rel=1e-15)


# -- Student t ---------------------------------------------------------------

def test_t_normal_limit():
    assert dist.t_quantile(0.975, INF) == dist.norm_quantile(0.975)
    assert dist.t_cdf(1.3, INF) == dist.norm_cdf(1.3)


@pytest.mark.parametrize("df", [0.5, 1, 2, 5, 30, 1e3, INF])
def test_t_cdf_zero_is_half(df):
    assert dist.t_cdf(0.0, df) == pytest.approx(0.5, abs=1e-15)


def test_t_cdf_cauchy_closed_form():
    assert dist.t_cdf(1.0, 1) == pytest.approx(math.atan(1) / math.pi + 0.5, abs=1e-15)
    assert dist.t_cdf(1.0, 1) == pytest.approx(0.75, abs=1e-15)


@pytest.mark.parametrize("df", [0.0, -1.0, math.nan])
def test_t_domain(df):
    with pytest.raises(DomainError):
        dist.t_cdf(0.3, df)
    with pytest.raises(DomainError):
        dist.t_quantile(0.3, df)


@pytest.mark.parametrize("df", [0.7, 1, 2, 3, 5, 12.5, 30, 200])
def test_t_cdf_against_scipy(df):
    x = np.linspace(-60, 60, 2401)
    assert np.max(np.abs(dist.t_cdf(x, df) - stats.t.cdf(x, df))) <= 1e-12
    tail = np.array([3.0, 10.0, 40.0])
    assert np.allclose(dist.t_sf(tail, df), stats.t.sf(tail, df), rtol=1e-11, atol=0)


@pytest.mark.parametrize("df", [1, 2, 5, 30, INF])
def test_t_round_trip_grid(df):
    p = np.linspace(1e-6, 1 - 1e-6, 20_001)
    err = np.abs(np.asarray(dist.t_cdf(dist.t_quantile(p, df), df)) - p)
    assert err.max() <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1e-12, max_value=1 - 1e-12),
       st.sampled_from([1.0, 2.0, 5.0, 30.0, INF]))
def test_t_round_trip_property(p, df):
    assert abs(dist.t_cdf(dist.t_quantile(p, df), df) - p) <= 1e-10


def test_t_isf_small_tail():
    assert dist.t_isf(1e-8, 4) == pytest.approx(stats.t.isf(1e-8, 4), rel=1e-12)


def test_betainc_against_scipy():
    from scipy.special import betainc

    x = np.linspace(0, 1, 101)
    for a, b in [(0.5, 0.5), (2.0, 3.0), (10.0, 0.5), (0.3, 7.0)]:
        assert np.allclose(dist.betainc(a, b, x), betainc(a, b, x), atol=1e-14)


# -- chi-square ---------------------------------------------------------------

def test_chisq_quantile_examples():
    assert dist.chisq_quantile(0.95, 1) == pytest.approx(dist.norm_quantile(0.975) ** 2, rel=1e-14)
    assert dist.chisq_quantile(0.95, 1) == pytest.approx(3.8415, abs=1e-4)
    assert dist.chisq_quantile(0.5, 2) == pytest.approx(2 * math.log(2), rel=1e-14)


@pytest.mark.parametrize("p", [0.5, 0.9, 0.99])
def test_chisq_quantile_one_df_identity(p):
    assert dist.chisq_quantile(p, 1) == pytest.approx(dist.norm_quantile((1 + p) / 2) ** 2, rel=1e-13)


@pytest.mark.parametrize("df", [0.5, 3, 7.5, 40])
def test_chisq_quantile_general_df_against_scipy(df):
    for p in (0.01, 0.3, 0.95):
        assert dist.chisq_quantile(p, df) == pytest.approx(stats.chi2.ppf(p, df), rel=1e-10)


def test_chisq_quantile_domain():
    with pytest.raises(DomainError):
        dist.chisq_quantile(1.0, 1)
    with pytest.raises(DomainError):
        dist.chisq_quantile(0.5, -2)


# -- noncentral chi-square, 1 df ---------------------------------------------

def test_nc_chisq_central_case():
    assert dist.nc_chisq_cdf_1df(3.8415, 0.0) == pytest.approx(0.95, abs=1e-5)
    assert dist.nc_chisq_cdf_1df(dist.chisq_quantile(0.95, 1), 0.0) == pytest.approx(0.95, abs=1e-15)


def test_nc_chisq_low_power_design():
    crit = dist.chisq_quantile(0.95, 1)
    assert dist.nc_chisq_cdf_1df(crit, (1 / 3.394507) ** 2) == pytest.approx(0.94, abs=1e-6)


def test_nc_chisq_empty_event():
    for lam in (0.0, 0.5, 10.0):
        assert dist.nc_chisq_cdf_1df(0.0, lam) == 0.0


def test_nc_chisq_against_scipy():
    for x in (0.1, 1.0, 3.84, 12.0):
        for lam in (0.01, 0.3, 2.0, 9.0):
            assert dist.nc_chisq_cdf_1df(x, lam) == pytest.approx(stats.ncx2.cdf(x, 1, lam), abs=1e-12)
            assert dist.nc_chisq_sf_1df(x, lam) == pytest.approx(stats.ncx2.sf(x, 1, lam), abs=1e-12)


def test_nc_chisq_monotone_grid():
    xs = np.linspace(0, 30, 121)
    lams = np.linspace(0, 30, 121)
    F = np.array([[dist.nc_chisq_cdf_1df(x, lam) for lam in lams] for x in xs])
    assert np.all(np.diff(F, axis=1) <= 1e-15)  # nonincreasing in ncp
    assert np.all(np.diff(F, axis=0) >= -1e-15)  # nondecreasing in x


def test_nc_chisq_domain():
    with pytest.raises(DomainError):
        dist.nc_chisq_cdf_1df(-1.0, 1.0)
    with pytest.raises(DomainError):
        dist.nc_chisq_cdf_1df(1.0, -1.0)


# -- truncated normal -----------------------------------------------------------

def test_interval_rejects_bad_bounds():
    with pytest.raises(DomainError):
        Interval(1.0, 1.0)
    with pytest.raises(DomainError):
        Interval(2.0, 1.0)
    with pytest.raises(DomainError):
        Interval(math.nan, 1.0)
    assert Interval().lower == -INF and Interval().upper == INF


def test_trunc_norm_mean_no_truncation():
    assert dist.trunc_norm_mean(0.0, 1.0, Interval()) == 0.0


def test_trunc_norm_mean_half_line():
    expected = dist.norm_pdf(0.0) / 0.5
    assert dist.trunc_norm_mean(0.0, 1.0, Interval(0.0, INF)) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.7979, abs=1e-4)
    assert dist.quadrature_trunc_norm_mean(0.0, 1.0, Interval(0.0, INF)) == pytest.approx(expected, abs=1e-4)


def test_quadrature_examples():
    assert dist.quadrature_trunc_norm_mean(0.0, 1.0, Interval(), 100_000) == pytest.approx(0.0, abs=1e-6)
    assert dist.quadrature_trunc_norm_mean(0.0, 1.0, Interval(), 1) == 0.0


@pytest.mark.parametrize("sigma", [0.3, 1.0, 3.394507, 10.0])
@pytest.mark.parametrize("c", [-5.0, 0.0, 1.5, 6.65, 20.0])
def test_trunc_mean_closed_form_vs_quadrature_one_sided(sigma, c):
    if (c - 1.0) / sigma > 37:
        pytest.skip("tail mass underflows; the quadrature oracle cannot represent it")
    closed = dist.trunc_norm_mean(1.0, sigma, Interval(c, INF))
    quad = dist.quadrature_trunc_norm_mean(1.0, sigma, Interval(c, INF))
    assert closed == pytest.approx(quad, abs=1e-4)


@pytest.mark.parametrize("mu,sigma,lo,hi", [
    (0.0, 1.0, -1.0, 2.0),
    (2.0, 0.5, 2.5, 3.0),
    (-1.0, 4.0, -INF, -7.0),
    (1.0, 3.394507, -INF, -6.653),
    (0.0, 1.0, 8.0, 9.0),
    (0.0, 1.0, -9.0, -8.5),
    (5.0, 2.0, -3.0, 4.0),
])
def test_trunc_mean_closed_form_vs_quadrature_grid(mu, sigma, lo, hi):
    iv = Interval(lo, hi)
    closed = dist.trunc_norm_mean(mu, sigma, iv)
    assert closed == pytest.approx(dist.quadrature_trunc_norm_mean(mu, sigma, iv), abs=1e-4)
    assert closed == pytest.approx(stats.truncnorm.mean((lo - mu) / sigma, (hi - mu) / sigma,
                                                        loc=mu, scale=sigma), abs=1e-9)
    if math.isfinite(lo) and math.isfinite(hi):
        assert lo < closed < hi


def test_trunc_mean_above_mean_and_increasing_in_cut():
    cuts = np.linspace(-10, 30, 161)
    means = [dist.trunc_norm_mean(1.0, 2.0, Interval(c, INF)) for c in cuts]
    assert all(m > 1.0 for m in means)
    assert all(b > a for a, b in zip(means, means[1:]))


def test_trunc_mean_far_tail_stays_finite():
    m = dist.trunc_norm_mean(0.0, 1.0, Interval(60.0, INF))
    assert 60.0 < m < 60.02


def test_trunc_mean_zero_mass_interval_raises():
    with pytest.raises(NumericError):
        dist.trunc_norm_mean(0.0, 1.0, Interval(60.0, 61.0))


def test_trunc_mean_bad_sigma():
    with pytest.raises(DomainError):
        dist.trunc_norm_mean(0.0, 0.0, Interval())
    with pytest.raises(DomainError):
        dist.quadrature_trunc_norm_mean(0.0, 1.0, Interval(), 0)
