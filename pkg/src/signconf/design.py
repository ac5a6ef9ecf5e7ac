"""Retrospective design analysis at unit effect size.

Units are scaled so the true effect is theta = 1.  A two-sided level-alpha
test on an estimate with standard error ``tau`` then has power
``Phi(-z + 1/tau) + Phi(-z - 1/tau)`` with ``z = Phi^-1(1 - alpha/2)``.
Given a level and a power, :func:`solve_tau` recovers ``tau``; the other
functions describe what significant estimates look like at that design:
how often they carry the wrong sign (type S) and by how much they
overstate the effect (exaggeration, or type M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import distributions as dist
from .distributions import Interval
from .errors import DomainError, NumericError, UndersampledError
from .roots import brentq

TAU_BRACKET = (1e-9, 1e6)


def _check_alpha(alpha: float, name: str = "alpha") -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {alpha!r}")
    return alpha


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not tau > 0.0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    return tau


@dataclass(frozen=True)
class DesignPoint:
    """Two-sided level ``alpha`` and power against theta = 1."""

    alpha: float = 0.05
    power: float = 0.8

    def __post_init__(self):
        alpha = _check_alpha(self.alpha)
        power = float(self.power)
        if not power > alpha:
            raise DomainError(
                f"power must exceed alpha (got power={power!r}, alpha={alpha!r})"
            )
        if not power < 1.0:
            raise DomainError(f"power must be below 1, got {power!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "power", power)


@dataclass(frozen=True)
class DesignAnalysis:
    alpha: float
    power: float
    tau: float
    crit_z: float
    type_s: float
    min_ratio: float
    exaggeration: float
    pos_mean: float
    neg_mean: float


@dataclass(frozen=True)
class McResult:
    power: float
    type_s: float
    exaggeration: float
    n_sims: int
    seed: int
    exaggeration_se: float
    n_significant: int


def power_at_effect(effect_over_tau: float, alpha: float) -> float:
    """Rejection probability of the two-sided test when theta/tau = d.

    ``d = 0`` gives ``alpha``.
    """
    d = float(effect_over_tau)
    if math.isnan(d) or d < 0:
        raise DomainError(f"effect/tau must be nonnegative, got {d!r}")
    alpha = _check_alpha(alpha)
    z = dist.norm_isf(alpha / 2.0)
    return dist.norm_cdf(-z + d) + dist.norm_cdf(-z - d)


def power_two_sided(tau: float, alpha: float) -> float:
    return power_at_effect(1.0 / _check_tau(tau), alpha)


def power_nc_chisq(tau: float, alpha: float) -> float:
    """Same power, written as a noncentral chi-square(1) tail probability."""
    tau = _check_tau(tau)
    alpha = _check_alpha(alpha)
    crit = dist.chisq_quantile(1.0 - alpha, 1.0)
    return 1.0 - dist.nc_chisq_cdf_1df(crit, 1.0 / tau ** 2)


def solve_tau(d: DesignPoint) -> float:
    """Standard error at which the level-``d.alpha`` test has power ``d.power``.

    Power falls strictly from 1 towards alpha as tau grows, so a bracketed
    solve on ``TAU_BRACKET`` has exactly one root.
    """
    lo, hi = TAU_BRACKET

    def gap(tau):
        return power_two_sided(tau, d.alpha) - d.power

    if not gap(lo) > 0 > gap(hi):
        raise NumericError(
            f"no standard error in [{lo:g}, {hi:g}] gives power {d.power!r}"
        )
    tau = brentq(gap, lo, hi, xtol=1e-300, rtol=1e-15)
    if abs(gap(tau)) > 1e-10:
        raise NumericError(f"tau solve left residual {gap(tau):.3g}")
    return tau


def type_s(tau: float, alpha: float) -> float:
    """P(estimate has the wrong sign | H0 rejected), true effect +1."""
    tau = _check_tau(tau)
    alpha = _check_alpha(alpha)
    z = dist.norm_isf(alpha / 2.0)
    return dist.norm_cdf(-z - 1.0 / tau) / power_two_sided(tau, alpha)


def exaggeration_analytic(d: DesignPoint) -> DesignAnalysis:
    """Expected |estimate/theta| given rejection, from truncated normal means."""
    return _analysis(solve_tau(d), d.alpha, d.power)


def analyze_tau(tau: float, alpha: float) -> DesignAnalysis:
    """Like :func:`exaggeration_analytic` for a known standard error."""
    tau = _check_tau(tau)
    return _analysis(tau, alpha, power_two_sided(tau, alpha))


def _analysis(tau: float, alpha: float, power: float) -> DesignAnalysis:
    crit_z = dist.norm_isf(alpha / 2.0) * tau
    pos_mean = dist.trunc_norm_mean(1.0, tau, Interval(crit_z, math.inf))
    neg_mean = dist.trunc_norm_mean(1.0, tau, Interval(-math.inf, -crit_z))
    ts = dist.norm_cdf((-crit_z - 1.0) / tau) / power
    exaggeration = pos_mean * (1.0 - ts) + abs(neg_mean) * ts
    return DesignAnalysis(
        alpha=alpha,
        power=power,
        tau=tau,
        crit_z=crit_z,
        type_s=ts,
        min_ratio=crit_z,
        exaggeration=exaggeration,
        pos_mean=pos_mean,
        neg_mean=neg_mean,
    )


def retrodesign_power(effect: float, se: float, alpha: float = 0.05,
                      df: float = math.inf) -> tuple[float, float]:
    """``(power, type_s)`` for an assumed effect, from exact t tails."""
    effect, se = float(effect), float(se)
    if not effect > 0:
        raise DomainError(f"effect must be positive, got {effect!r}")
    if not se > 0:
        raise DomainError(f"se must be positive, got {se!r}")
    alpha = _check_alpha(alpha)
    z = dist.t_isf(alpha / 2.0, df)
    shift = effect / se
    p_hi = dist.t_sf(z - shift, df)
    p_lo = dist.t_cdf(-z - shift, df)
    power = p_hi + p_lo
    return power, p_lo / power


def retrodesign_mc(effect: float, se: float, alpha: float = 0.05,
                   df: float = math.inf, n_sims: int = 10_000,
                   seed: int = 0) -> McResult:
    """Power, type S and simulated exaggeration for an assumed effect.

    Power and type S come from :func:`retrodesign_power`.  Exaggeration is
    the mean of |estimate|/effect over significant draws of
    ``effect + se * T``, where T is drawn from t(df) by inverting seeded
    uniforms.
    """
    if int(n_sims) != n_sims or n_sims < 1:
        raise DomainError(f"n_sims must be a positive integer, got {n_sims!r}")
    n_sims = int(n_sims)
    power, ts = retrodesign_power(effect, se, alpha, df)
    effect, se = float(effect), float(se)
    z = dist.t_isf(alpha / 2.0, df)

    rng = np.random.default_rng(seed)
    u = rng.random(n_sims)
    # random() can return exactly 0
    u = np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
    draws = np.atleast_1d(dist.t_quantile(u, df))
    estimate = effect + se * draws
    significant = np.abs(estimate) >= se * z
    n_sig = int(significant.sum())
    if n_sig == 0:
        raise UndersampledError(
            f"no significant draws in {n_sims} simulations; increase n_sims"
        )
    ratio = np.abs(estimate[significant]) / effect
    exag_se = float(ratio.std(ddof=1) / math.sqrt(n_sig)) if n_sig > 1 else math.nan
    return McResult(
        power=power,
        type_s=ts,
        exaggeration=float(ratio.mean()),
        n_sims=n_sims,
        seed=seed,
        exaggeration_se=exag_se,
        n_significant=n_sig,
    )


def one_tailed_wrong_sign(alpha: float, tau: float) -> float:
    """Rejection rate of a level-alpha test for a negative effect when theta = +1."""
    alpha = _check_alpha(alpha)
    tau = _check_tau(tau)
    return dist.norm_cdf(dist.norm_quantile(alpha) - 1.0 / tau)
