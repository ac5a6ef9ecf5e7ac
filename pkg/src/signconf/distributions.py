"""Normal, Student t and chi-square distribution functions, plus truncated
normal means.

Every function accepts a scalar or a numpy array and returns a float for
scalar input.  Tail probabilities are evaluated through complementary
functions (``norm_sf``, ``t_sf``) so that very small p-values keep their
relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, erfc, erfcx

from .errors import DomainError, NumericError
from .roots import brentq

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)
_EPS = np.finfo(float).eps
_TINY = 1e-300

DEFAULT_QUADRATURE_N = 100_000


def _arr(x, name="x"):
    a = np.asarray(x, dtype=float)
    if np.any(np.isnan(a)):
        raise DomainError(f"{name} must not be NaN")
    return a


def _out(a):
    if np.ndim(a) == 0:
        return float(a)
    return a


def _check_df(df):
    df = float(df)
    if math.isnan(df) or df <= 0:
        raise DomainError(f"degrees of freedom must be positive, got {df!r}")
    return df


def _check_prob(p, name="p"):
    a = _arr(p, name)
    if np.any((a <= 0.0) | (a >= 1.0)):
        raise DomainError(f"{name} must lie strictly between 0 and 1")
    return a


# ---------------------------------------------------------------------------
# normal
# ---------------------------------------------------------------------------

def norm_pdf(x):
    x = _arr(x)
    return _out(np.exp(-0.5 * x * x) / SQRT2PI)


def norm_cdf(x):
    """Standard normal CDF, Phi(x)."""
    x = _arr(x)
    return _out(0.5 * erfc(-x / SQRT2))


def norm_sf(x):
    """Upper tail 1 - Phi(x), accurate far into the right tail."""
    x = _arr(x)
    return _out(0.5 * erfc(x / SQRT2))


# Acklam's rational approximation, relative error below 1.2e-9, polished
# afterwards by a Halley step to full double precision.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _ppf_lower(q):
    """Quantile for 0 < q <= 0.5 (so the result is <= 0)."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t = np.sqrt(-2.0 * np.log(q))
        tail = (((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5]) / \
            ((((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0)
        r = q - 0.5
        s = r * r
        central = (((((_A[0] * s + _A[1]) * s + _A[2]) * s + _A[3]) * s + _A[4]) * s + _A[5]) * r / \
            (((((_B[0] * s + _B[1]) * s + _B[2]) * s + _B[3]) * s + _B[4]) * s + 1.0)
        x = np.where(q < _P_LOW, tail, central)

        e = 0.5 * erfc(-x / SQRT2) - q
        dens = np.exp(-0.5 * x * x) / SQRT2PI
        u = e / dens
        step = u / (1.0 + 0.5 * x * u)
        x = np.where(dens > 0, x - step, x)
    return x


def norm_quantile(p):
    """Inverse of :func:`norm_cdf` on (0, 1)."""
    p = _check_prob(p)
    upper = p > 0.5
    q = np.where(upper, 1.0 - p, p)
    x = _ppf_lower(q)
    return _out(np.where(upper, -x, x))


def norm_isf(q):
    """Inverse of :func:`norm_sf`; ``norm_isf(q) == -norm_quantile(q)``.

    Use this for small upper-tail probabilities, where forming ``1 - q``
    would throw away digits.
    """
    q = _check_prob(q, "q")
    return _out(-np.asarray(norm_quantile(q)))


# ---------------------------------------------------------------------------
# incomplete beta / Student t
# ---------------------------------------------------------------------------

def _betacf(a, b, x, maxit):
    """Continued fraction for I_x(a, b) (modified Lentz), vectorized over x."""
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < fpmin, fpmin, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, maxit + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < fpmin, fpmin, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < fpmin, fpmin, c)
        d = 1.0 / d
        h = np.where(active, h * d * c, h)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < fpmin, fpmin, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < fpmin, fpmin, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= 2 * _EPS
        if not active.any():
            return h
    raise NumericError(f"incomplete beta continued fraction did not converge "
                       f"(a={a}, b={b})")


def _betacf_scalar(a, b, x, maxit):
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, maxit + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 2 * _EPS:
            return h
    raise NumericError(f"incomplete beta continued fraction did not converge "
                       f"(a={a}, b={b})")


def _cf(a, b, x, maxit):
    if x.size <= 4:
        return np.array([_betacf_scalar(a, b, float(v), maxit) for v in x])
    return _betacf(a, b, x, maxit)


def betainc(a: float, b: float, x, xc=None, logx=None, logxc=None):
    """Regularized incomplete beta I_x(a, b).

    ``xc`` may carry ``1 - x`` computed without cancellation, and
    ``logx``/``logxc`` their logarithms; for large ``a`` or ``b`` the
    prefactor is only as accurate as these logs.
    """
    x = np.asarray(x, dtype=float)
    xc = 1.0 - x if xc is None else np.asarray(xc, dtype=float)
    with np.errstate(divide="ignore"):
        logx = np.log(x) if logx is None else np.asarray(logx, dtype=float)
        logxc = np.log(xc) if logxc is None else np.asarray(logxc, dtype=float)
    x, xc, logx, logxc = np.broadcast_arrays(x, xc, logx, logxc)
    out = np.empty(x.shape)
    out[x <= 0.0] = 0.0
    out[xc <= 0.0] = 1.0
    inner = (x > 0.0) & (xc > 0.0)
    if inner.any():
        xi, xci = x[inner], xc[inner]
        lbeta = -float(betaln(a, b))
        front = np.exp(lbeta + a * logx[inner] + b * logxc[inner])
        maxit = int(300 + 20 * math.sqrt(a + b))
        direct = xi < (a + 1.0) / (a + b + 2.0)
        res = np.empty_like(xi)
        if direct.any():
            res[direct] = front[direct] * _cf(a, b, xi[direct], maxit) / a
        if (~direct).any():
            res[~direct] = 1.0 - front[~direct] * _cf(b, a, xci[~direct], maxit) / b
        out[inner] = res
    return _out(out)


def t_pdf(x, df):
    df = _check_df(df)
    x = _arr(x)
    if math.isinf(df):
        return norm_pdf(x)
    logc = -0.5 * math.log(df) - float(betaln(df / 2.0, 0.5))
    with np.errstate(over="ignore"):
        return _out(np.exp(logc - 0.5 * (df + 1) * np.log1p(x * x / df)))


def _t_tail(x, df):
    """P(T > |x|) for finite df."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x2 = x * x
        w = df / (df + x2)
        wc = x2 / (df + x2)
        logw = -np.log1p(x2 / df)
        logwc = np.log(x2) - np.log(df + x2)
    big = np.isinf(x2)
    w = np.where(big, 0.0, w)
    wc = np.where(big, 1.0, wc)
    logwc = np.where(big, 0.0, logwc)
    return 0.5 * np.asarray(betainc(df / 2.0, 0.5, w, wc, logw, logwc))


def t_sf(x, df):
    """Upper tail P(T > x) of Student's t; df may be ``math.inf``."""
    df = _check_df(df)
    x = _arr(x)
    if math.isinf(df):
        return norm_sf(x)
    tail = _t_tail(x, df)
    return _out(np.where(x > 0, tail, 1.0 - tail))


def t_cdf(x, df):
    """Student t CDF; ``df = math.inf`` gives the normal CDF."""
    df = _check_df(df)
    x = _arr(x)
    if math.isinf(df):
        return norm_cdf(x)
    tail = _t_tail(x, df)
    return _out(np.where(x > 0, 1.0 - tail, tail))


def _t_isf_positive(q, df):
    """Solve P(T > t) = q for 0 < q <= 0.5, returning t >= 0."""
    if df == 1.0:
        return 1.0 / np.tan(np.pi * q)
    if df == 2.0:
        return (1.0 - 2.0 * q) / np.sqrt(2.0 * q * (1.0 - q))

    z = -_ppf_lower(q)
    t = z + (z ** 3 + z) / (4.0 * df)
    lo = np.zeros_like(q)
    hi = np.maximum(t, 1.0)
    for _ in range(4000):
        short = np.asarray(_t_tail(hi, df)) > q
        if not short.any():
            break
        lo = np.where(short, hi, lo)
        hi = np.where(short, hi * 2.0, hi)
    else:
        raise NumericError("could not bracket t quantile")
    t = np.clip(t, lo, hi)

    active = np.ones(q.shape, dtype=bool)
    for _ in range(400):
        f = np.asarray(_t_tail(t, df)) - q
        # f is decreasing in t
        lo = np.where(f > 0, t, lo)
        hi = np.where(f < 0, t, hi)
        dens = np.asarray(t_pdf(t, df))
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = t + f / dens
        wide = (lo > 0) & (hi > 4.0 * lo)
        mid = np.where(wide, np.sqrt(lo * hi), 0.5 * (lo + hi))
        ok = np.isfinite(newton) & (newton > lo) & (newton < hi)
        t_new = np.where(ok, newton, mid)
        t_new = np.where(f == 0, t, t_new)
        done = (np.abs(t_new - t) <= 4 * _EPS * np.abs(t_new)) | (f == 0)
        t = np.where(active, t_new, t)
        active &= ~done
        if not active.any():
            return t
    if np.all(np.abs(t_new - t) <= 1e-9 * np.abs(t)):
        # stalled at the noise floor of the tail evaluation
        return t
    raise NumericError("t quantile iteration did not converge")


def t_quantile(p, df):
    """Inverse of :func:`t_cdf`; ``df = math.inf`` gives the normal quantile."""
    df = _check_df(df)
    p = _check_prob(p)
    if math.isinf(df):
        return norm_quantile(p)
    upper = p > 0.5
    q = np.atleast_1d(np.where(upper, 1.0 - p, p))
    t = _t_isf_positive(q, df).reshape(p.shape)
    return _out(np.where(upper, t, -t))


def t_isf(q, df):
    """Inverse of :func:`t_sf`, accurate for small upper-tail ``q``."""
    df = _check_df(df)
    q = _check_prob(q, "q")
    if math.isinf(df):
        return norm_isf(q)
    lower = q > 0.5
    qq = np.atleast_1d(np.where(lower, 1.0 - q, q))
    t = _t_isf_positive(qq, df).reshape(q.shape)
    return _out(np.where(lower, -t, t))


# ---------------------------------------------------------------------------
# chi-square
# ---------------------------------------------------------------------------

def _gammainc_lower(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x), scalar."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    lead = a * math.log(x) - x - math.lgamma(a)
    if x < a + 1.0:
        ap, total, term = a, 1.0 / a, 1.0 / a
        for _ in range(10_000):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                return total * math.exp(lead)
    else:
        b = x + 1.0 - a
        c = 1.0 / _TINY
        d = 1.0 / b
        h = d
        for i in range(1, 10_000):
            an = -i * (i - a)
            b += 2.0
            d = an * d + b
            if abs(d) < _TINY:
                d = _TINY
            c = b + an / c
            if abs(c) < _TINY:
                c = _TINY
            d = 1.0 / d
            delta = d * c
            h *= delta
            if abs(delta - 1.0) < _EPS:
                return 1.0 - math.exp(lead) * h
    raise NumericError(f"incomplete gamma did not converge (a={a}, x={x})")


def chisq_cdf(x: float, df: float) -> float:
    df = _check_df(df)
    x = float(x)
    if math.isnan(x):
        raise DomainError("x must not be NaN")
    if df == 1.0:
        return nc_chisq_cdf_1df(max(x, 0.0), 0.0)
    return _gammainc_lower(df / 2.0, max(x, 0.0) / 2.0)


def chisq_quantile(p: float, df: float) -> float:
    """Quantile of the central chi-square distribution."""
    df = _check_df(df)
    if math.isinf(df):
        raise DomainError("chi-square needs finite degrees of freedom")
    p = float(_check_prob(p))
    if df == 1.0:
        # P(Z^2 <= x) = 2 Phi(sqrt x) - 1
        if p < 0.5:
            return norm_quantile((1.0 + p) / 2.0) ** 2
        return norm_isf((1.0 - p) / 2.0) ** 2
    if df == 2.0:
        return -2.0 * math.log1p(-p)
    hi = max(df, 1.0)
    while chisq_cdf(hi, df) < p:
        hi *= 2.0
        if hi > 1e300:
            raise NumericError("could not bracket chi-square quantile")
    return brentq(lambda v: chisq_cdf(v, df) - p, 0.0, hi)


def nc_chisq_cdf_1df(x, ncp):
    """CDF of the noncentral chi-square with one degree of freedom.

    Uses Z^2 with Z ~ N(sqrt(ncp), 1):
    P(Z^2 <= x) = Phi(sqrt x - sqrt ncp) - Phi(-sqrt x - sqrt ncp).
    """
    x = _arr(x)
    ncp = _arr(ncp, "ncp")
    if np.any(x < 0) or np.any(ncp < 0):
        raise DomainError("x and ncp must be nonnegative")
    s, m = np.sqrt(x), np.sqrt(ncp)
    return _out(np.asarray(norm_cdf(s - m)) - np.asarray(norm_cdf(-s - m)))


def nc_chisq_sf_1df(x, ncp):
    """Upper tail of :func:`nc_chisq_cdf_1df`, evaluated without cancellation."""
    x = _arr(x)
    ncp = _arr(ncp, "ncp")
    if np.any(x < 0) or np.any(ncp < 0):
        raise DomainError("x and ncp must be nonnegative")
    s, m = np.sqrt(x), np.sqrt(ncp)
    return _out(np.asarray(norm_sf(s - m)) + np.asarray(norm_cdf(-s - m)))


# ---------------------------------------------------------------------------
# truncated normal
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Open interval (lower, upper); either end may be infinite."""

    lower: float = -math.inf
    upper: float = math.inf

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if math.isnan(lo) or math.isnan(hi):
            raise DomainError("interval bounds must not be NaN")
        if not lo < hi:
            raise DomainError(f"need lower < upper, got ({lo}, {hi})")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


def _standardize(mu, sigma, iv):
    if not sigma > 0 or math.isinf(sigma):
        raise DomainError(f"sigma must be positive and finite, got {sigma!r}")
    if math.isnan(mu) or math.isinf(mu):
        raise DomainError(f"mu must be finite, got {mu!r}")
    return (iv.lower - mu) / sigma, (iv.upper - mu) / sigma


def _std_mass(a, b):
    if a >= 0:
        return norm_sf(a) - norm_sf(b)
    if b <= 0:
        return norm_cdf(b) - norm_cdf(a)
    return 1.0 - norm_cdf(a) - norm_sf(b)


def _std_trunc_mean(a: float, b: float) -> float:
    if math.isinf(b) and not math.isinf(a):
        # inverse Mills ratio; the scaled erfc keeps this finite for large a
        return math.sqrt(2.0 / math.pi) / float(erfcx(a / SQRT2))
    if math.isinf(a) and not math.isinf(b):
        return -math.sqrt(2.0 / math.pi) / float(erfcx(-b / SQRT2))
    mass = _std_mass(a, b)
    if not mass > 0:
        raise NumericError(f"normal mass of ({a}, {b}) underflows to zero")
    return (norm_pdf(a) - norm_pdf(b)) / mass


def trunc_norm_mean(mu: float, sigma: float, iv: Interval) -> float:
    """Mean of N(mu, sigma^2) conditioned on falling inside ``iv``."""
    a, b = _standardize(mu, sigma, iv)
    if math.isinf(a) and math.isinf(b):
        return float(mu)
    return mu + sigma * _std_trunc_mean(a, b)


def quadrature_trunc_norm_mean(mu: float, sigma: float, iv: Interval,
                               n: int = DEFAULT_QUADRATURE_N) -> float:
    """Midpoint-rule estimate of :func:`trunc_norm_mean`.

    Averages the truncated distribution's quantiles at u = (i - 0.5)/n,
    i = 1..n.  Independent of the closed form, so the two cross-check
    each other.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    a, b = _standardize(mu, sigma, iv)
    # work in the lower tail where Phi has full relative precision
    flip = a + b > 0
    if flip:
        a, b = -b, -a
    lo, hi = norm_cdf(a), norm_cdf(b)
    if not hi - lo > 0:
        raise NumericError(f"normal mass of ({a}, {b}) underflows to zero")
    u = (np.arange(1, int(n) + 1) - 0.5) / n
    z = _ppf_lower_any(lo + (hi - lo) * u)
    m = float(np.mean(z))
    return mu + sigma * (-m if flip else m)


def _ppf_lower_any(p):
    upper = p > 0.5
    x = _ppf_lower(np.where(upper, 1.0 - p, p))
    return np.where(upper, -x, x)
