"""Bracketed scalar root finding (Brent's method)."""

from __future__ import annotations

import math
import sys
from typing import Callable

from .errors import NumericError

EPS = sys.float_info.epsilon


def brentq(
    f: Callable[[float], float],
    a: float,
    b: float,
    xtol: float = 1e-300,
    rtol: float = 4 * EPS,
    maxiter: int = 500,
) -> float:
    """Find a root of ``f`` in ``[a, b]``.

    Combines bisection, secant and inverse quadratic interpolation, so it
    never leaves the bracket and converges superlinearly on smooth
    functions.  ``f(a)`` and ``f(b)`` must have opposite signs (or one of
    them be zero).  Iteration stops once the bracket half-width falls
    below ``xtol + rtol * |x|``.
    """
    fa = f(a)
    fb = f(b)
    if math.isnan(fa) or math.isnan(fb):
        raise NumericError("function is NaN at a bracket endpoint")
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise NumericError(
            f"root not bracketed: f({a!r})={fa!r}, f({b!r})={fb!r}"
        )

    # b is the best estimate, a the previous one, c the contrapoint.
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb

        tol = 0.5 * (xtol + rtol * abs(b))
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b

        if abs(e) >= tol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m

        a, fa = b, fb
        if abs(d) > tol:
            b += d
        else:
            b += math.copysign(tol, m)
        fb = f(b)
        if math.isnan(fb):
            raise NumericError(f"function is NaN at x={b!r}")

    raise NumericError(f"brentq did not converge in {maxiter} iterations")
