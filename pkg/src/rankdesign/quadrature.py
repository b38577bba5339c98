"""Adaptive Simpson quadrature for piecewise-smooth integrands.

Integrands here are smooth except at a known, small set of points (band
cutpoints and effort switch points), so the caller passes those as forced
breakpoints and each piece is integrated independently.
"""

from __future__ import annotations

import math

from .errors import QuadratureError

DEFAULT_REL_TOL = 1e-8
MAX_DEPTH = 20


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return (fa + 4.0 * fm + fb) * h / 6.0


def _adaptive(f, a, m, b, fa, fm, fb, whole, eps, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0, abs(delta) / 15.0
    if depth >= MAX_DEPTH:
        raise QuadratureError(
            f"Simpson refinement did not converge after {MAX_DEPTH} levels on [{a}, {b}]",
            partial=left + right + delta / 15.0,
        )
    lv, le = _adaptive(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth + 1)
    rv, re = _adaptive(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth + 1)
    return lv + rv, le + re


def adaptive_simpson(f, a: float, b: float, rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    """Integrate f over [a, b]; returns (value, error estimate).

    The tolerance is relative to a first-pass magnitude estimate, with an
    absolute floor so an identically-zero integrand terminates immediately.
    """
    if b <= a:
        return 0.0, 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = _simpson(fa, fm, fb, b - a)
    scale = max(abs(whole), (abs(fa) + 4.0 * abs(fm) + abs(fb)) * (b - a) / 6.0)
    eps = rel_tol * max(scale, 1e-300)
    if scale == 0.0:
        # integrand numerically zero at the probe points; one refinement to confirm
        lv = _simpson(fa, f(0.5 * (a + m)), fm, m - a)
        rv = _simpson(fm, f(0.5 * (m + b)), fb, b - m)
        if lv == 0.0 and rv == 0.0:
            return 0.0, 0.0
        scale = abs(lv + rv)
        eps = rel_tol * scale
    return _adaptive(f, a, m, b, fa, fm, fb, whole, eps, 0)


def integrate_piecewise(f, breakpoints, rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    """Integrate f over consecutive [b_i, b_{i+1}] pieces; sums values and errors."""
    pts = sorted(set(float(x) for x in breakpoints))
    total = 0.0
    err = 0.0
    partial_failure = None
    for a, b in zip(pts, pts[1:]):
        if b - a <= 1e-15 * max(1.0, abs(b)):
            continue
        try:
            v, e = adaptive_simpson(f, a, b, rel_tol)
        except QuadratureError as exc:
            if partial_failure is None:
                partial_failure = exc
            v, e = exc.partial, math.inf
        total += v
        err += e
    if partial_failure is not None:
        raise QuadratureError(str(partial_failure), partial=total)
    return total, err
