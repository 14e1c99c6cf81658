"""Double-double helpers: unevaluated sums hi + lo with ~32 significant digits.

The error-free transformations (two_sum, split, two_prod) are the classical
Dekker/Knuth ones; addition uses the accurate variant that stays precise under
cancellation.  A value is a normalized pair (hi, lo) with |lo| <= ulp(hi)/2;
comparisons of normalized pairs are therefore plain lexicographic comparisons.

Scalar functions take/return (hi, lo) tuples.  The v_* functions are the same
formulas applied elementwise to numpy arrays; they exist because the nested
interval construction touches 2^n endpoints per level.
"""

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def add(xh, xl, yh, yl):
    sh, se = two_sum(xh, yh)
    th, te = two_sum(xl, yl)
    vh, vl = quick_sum(sh, se + th)
    return quick_sum(vh, vl + te)


def sub(xh, xl, yh, yl):
    return add(xh, xl, -yh, -yl)


def mul(xh, xl, yh, yl):
    p, e = two_prod(xh, yh)
    return quick_sum(p, e + (xh * yl + xl * yh))


def sqr(xh, xl):
    p, e = two_prod(xh, xh)
    return quick_sum(p, e + 2.0 * xh * xl)


def div(xh, xl, yh, yl):
    q1 = xh / yh
    rh, _ = add(xh, xl, *mul(q1, 0.0, -yh, -yl))
    return quick_sum(q1, rh / yh)


def sqrt(xh, xl):
    if xh == 0.0 and xl == 0.0:
        return 0.0, 0.0
    q = math.sqrt(xh)
    rh, _ = add(xh, xl, *mul(q, 0.0, -q, 0.0))
    return quick_sum(q, rh / (2.0 * q))


def v_two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def v_quick_sum(a, b):
    s = a + b
    return s, b - (s - a)


def v_two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def v_add(xh, xl, yh, yl):
    sh, se = v_two_sum(xh, yh)
    th, te = v_two_sum(xl, yl)
    vh, vl = v_quick_sum(sh, se + th)
    return v_quick_sum(vh, vl + te)


def v_mul(xh, xl, yh, yl):
    p, e = v_two_prod(xh, yh)
    return v_quick_sum(p, e + (xh * yl + xl * yh))


def v_sqrt(xh, xl):
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.sqrt(xh)
        rh, _ = v_add(xh, xl, *v_mul(q, np.zeros_like(q), -q, np.zeros_like(q)))
        out_h, out_l = v_quick_sum(q, rh / (2.0 * q))
    zero = xh == 0.0
    if np.any(zero):
        out_h = np.where(zero, 0.0, out_h)
        out_l = np.where(zero, 0.0, out_l)
    return out_h, out_l
