"""Finite-depth piecewise-linear conjugacy between two interval systems.

phi_N matches model and target endpoints address for address through level N
and interpolates linearly in between: across paired gaps this is the exact
affine gap-to-gap map, across the remaining level-N segments it approximates
the limiting homeomorphism with sup-error at most the widest level-N target
segment.  Outside the hull both tails are translations (slope one).

Evaluation is exact at knots by construction: a query equal to a stored knot
abscissa returns the paired ordinate bit for bit, which is what lets orbits
of F* = phi o F o phi^(-1) lock onto the endpoint cycles instead of drifting
off the invariant set within a handful of expanding steps.  Interior
arithmetic runs in double-double; public results are correctly rounded.
"""

import random
from dataclasses import dataclass, field

import numpy as np

from . import _dd
from .errors import CantorDynError, DomainError


@dataclass(frozen=True)
class MonotonePLMap:
    """Strictly increasing piecewise-linear map with slope-one tails.

    xs/ys are the knot coordinates (model endpoints paired with target
    endpoints at the same address), xs_lo/ys_lo their double-double tails.
    err_bound is the certified sup-distance to the depth-limit map: the
    widest level-N target segment.
    """

    xs: np.ndarray
    ys: np.ndarray
    err_bound: float
    depth: int
    xs_lo: np.ndarray = field(repr=False, default=None)
    ys_lo: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.xs_lo is None:
            object.__setattr__(self, "xs_lo", np.zeros_like(self.xs))
        if self.ys_lo is None:
            object.__setattr__(self, "ys_lo", np.zeros_like(self.ys))

    @property
    def breakpoints(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))


def _interleave(a, b):
    out = np.empty(a.size + b.size)
    out[0::2] = a
    out[1::2] = b
    return out


def build_phi(model, target, N):
    """Pair the level-N endpoints of two interval systems into a MonotonePLMap.

    Both systems must be built at least N deep (DomainError otherwise).  The
    knot set automatically contains every shallower endpoint pair, since a
    segment endpoint survives into all deeper levels.
    """
    N = int(N)
    if N < 0:
        raise DomainError(f"depth must be >= 0, got {N}")
    if model.depth < N or target.depth < N:
        raise DomainError(
            f"systems of depth {model.depth} and {target.depth} cannot pair "
            f"level {N}"
        )
    xs = _interleave(model.level_a[N], model.level_b[N])
    xs_lo = _interleave(model.a_lo[N], model.b_lo[N])
    ys = _interleave(target.level_a[N], target.level_b[N])
    ys_lo = _interleave(target.a_lo[N], target.b_lo[N])
    if not (np.all(np.diff(xs) > 0.0) and np.all(np.diff(ys) > 0.0)):
        raise CantorDynError("endpoint pairing is not strictly increasing")
    err = float(np.max(target.level_b[N] - target.level_a[N]))
    return MonotonePLMap(xs=xs, ys=ys, err_bound=err, depth=N,
                         xs_lo=xs_lo, ys_lo=ys_lo)


def _eval_dd(xs, xs_lo, ys, ys_lo, xh, xl):
    """Evaluate the PL map at the double-double point (xh, xl).

    A query equal to a knot (both components) returns the paired knot
    unperturbed; this includes the hull corners, which must not go through
    the tail arithmetic or orbit locking degrades.
    """
    if (xh, xl) <= (xs[0], xs_lo[0]):
        if xh == xs[0] and xl == xs_lo[0]:
            return ys[0], ys_lo[0]
        off = _dd.sub(ys[0], ys_lo[0], xs[0], xs_lo[0])
        return _dd.add(xh, xl, *off)
    if (xh, xl) >= (xs[-1], xs_lo[-1]):
        if xh == xs[-1] and xl == xs_lo[-1]:
            return ys[-1], ys_lo[-1]
        off = _dd.sub(ys[-1], ys_lo[-1], xs[-1], xs_lo[-1])
        return _dd.add(xh, xl, *off)
    i = int(np.searchsorted(xs, xh, side="right")) - 1
    if xs[i] == xh:
        if xs_lo[i] == xl:
            return ys[i], ys_lo[i]
        if xl < xs_lo[i]:
            i -= 1  # dd-below the knot: the point belongs to the piece left of it
    dx = _dd.sub(xh, xl, xs[i], xs_lo[i])
    t = _dd.div(*dx, *_dd.sub(xs[i + 1], xs_lo[i + 1], xs[i], xs_lo[i]))
    dy = _dd.mul(*t, *_dd.sub(ys[i + 1], ys_lo[i + 1], ys[i], ys_lo[i]))
    return _dd.add(ys[i], ys_lo[i], *dy)


def _eval_double(xs, xs_lo, ys, ys_lo, x):
    """Evaluate at a plain double.  A query matching a knot's public (hi)
    coordinate counts as that knot and yields the paired full-precision
    knot: public doubles are the only coordinates callers can name."""
    i = int(np.searchsorted(xs, x))
    if i < xs.size and xs[i] == x:
        return ys[i], ys_lo[i]
    return _eval_dd(xs, xs_lo, ys, ys_lo, x, 0.0)


def eval_phi(pl, x):
    """phi_N(x): piecewise-linear, exact at knots, slope-one tails."""
    x = float(x)
    i = int(np.searchsorted(pl.xs, x))
    if i < pl.xs.size and pl.xs[i] == x:
        return float(pl.ys[i])
    h, l = _eval_dd(pl.xs, pl.xs_lo, pl.ys, pl.ys_lo, x, 0.0)
    return h + l


def eval_phi_inverse(pl, y):
    """The unique x with phi_N(x) = y (the knot table read sideways)."""
    y = float(y)
    i = int(np.searchsorted(pl.ys, y))
    if i < pl.ys.size and pl.ys[i] == y:
        return float(pl.xs[i])
    h, l = _eval_dd(pl.ys, pl.ys_lo, pl.xs, pl.xs_lo, y, 0.0)
    return h + l


def _phi_inv_dd(pl, y):
    """Inverse image of the public double y as a double-double pair."""
    return _eval_double(pl.ys, pl.ys_lo, pl.xs, pl.xs_lo, y)


def _phi_dd(pl, xh, xl):
    return _eval_dd(pl.xs, pl.xs_lo, pl.ys, pl.ys_lo, xh, xl)


def eval_fstar(pl, params, y):
    """F*(y) = phi(F_c(phi^(-1)(y))), the conjugated quadratic map.

    Evaluated compositionally in double-double and rounded once at the end;
    the rounding projects sub-ulp noise away, so endpoint orbits land back on
    knot coordinates instead of accumulating drift.
    """
    xh, xl = _phi_inv_dd(pl, float(y))
    fh, fl = _dd.add(*_dd.sqr(xh, xl), params.c, 0.0)
    yh, yl = _phi_dd(pl, fh, fl)
    return yh + yl


@dataclass(frozen=True)
class MappingReport:
    """Outcome of segment_mapping_check: sampled points per segment/gap and
    any that landed outside their paired image (expected none)."""

    samples_checked: int
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def segment_mapping_check(pl, model, target, samples, seed=0):
    """Sample points inside every segment and gap through level N and verify
    phi maps each into the paired target segment or gap."""
    rng = random.Random(seed)
    checked = 0
    bad = []
    for n in range(pl.depth + 1):
        ma, mb = model.level_a[n], model.level_b[n]
        ta, tb = target.level_a[n], target.level_b[n]
        for j in range(ma.size):
            for _ in range(samples):
                x = rng.uniform(ma[j], mb[j])
                y = eval_phi(pl, x)
                checked += 1
                if not ta[j] <= y <= tb[j]:
                    bad.append((n, j, x, y))
        if n == 0:
            continue
        mc, md = model.gap_c[n], model.gap_d[n]
        tc, td = target.gap_c[n], target.gap_d[n]
        for j in range(mc.size):
            for _ in range(samples):
                x = rng.uniform(mc[j], md[j])
                y = eval_phi(pl, x)
                checked += 1
                if not tc[j] <= y <= td[j]:
                    bad.append((n, j, x, y))
    return MappingReport(samples_checked=checked, violations=tuple(bad))
