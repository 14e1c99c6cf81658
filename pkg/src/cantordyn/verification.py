"""Self-check suites behind the `verify` command.

Each suite re-derives a property of the library from scratch (bisection
oracles, enumeration, brute-force iteration) and compares it with what the
library computes.  Tolerances mirror the documented guarantees; a failed
suite reports the first violation it saw.
"""

from dataclasses import dataclass

import numpy as np

from . import conjugacy, model_cantor, orbit_engine, quadratic_map
from .errors import NoRealFixedPoint
from .target_cantor import build_target_system, membership, middle_thirds


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _bisect_root(f, lo, hi):
    """Root of f in [lo, hi] (sign change assumed) to full double precision."""
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if (f(mid) < 0.0) == (flo < 0.0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _suite_fixed_points(c):
    for cc in sorted({0.25, -1.0, float(c)}):
        if cc > 0.25:
            try:
                quadratic_map.fixed_points(cc)
            except NoRealFixedPoint:
                continue
            return False, f"c={cc!r}: expected NoRealFixedPoint"
        q, p = quadratic_map.fixed_points(cc)
        if not q <= p:
            return False, f"c={cc!r}: roots out of order ({q!r}, {p!r})"
        bound = 1.0 + max(1.0, abs(cc))

        def res(x, cc=cc):
            return x * x - x + cc

        p_ref = 0.5 if cc == 0.25 else _bisect_root(res, 0.5, bound)
        q_ref = 0.5 if cc == 0.25 else _bisect_root(res, -bound, 0.5)
        if abs(p - p_ref) > 1e-10 or abs(q - q_ref) > 1e-10:
            return False, (
                f"c={cc!r}: roots ({q!r}, {p!r}) vs bisection "
                f"({q_ref!r}, {p_ref!r})"
            )
        for x in (q, p):
            if abs(res(x)) > 1e-12 * max(1.0, x * x):
                return False, f"c={cc!r}: residual {res(x)!r} at x={x!r}"
    return True, f"roots at c in {{1/4, -1, {float(c)!r}}} match bisection"


def _suite_escape_gap(c):
    params = quadratic_map.derive_params(c)
    lam, certified = quadratic_map.expansion_bound(params)
    gap = quadratic_map.gap_A0(params)
    if certified:
        if gap is None:
            return False, f"c={c!r}: certified but gap reported empty"
        ms, s = gap
        if ms != -s:
            return False, f"c={c!r}: gap {gap!r} not symmetric"
        # s^2 = -p - c defines the gap; check the stored endpoint satisfies it
        if abs(s * s + params.p + params.c) > 1e-12 * max(1.0, params.p):
            return False, f"c={c!r}: s={s!r} does not satisfy s^2 = -p - c"
        mid_img = quadratic_map.eval_map(params, 0.0)
        if not mid_img < -params.p:
            return False, f"c={c!r}: F(0) = {mid_img!r} does not leave [-p, p]"
        if abs(lam - 2.0 * s) > 0.0:
            return False, f"c={c!r}: lambda {lam!r} != 2s {2.0 * s!r}"
    for flat in (-2.0, -1.0):
        if quadratic_map.gap_A0(quadratic_map.derive_params(flat)) is not None:
            return False, f"c={flat!r}: gap should be empty"
    word = "certified" if certified else "uncertified"
    return True, f"c={c!r}: lambda={lam!r} ({word}), gap consistent"


def _structure_errors(system, shrink=None):
    """Common structural checks; shrink(n) is an optional max-length bound."""
    for n in range(system.depth + 1):
        a, b = system.level_a[n], system.level_b[n]
        if len(a) != 1 << n:
            return f"level {n}: {len(a)} segments, expected {1 << n}"
        if not np.all(a < b):
            return f"level {n}: empty segment"
        if np.any(b[:-1] >= a[1:]):
            return f"level {n}: segments overlap or touch"
        if n > 0:
            pa, pb = system.level_a[n - 1], system.level_b[n - 1]
            if np.any(a[0::2] != pa) or np.any(b[1::2] != pb):
                return f"level {n}: outer endpoints drift from level {n - 1}"
            gc, gd = system.gap_c[n], system.gap_d[n]
            if len(gc) != 1 << (n - 1):
                return f"level {n}: {len(gc)} gaps, expected {1 << (n - 1)}"
            if np.any(gc <= pa) or np.any(gd >= pb) or np.any(gc >= gd):
                return f"level {n}: gap not strictly inside its parent"
        if shrink is not None:
            top = float(np.max(b - a))
            if top > shrink(n):
                return (
                    f"level {n}: max length {top!r} exceeds bound {shrink(n)!r}"
                )
    return None


def _suite_model_structure(params, depth):
    system = model_cantor.build_model_system(params, depth)
    bound = lambda n: 2.0 * params.p * params.lambda_ ** (-n) * (1.0 + 1e-9)
    err = _structure_errors(system, shrink=bound)
    if err:
        return False, err
    top = model_cantor.max_segment_length(system, depth)
    return True, (
        f"depth {depth}: {1 << depth} segments nested, "
        f"max level-{depth} length {top!r}"
    )


def _suite_endpoint_orbits(params, depth):
    system = model_cantor.build_model_system(params, depth)
    worst = 0.0
    for n in range(min(depth, 10) + 1):
        for x in np.concatenate([system.level_a[n], system.level_b[n]]):
            y = float(x)
            for _ in range(n):
                y = quadratic_map.eval_map(params, y)
            err = min(abs(y - params.p), abs(y + params.p))
            worst = max(worst, err)
            if err > 1e-6:
                return False, (
                    f"level-{n} endpoint {float(x)!r}: F^{n} lands {err!r} "
                    f"from +-p"
                )
    return True, f"level <= {min(depth, 10)} endpoints reach +-p within {worst:.3e}"


def _suite_target_construction(spec, depth):
    system = build_target_system(spec, depth, mode="strict")
    err = _structure_errors(system)
    if err:
        return False, err
    a, b = system.hull
    width = b - a
    for n in range(depth + 1):
        top = float(np.max(system.level_b[n] - system.level_a[n]))
        if top > width * (2.0 / 3.0) ** n * (1.0 + 1e-9):
            return False, f"level {n}: length {top!r} above (2/3)^n certificate"
    probe = min(depth, 6)
    for x in system.level_a[probe]:
        if not membership(spec, float(x), depth):
            return False, f"stored endpoint {float(x)!r} rejected by membership"
    for n in range(1, min(depth, 4) + 1):
        for gc, gd in zip(system.gap_c[n], system.gap_d[n]):
            mid = 0.5 * (float(gc) + float(gd))
            if membership(spec, mid, depth):
                return False, f"gap midpoint {mid!r} accepted by membership"
    return True, f"depth {depth}: strict refinement consistent with membership"


def _suite_conjugacy_map(pl, model, target):
    xs, ys = pl.xs, pl.ys
    if not (np.all(np.diff(xs) > 0.0) and np.all(np.diff(ys) > 0.0)):
        return False, "knot coordinates are not strictly increasing"
    for n in range(pl.depth + 1):
        for mx, tx in ((model.level_a[n], target.level_a[n]),
                       (model.level_b[n], target.level_b[n])):
            for x, y in zip(mx, tx):
                got = conjugacy.eval_phi(pl, float(x))
                if got != float(y):
                    return False, (
                        f"knot not exact: phi({float(x)!r}) = {got!r} "
                        f"!= {float(y)!r}"
                    )
    lo, hi = model.hull
    grid = np.linspace(lo - 0.5, hi + 0.5, 4001)
    prev = -np.inf
    for x in grid:
        y = conjugacy.eval_phi(pl, float(x))
        if y <= prev:
            return False, f"phi not increasing near x={float(x)!r}"
        prev = y
        back = conjugacy.eval_phi_inverse(pl, y)
        if abs(back - float(x)) > 1e-12 * max(1.0, abs(float(x))):
            return False, f"round trip off at x={float(x)!r}: {back!r}"
    report = conjugacy.segment_mapping_check(pl, model, target, samples=4)
    if not report.ok:
        return False, f"segment mapping check: {report.violations} violations"
    return True, (
        f"monotone on {grid.size}-point grid, knots exact, "
        f"round trip within 1e-12, {report.samples_checked} mapping samples"
    )


def _suite_conjugacy_spot_values(pl, params, target):
    a_t, b_t = target.hull
    got = conjugacy.eval_fstar(pl, params, b_t)
    if abs(got - b_t) > 1e-9:
        return False, f"F*({b_t!r}) = {got!r}, expected the fixed endpoint"
    got = conjugacy.eval_fstar(pl, params, a_t)
    if abs(got - b_t) > 1e-9:
        return False, f"F*({a_t!r}) = {got!r}, expected {b_t!r}"
    c1 = float(target.gap_c[1][0])
    got = conjugacy.eval_fstar(pl, params, c1)
    if abs(got - a_t) > 1e-6:
        return False, f"F*({c1!r}) = {got!r}, expected about {a_t!r}"
    return True, (
        f"F* fixes {b_t!r}, sends {a_t!r} there and the first gap edge "
        f"back to {a_t!r}"
    )


def _suite_dichotomy(pl, params, target):
    for n in range(1, min(target.depth, 5) + 1):
        for gc, gd in zip(target.gap_c[n], target.gap_d[n]):
            mid = 0.5 * (float(gc) + float(gd))
            res = orbit_engine.iterate_target(pl, params, mid, 200)
            if not res.escaped:
                return False, f"gap midpoint {mid!r} failed to escape in 200"
    for n in range(min(target.depth, 8) + 1):
        for y in np.concatenate([target.level_a[n], target.level_b[n]]):
            res = orbit_engine.iterate_target(pl, params, float(y), 25)
            if res.escaped:
                return False, (
                    f"level-{n} endpoint {float(y)!r} escaped at "
                    f"iteration {res.iteration}"
                )
    return True, (
        "gap midpoints (levels <= 5) escape within 200 iterations, "
        "endpoints (levels <= 8) stay bounded for 25"
    )


def _suite_mandelbrot():
    if orbit_engine.mandelbrot_escape(0.0, 0.0, 1000) is not None:
        return False, "c = 0 escaped"
    got = orbit_engine.mandelbrot_escape(1.0, 0.0, 50)
    if got != 3:
        return False, f"c = 1 escaped at {got!r}, expected 3"
    if orbit_engine.mandelbrot_escape(-1.0, 0.0, 1000) is not None:
        return False, "c = -1 escaped"
    for cr, ci in ((2.5, 0.0), (0.0, -2.25), (-2.1, 0.9)):
        got = orbit_engine.mandelbrot_escape(cr, ci, 50)
        if got is None or got > 2:
            return False, f"|c| > 2 at ({cr}, {ci}) escaped at {got!r}"
    return True, "interior and escape spot values as expected"


def run_verification(c=-3.0, depth=10, spec=None):
    """Run every suite and return the list of CheckResult records.

    When c is not a certified expanding parameter the construction suites
    cannot run; a single failing record explains why and the rest is skipped.
    """
    if spec is None:
        spec = middle_thirds()
    results = []

    def run(name, fn, *args):
        try:
            ok, detail = fn(*args)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name, ok, detail))
        return ok

    run("fixed-points", _suite_fixed_points, c)
    run("escape-gap", _suite_escape_gap, c)
    try:
        params = quadratic_map.derive_params(c)
        certified = params.lambda_ > 1.0
    except NoRealFixedPoint:
        params, certified = None, False
    if not certified:
        results.append(CheckResult(
            "model-structure", False,
            f"c={c!r} is not a certified expanding parameter"))
        return results

    run("model-structure", _suite_model_structure, params, depth)
    run("endpoint-orbits", _suite_endpoint_orbits, params, depth)
    run("target-construction", _suite_target_construction, spec, depth)

    model = model_cantor.build_model_system(params, depth)
    target = build_target_system(spec, depth, mode="strict")
    pl = conjugacy.build_phi(model, target, depth)
    run("conjugacy-map", _suite_conjugacy_map, pl, model, target)
    run("conjugacy-spot-values", _suite_conjugacy_spot_values, pl, params,
        target)
    run("dichotomy", _suite_dichotomy, pl, params, target)
    run("mandelbrot", _suite_mandelbrot)
    return results
