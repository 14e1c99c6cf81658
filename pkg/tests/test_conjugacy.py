"""The finite-depth conjugacy phi_N and the conjugated map F*.

Spot values below follow from the construction directly: phi carries model
endpoints to target endpoints at the same address, is linear in between,
and continues with slope one outside the hull.  So phi(-s) = 1/3,
phi(s) = 2/3, phi(+-p) = 1, 0, and F*(y) = phi(F_c(phi_inv(y))).  The value
F*(1/2) = phi(-3) = 0 + (-3 + p) = -0.6972243622680053 (correctly rounded;
checked in 60-digit Decimal from p = (1 + sqrt(13))/2).
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cantordyn import (
    DomainError,
    build_model_system,
    build_phi,
    build_target_system,
    eval_fstar,
    eval_phi,
    eval_phi_inverse,
    middle_thirds,
    segment_mapping_check,
)

THIRD = 0.3333333333333333
TWO_THIRDS = 0.6666666666666666


def test_depth1_knots(params3, thirds):
    model = build_model_system(params3, 1)
    target = build_target_system(thirds, 1)
    pl = build_phi(model, target, 1)
    p, s = params3.p, params3.s
    assert pl.xs.tolist() == [-p, -s, s, p]
    assert pl.ys.tolist() == [0.0, THIRD, TWO_THIRDS, 1.0]
    assert pl.depth == 1
    assert pl.breakpoints[0] == (-p, 0.0)


def test_knot_exactness_all_levels(phi12, model12, thirds12):
    for n in range(13):
        for ma, ta in ((model12.level_a[n], thirds12.level_a[n]),
                       (model12.level_b[n], thirds12.level_b[n])):
            for x, y in zip(ma, ta):
                assert eval_phi(phi12, float(x)) == float(y)
                assert eval_phi_inverse(phi12, float(y)) == float(x)


def test_frozen_spot_values(phi12, params3):
    assert eval_phi(phi12, 0.0) == 0.5
    assert eval_phi(phi12, -params3.p) == 0.0
    assert eval_phi(phi12, params3.p) == 1.0
    assert eval_phi(phi12, -3.0) == -0.6972243622680053
    assert eval_phi_inverse(phi12, THIRD) == -0.8349996181244668
    assert eval_phi_inverse(phi12, 0.0) == -params3.p
    assert eval_phi_inverse(phi12, 1.0) == params3.p
    assert abs(eval_phi_inverse(phi12, 0.5)) < 1e-12


def test_slope_one_tails(phi12, params3):
    # the tails anchor at the double-double knot, so values are correctly
    # rounded against the real map and may sit one ulp off naive arithmetic
    p = params3.p
    assert abs(eval_phi(phi12, -p - 1.0) - (-1.0)) <= 5e-16
    assert abs(eval_phi(phi12, p + 2.5) - 3.5) <= 5e-16
    assert abs(eval_phi_inverse(phi12, -1.0) - (-p - 1.0)) <= 5e-16
    assert abs(eval_phi_inverse(phi12, 3.5) - (p + 2.5)) <= 5e-16
    # outside the hull the map keeps translating: unit steps stay unit steps
    for x in (-p - 1.0, -p - 2.0, p + 1.0, p + 7.5):
        lhs = eval_phi(phi12, x + 1.0) - eval_phi(phi12, x)
        assert lhs == pytest.approx(1.0, abs=5e-16)


def test_monotone_on_grid(phi12, params3):
    xs = np.linspace(-params3.p - 0.5, params3.p + 0.5, 10_001)
    ys = np.array([eval_phi(phi12, x) for x in xs])
    assert np.all(np.diff(ys) > 0)


def test_round_trip(phi12, params3):
    xs = np.linspace(-params3.p, params3.p, 10_001)
    for x in xs:
        err = abs(eval_phi_inverse(phi12, eval_phi(phi12, x)) - x)
        assert err <= 1e-12 * max(1.0, abs(x))


def test_depth_stability(phi12, phi13, params3):
    """phi_12 and phi_13 differ by less than one level-12 target segment."""
    cap = 3.0 ** -12
    xs = np.linspace(-params3.p, params3.p, 5_001)
    assert max(abs(eval_phi(phi12, x) - eval_phi(phi13, x)) for x in xs) <= cap
    worst = max(abs(eval_phi(phi12, float(x)) - float(y))
                for x, y in zip(phi13.xs, phi13.ys))
    assert worst <= cap


def test_err_bound_is_level12_length(phi12):
    # widest stored level-12 target segment; 3^-12 up to endpoint rounding
    assert phi12.err_bound == pytest.approx(3.0 ** -12, rel=1e-9)
    assert phi12.err_bound >= 3.0 ** -12


def test_fstar_spot_values(phi12, params3):
    assert eval_fstar(phi12, params3, 1.0) == 1.0
    assert eval_fstar(phi12, params3, 0.0) == 1.0
    assert eval_fstar(phi12, params3, THIRD) == 0.0
    assert eval_fstar(phi12, params3, TWO_THIRDS) == 0.0
    assert eval_fstar(phi12, params3, 0.5) == -0.6972243622680053


def test_fstar_conjugation_identity(phi12, params3):
    """F* really is phi o F o phi_inv, point by point."""
    for y in np.linspace(0.0, 1.0, 101):
        x = eval_phi_inverse(phi12, y)
        direct = eval_phi(phi12, x * x + params3.c)
        assert eval_fstar(phi12, params3, y) == pytest.approx(direct, abs=1e-12)


def test_segment_mapping(phi12, model12, thirds12):
    report = segment_mapping_check(phi12, model12, thirds12, samples=2, seed=7)
    assert report.ok
    assert report.violations == ()
    n_segs = sum(2 ** n for n in range(13))
    n_gaps = sum(2 ** (n - 1) for n in range(1, 13))
    assert report.samples_checked == 2 * (n_segs + n_gaps)


def test_build_phi_validation(params3, model12, thirds12, thirds):
    with pytest.raises(DomainError):
        build_phi(model12, thirds12, 13)  # deeper than built
    model1 = build_model_system(params3, 1)
    with pytest.raises(DomainError):
        build_phi(model1, thirds12, 12)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=-2.302775637731995, max_value=2.302775637731995))
def test_round_trip_random(phi12, x):
    y = eval_phi(phi12, x)
    assert abs(eval_phi_inverse(phi12, y) - x) <= 1e-12 * max(1.0, abs(x))


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=-2.3, max_value=2.3),
    st.floats(min_value=1e-9, max_value=0.5),
)
def test_strictly_increasing_random(phi12, x, h):
    assert eval_phi(phi12, x) < eval_phi(phi12, x + h)
