"""Nested interval systems for the bounded set of x^2 + c, c < -2.

Level-2 endpoint constants were derived with 60-digit Decimal arithmetic:
with p = (1 + sqrt(13))/2 and s = sqrt(3 - p), the level-2 cut points are
sqrt(3 - s) = 1.4713940267227992 and sqrt(3 + s) = 1.9583155052555925
(correctly rounded).  Max segment lengths are measured between stored
endpoint doubles, hence the 1e-15 relative tolerance against the Decimal
values.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cantordyn import (
    DomainError,
    IntervalAddress,
    MAX_DEPTH,
    RegimeError,
    build_model_system,
    derive_params,
    eval_map,
    max_segment_length,
    preimage_interval,
)


def assert_nested_structure(system):
    """Counts, ordering, disjointness, nesting, and gap placement."""
    for n in range(system.depth + 1):
        a, b = system.level_a[n], system.level_b[n]
        assert a.size == b.size == 1 << n
        assert np.all(a < b)
        assert np.all(b[:-1] < a[1:])  # disjoint, increasing
        if n == 0:
            continue
        pa, pb = system.level_a[n - 1], system.level_b[n - 1]
        # outer endpoints are inherited from the parent exactly
        assert np.array_equal(a[0::2], pa)
        assert np.array_equal(b[1::2], pb)
        g, h = system.gap_c[n], system.gap_d[n]
        assert g.size == h.size == 1 << (n - 1)
        assert np.all(pa < g) and np.all(h < pb)
        assert np.array_equal(b[0::2], g) and np.array_equal(a[1::2], h)


def test_structure_depth_12(model12):
    assert model12.depth == 12
    assert_nested_structure(model12)


def test_hull_is_fixed_point_interval(params3, model12):
    assert model12.hull == (-params3.p, params3.p)


def test_level2_frozen_endpoints(model12):
    p = 2.302775637731995
    assert model12.level_a[2].tolist() == [
        -p, -1.4713940267227992, 0.8349996181244668, 1.9583155052555925]
    assert model12.level_b[2].tolist() == [
        -1.9583155052555925, -0.8349996181244668, 1.4713940267227992, p]


def test_first_gap_is_A0(params3, model12):
    assert model12.gap_c[1][0] == -params3.s
    assert model12.gap_d[1][0] == params3.s


def test_max_lengths_frozen(model12):
    for n, want in [(0, 4.60555127546399),
                    (1, 1.467776019607528),
                    (2, 0.6363944085983324)]:
        assert max_segment_length(model12, n) == pytest.approx(want, rel=1e-15)


def test_lengths_contract_geometrically(params3, model12):
    lam = params3.lambda_
    bound = 2 * params3.p
    for n in range(model12.depth + 1):
        assert max_segment_length(model12, n) <= bound * lam**-n * (1 + 1e-9)


def test_symmetry(model12):
    # F_c is even, so every level is symmetric about 0
    for n in range(model12.depth + 1):
        a, b = model12.level_a[n], model12.level_b[n]
        assert np.array_equal(a, -b[::-1])


def test_endpoints_reach_fixed_points(params3, model12):
    """A level-n endpoint returns to {-p, p} after n plain-double steps."""
    p = params3.p
    for n in range(min(model12.depth, 8) + 1):
        for x0 in np.concatenate([model12.level_a[n], model12.level_b[n]]):
            x = float(x0)
            for _ in range(n):
                x = eval_map(params3, x)
            assert min(abs(x - p), abs(x + p)) <= 1e-9


def test_segments_map_onto_parents(params3, model12):
    """F_c sends each level-n segment onto a level-(n-1) segment."""
    for n in range(1, 6):
        a, b = model12.level_a[n], model12.level_b[n]
        pa, pb = model12.level_a[n - 1], model12.level_b[n - 1]
        for j in range(a.size):
            u, v = sorted([eval_map(params3, a[j]), eval_map(params3, b[j])])
            k = int(np.searchsorted(pa, u + 1e-9) - 1)
            assert pa[k] - 1e-9 <= u and v <= pb[k] + 1e-9


def test_preimage_interval(params3):
    left, right = preimage_interval(params3, (-params3.p, params3.p))
    assert left == (-right[1], -right[0])
    assert right[1] == params3.p
    # preimage of the plain float -p, one ulp below the dd-derived s
    assert abs(right[0] - params3.s) <= 2e-16
    # both branches really map back onto the input interval
    for x in (*left, *right):
        assert abs(eval_map(params3, x)) <= params3.p * (1 + 1e-15)


def test_accessors(model12):
    segs = model12.segments(2)
    assert segs.shape == (4, 2)
    gaps = model12.gaps(1)
    assert gaps.shape == (1, 2)
    assert model12.segment(IntervalAddress(2, 3)) == (
        0.8349996181244668, 1.4713940267227992)
    with pytest.raises(DomainError):
        model12.gaps(0)
    with pytest.raises(DomainError):
        model12.segments(13)


def test_depth_validation(params3):
    with pytest.raises(DomainError):
        build_model_system(params3, -1)
    with pytest.raises(DomainError):
        build_model_system(params3, MAX_DEPTH + 1)
    assert build_model_system(params3, 0).depth == 0


def test_uncertified_regimes_refused():
    with pytest.raises(RegimeError):
        build_model_system(derive_params(-2.05), 4)  # gap exists, lambda < 1
    with pytest.raises(RegimeError):
        build_model_system(derive_params(-1.0), 4)  # no gap at all


class TestIntervalAddress:
    def test_words(self):
        assert IntervalAddress(0, 1).word == ""
        assert IntervalAddress(2, 3).word == "10"
        assert IntervalAddress.from_word("10") == IntervalAddress(2, 3)
        assert IntervalAddress.from_word("") == IntervalAddress(0, 1)

    def test_parent_child(self):
        a = IntervalAddress(3, 5)
        assert a.parent() == IntervalAddress(2, 3)
        assert a.parent().child(0) == a
        assert a.parent().child(1) == IntervalAddress(3, 6)

    def test_validation(self):
        with pytest.raises(DomainError):
            IntervalAddress(2, 5)
        with pytest.raises(DomainError):
            IntervalAddress(2, 0)
        with pytest.raises(DomainError):
            IntervalAddress(-1, 1)
        with pytest.raises(DomainError):
            IntervalAddress(0, 1).parent()
        with pytest.raises(DomainError):
            IntervalAddress.from_word("102")
        with pytest.raises(DomainError):
            IntervalAddress(1, 1).child(2)


@settings(max_examples=25, deadline=None)
@given(c=st.floats(min_value=-20.0, max_value=-2.4), depth=st.integers(0, 6))
def test_structure_invariants_random_c(c, depth):
    params = derive_params(c)
    system = build_model_system(params, depth)
    assert_nested_structure(system)
    for n in range(depth + 1):
        assert (max_segment_length(system, n)
                <= 2 * params.p * params.lambda_**-n * (1 + 1e-9))
