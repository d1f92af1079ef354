import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from banachdbar import dominate
from banachdbar import multiindex as mi


def brute(q, z, D):
    total = 0.0
    for k in itertools.product(range(D + 1), repeat=len(z)):
        d = sum(k)
        if d <= D:
            w = d**d / math.prod(e**e for e in k)
            total += w * abs(q) ** sum(1 for e in k if e) * math.prod(t**e for t, e in zip(z, k))
    return total


def test_zero_point_is_one():
    for q in (0.1, 1.0, 3 + 4j):
        assert dominate.delta_truncated(q, [0, 0, 0], 25).value == 1.0
    res = dominate.delta_certified(0.4, [0.0], 5)
    assert res.value == 1.0 and res.tail_bound == 0.0


def test_single_block_closed_form():
    res = dominate.delta_truncated(0.5, [0.5, 0, 0], 30)
    assert abs(res.value - 1.5) < 1e-8
    assert not res.certified
    with pytest.raises(ValueError):
        res.upper


def test_matches_independent_sum():
    got = dominate.delta_truncated(1.0, [0.1, 0.1], 20).value
    assert math.isclose(got, brute(1.0, [0.1, 0.1], 20), rel_tol=1e-12)
    assert math.isclose(got, dominate.delta_bruteforce(1.0, [0.1, 0.1], 20), rel_tol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.0, 0.3), min_size=1, max_size=3), st.floats(0.05, 1.0),
       st.integers(2, 12))
def test_shells_sum_to_brute_force(z, q, D):
    z = [t / max(1.0, 3 * sum(z)) for t in z]
    got = dominate.delta_truncated(q, z, D).value
    assert math.isclose(got, brute(q, z, D), rel_tol=1e-11, abs_tol=1e-14)


def test_certified_bracket_and_uncertified_region():
    z = [0.1, 0.15]
    cert = dominate.delta_certified(0.7, z, 8)
    assert cert.certified
    assert cert.value <= brute(0.7, z, 25) <= cert.upper
    assert not dominate.delta_certified(0.7, [0.2, 0.2], 8).certified  # e*0.4 > 1
    assert not dominate.delta_certified(1.5, [0.1], 8).certified


def test_invalid_points():
    with pytest.raises(ValueError):
        dominate.delta_truncated(0.5, [0.6, 0.5], 5)
    with pytest.raises(ValueError):
        dominate.delta_truncated(0.5, [0.1, 0.1, 0.1], 5, max_block=2)


def test_sup_bound_examples():
    assert dominate.delta_sup_bound(0.3, 0.0) == 1.0
    want = 1 + 0.1 * (math.e / 4) / (1 - math.e / 4)
    assert math.isclose(dominate.delta_sup_bound(0.1, 0.25), want, rel_tol=1e-15)
    assert abs(want - 1.2121) < 1e-4
    with pytest.raises(ValueError):
        dominate.delta_sup_bound(0.1, 0.4)


def test_sampled_sup_is_below_certified_bound():
    for theta in (0.1, 0.2, 0.3):
        s = dominate.delta_sup_sampled(0.5, theta, samples=64)
        assert 1.0 < s <= dominate.delta_sup_bound(0.5, theta)
    # the sampled path also works where no certified bound exists
    assert dominate.delta_sup_sampled(0.5, 0.5, samples=16) > 1


@pytest.mark.parametrize("k, want", [((1, 1), 0.25), ((5,), 1.0), ((1, 1, 1), 1 / 27)])
def test_monomial_norm(k, want):
    assert math.isclose(dominate.monomial_norm(mi.MultiIndex.from_dense(k)), want, rel_tol=1e-15)


def test_json_marks_uncertified():
    assert dominate.delta_truncated(0.5, [0.1], 3).to_json()["tail_bound"] == "uncertified"
    assert np.isfinite(dominate.delta_certified(0.5, [0.1], 3).to_json()["tail_bound"])
