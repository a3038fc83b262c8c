import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icfpie.errors import ConfigurationError
from icfpie.selection import (
    build_schedule,
    default_schedule,
    mask_at,
    theta_bar_for,
)


class TestBuildSchedule:
    def test_two_entry_case(self):
        sched = build_schedule(4, [[1, 3], [2, 4]])
        assert sched.theta_bar == 2
        assert np.array_equal(sched.masks[0], np.diag([1.0, 0.0, 1.0, 0.0]))
        assert np.array_equal(sched.masks[1], np.diag([0.0, 1.0, 0.0, 1.0]))

    def test_single_entry_case(self):
        sched = build_schedule(4, [[1], [2], [3], [4]])
        assert sched.theta_bar == 4
        for z in range(4):
            expected = np.zeros(4)
            expected[z] = 1.0
            assert np.array_equal(sched.masks[z], np.diag(expected))

    def test_full_exchange(self):
        sched = build_schedule(4, [[1, 2, 3, 4]])
        assert sched.theta_bar == 1
        assert np.array_equal(sched.masks[0], np.eye(4))
        assert sched.is_identity()

    def test_overlap_rejected(self):
        with pytest.raises(ConfigurationError, match="overlap"):
            build_schedule(4, [[1, 2], [2, 3, 4]])

    def test_coverage_rejected(self):
        with pytest.raises(ConfigurationError, match="cover"):
            build_schedule(4, [[1, 2], [3]])

    def test_empty_subset_rejected(self):
        with pytest.raises(ConfigurationError, match="empty"):
            build_schedule(4, [[1, 2, 3, 4], []])

    def test_out_of_range_rejected(self):
        with pytest.raises(ConfigurationError):
            build_schedule(4, [[1, 2], [3, 5]])

    def test_defaults_match_explicit(self):
        assert default_schedule(4, "case1").subsets == ((1, 3), (2, 4))
        assert default_schedule(4, "case2").subsets == ((1,), (2,), (3,), (4,))
        assert default_schedule(4, "identity").subsets == ((1, 2, 3, 4),)


class TestMaskAt:
    def test_cyclic_alternation(self):
        sched = build_schedule(4, [[1, 3], [2, 4]])
        assert np.array_equal(mask_at(sched, 0), np.diag([1.0, 0.0, 1.0, 0.0]))
        assert np.array_equal(mask_at(sched, 1), np.diag([0.0, 1.0, 0.0, 1.0]))
        assert np.array_equal(mask_at(sched, 2), np.diag([1.0, 0.0, 1.0, 0.0]))

    def test_identity_for_all_steps(self):
        sched = build_schedule(4, [[1, 2, 3, 4]])
        for l in range(6):
            assert np.array_equal(mask_at(sched, l), np.eye(4))

    def test_single_entry_step_seven(self):
        # 7 mod 4 = 3, so the fourth subset {4} is selected
        sched = build_schedule(4, [[1], [2], [3], [4]])
        assert np.array_equal(mask_at(sched, 7), np.diag([0.0, 0.0, 0.0, 1.0]))


class TestThetaBarFor:
    def test_values(self):
        assert theta_bar_for(4, 2) == 2
        assert theta_bar_for(4, 1) == 4
        assert theta_bar_for(4, 4) == 1
        assert theta_bar_for(5, 2) == 3

    def test_bad_m(self):
        with pytest.raises(ConfigurationError):
            theta_bar_for(4, 5)
        with pytest.raises(ConfigurationError):
            theta_bar_for(4, 0)


@st.composite
def random_partition(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    indices = list(range(1, n + 1))
    perm = draw(st.permutations(indices))
    cuts = sorted(draw(st.sets(st.integers(min_value=1, max_value=n - 1), max_size=n - 1))) \
        if n > 1 else []
    bounds = [0] + cuts + [n]
    subsets = [perm[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
    return n, subsets


@given(random_partition())
@settings(max_examples=50, deadline=None)
def test_masks_sum_to_identity(np_subsets):
    n, subsets = np_subsets
    sched = build_schedule(n, subsets)
    total = sum(sched.masks)
    assert np.array_equal(total, np.eye(n))


@given(random_partition(), st.integers(min_value=0, max_value=30))
@settings(max_examples=50, deadline=None)
def test_mask_periodicity_and_idempotence(np_subsets, l):
    n, subsets = np_subsets
    sched = build_schedule(n, subsets)
    m = mask_at(sched, l)
    assert np.array_equal(m, mask_at(sched, l + sched.theta_bar))
    assert np.array_equal(m @ m, m)
    assert set(np.unique(m)) <= {0.0, 1.0}
    assert np.array_equal(m, np.diag(np.diag(m)))
