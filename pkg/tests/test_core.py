import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advstream import (
    ApproxSpec,
    ConfigError,
    FrequencyVector,
    Update,
    apply_update,
    density,
    exact_moment,
    flip_number,
    is_correct_estimate,
)
from advstream.core import ceil_power

from oracles import flip_dp, flip_enumerate


class TestUpdate:
    def test_validate_accepts_unit_updates(self):
        Update(1, 1).validate(10)
        Update(10, -1).validate(10)

    def test_item_out_of_range(self):
        with pytest.raises(ValueError):
            Update(11, 1).validate(10)
        with pytest.raises(ValueError):
            Update(0, 1).validate(10)

    def test_non_unit_delta(self):
        with pytest.raises(ValueError):
            Update(3, 2).validate(10)
        with pytest.raises(ValueError):
            Update(3, 0).validate(10)


class TestFrequencyVector:
    def test_single_insertion(self):
        v = apply_update(FrequencyVector(10), Update(7, 1))
        assert v.entries == {7: 1}

    def test_cancellation_prunes_entry(self):
        v = FrequencyVector(10, {7: 1})
        v = apply_update(v, Update(7, -1))
        assert v.entries == {}
        assert v.density == 0

    def test_negative_frequencies_permitted(self):
        v = FrequencyVector(10, {3: 2})
        v = apply_update(v, Update(5, -1))
        assert v.entries == {3: 2, 5: -1}

    def test_pure_update_leaves_original(self):
        v = FrequencyVector(10, {3: 2})
        w = apply_update(v, Update(3, 1))
        assert v.entries == {3: 2} and w.entries == {3: 3}

    def test_apply_out_of_range_raises(self):
        with pytest.raises(ValueError):
            FrequencyVector(5).apply(Update(6, 1))

    @given(
        st.lists(
            st.tuples(st.integers(1, 8), st.sampled_from((-1, 1))), max_size=60
        ),
        st.randoms(use_true_random=False),
    )
    @settings(deadline=None, max_examples=150)
    def test_accumulation_is_order_free(self, pairs, rnd):
        v1 = FrequencyVector(8)
        for item, delta in pairs:
            v1.apply(Update(item, delta))
        shuffled = list(pairs)
        rnd.shuffle(shuffled)
        v2 = FrequencyVector(8)
        for item, delta in shuffled:
            v2.apply(Update(item, delta))
        assert v1 == v2


class TestExactMoment:
    def test_spec_values(self):
        assert exact_moment(FrequencyVector(10, {1: 3}), 2) == 9
        assert exact_moment(FrequencyVector(10, {1: 2, 2: -1}), 2) == 5
        assert exact_moment(FrequencyVector(10, {1: 2, 2: -1}), 1) == 3

    def test_empty_vector(self):
        assert exact_moment(FrequencyVector(10), 2) == 0.0
        assert exact_moment(FrequencyVector(10), 1) == 0.0

    def test_unsupported_exponent(self):
        with pytest.raises(ConfigError):
            exact_moment(FrequencyVector(10, {1: 1}), 3)

    @given(st.dictionaries(st.integers(1, 20), st.integers(-50, 50), max_size=20))
    @settings(deadline=None, max_examples=150)
    def test_zero_moment_iff_zero_density(self, entries):
        v = FrequencyVector(20, entries)
        assert (exact_moment(v, 2) == 0) == (density(v) == 0)


class TestDensity:
    def test_spec_values(self):
        assert density(FrequencyVector(10)) == 0
        assert density(FrequencyVector(10, {1: 5, 2: -2})) == 2

    def test_pruning(self):
        v = apply_update(FrequencyVector(10, {1: 1}), Update(1, -1))
        assert density(v) == 0


class TestIsCorrectEstimate:
    def test_spec_values(self):
        assert is_correct_estimate(9, 16, 1.0)
        assert is_correct_estimate(0, 0, 0.5)
        assert is_correct_estimate(4, 4, 0.1)
        assert not is_correct_estimate(4, 3.9, 0.1)

    def test_zero_true_value_accepts_only_zero(self):
        assert not is_correct_estimate(0, 0.5, 0.5)
        assert not is_correct_estimate(0, 1e-12, 0.5)

    def test_upper_bound_strict(self):
        assert not is_correct_estimate(4, 4.4, 0.1)
        assert is_correct_estimate(4, 4.3999, 0.1)


class TestFlipNumber:
    def test_spec_values(self):
        # frozen from the exhaustive oracle
        assert flip_dp([1, 1, 1], 0.5) == 1
        assert flip_number([1, 1, 1], 0.5) == 1
        assert flip_dp([1, 4], 0.5) == 2
        assert flip_number([1, 4], 0.5) == 2
        assert flip_dp([1, 2, 4, 8], 0.5) == 2
        assert flip_number([1, 2, 4, 8], 0.5) == 2

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            flip_number([], 0.5)

    def test_chain_may_start_anywhere(self):
        # the best chain skips the first element here
        assert flip_number([1, 2, 1], 0.5) == 2
        assert flip_number([0, 1, 2, 1], 0.5) == 3

    def test_boundary_values_are_not_flips(self):
        # closed interval: a boundary-equal predecessor does not flip
        assert flip_number([2, 4], 1.0) == 1
        assert flip_number([6, 4], 0.5) == 1
        assert flip_number([6.0001, 4], 0.5) == 2

    def test_zeros(self):
        assert flip_number([0, 0, 0], 0.5) == 1
        assert flip_number([0, 5], 0.5) == 2
        assert flip_number([5, 0], 0.5) == 2

    @given(
        st.lists(st.sampled_from([0, 1, 2, 4, 8]), min_size=1, max_size=12),
        st.sampled_from([0.1, 0.5, 1.0]),
    )
    @settings(deadline=None, max_examples=400)
    def test_matches_subsequence_dp(self, seq, eps):
        assert flip_number(seq, eps) == flip_dp(seq, eps)

    @given(
        st.lists(st.sampled_from([0, 1, 2, 4, 8]), min_size=1, max_size=8),
        st.sampled_from([0.25, 0.5]),
    )
    @settings(deadline=None, max_examples=150)
    def test_dp_matches_literal_enumeration(self, seq, eps):
        assert flip_dp(seq, eps) == flip_enumerate(seq, eps)

    def test_constant_sequence_is_one(self):
        assert flip_number([3.7] * 20, 0.25) == 1

    @given(
        st.lists(st.floats(0.125, 1024), min_size=1, max_size=30),
        st.floats(0.05, 1.0),
        st.sampled_from([0.25, 1.0, 3.0, 17.0]),
    )
    @settings(deadline=None, max_examples=150)
    def test_scaling_invariance(self, seq, eps, scale):
        assert flip_number(seq, eps) == flip_number([scale * x for x in seq], eps)


class TestApproxSpec:
    def test_valid(self):
        ApproxSpec(0.5, 100.0, 10)
        ApproxSpec(1.0, 2.0, 1)

    @pytest.mark.parametrize(
        "eps,alpha,m",
        [(0.0, 100.0, 10), (1.5, 100.0, 10), (0.5, 1.5, 10), (0.5, 100.0, 0)],
    )
    def test_invalid(self, eps, alpha, m):
        with pytest.raises(ConfigError):
            ApproxSpec(eps, alpha, m)


class TestCeilPower:
    def test_snaps_exact_integer_powers(self):
        assert ceil_power(100000, 0.4) == 100
        assert ceil_power(2**20, 0.5) == 1024

    def test_plain_ceiling(self):
        assert ceil_power(16384, 0.4) == 49
        assert ceil_power(500, 0.3) == 7
