"""Volume feature math against naive recomputation and frozen values."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discoursecast.features import volume as vol

from oracles import naive_pdi, naive_smooth, naive_standardized, naive_velocity


class TestPlatformVolume:
    def test_hand_sum(self):
        assert vol.platform_volume([2, 3], [1.0, 2 / 3]) == pytest.approx(4.0)

    def test_empty_day_is_zero(self):
        assert vol.platform_volume([], []) == 0.0

    def test_single_layer0_doc(self):
        assert vol.platform_volume([1.0], [1.0]) == 1.0

    def test_negative_engagement_raises(self):
        with pytest.raises(ValueError):
            vol.platform_volume([-1.0], [1.0])


class TestSmoothing:
    def test_constant_series_preserved(self):
        out = vol.smooth_series([5.0] * 10)
        np.testing.assert_allclose(out[6:], 5.0, atol=1e-12)

    def test_impulse_weight_at_tau_zero(self):
        # With decay 0.8 and window 7 the leading normalized weight is
        # 0.2 / (1 - 0.8^7) = 0.25307346...
        series = [0.0] * 7 + [1.0]
        out = vol.smooth_series(series)
        assert out[-1] == pytest.approx(0.2 / (1 - 0.8**7), abs=1e-12)
        assert out[-1] == pytest.approx(0.2530734, abs=1e-7)

    def test_window_one_is_identity(self):
        series = [3.0, 1.0, 4.0, 1.0, 5.0]
        np.testing.assert_allclose(vol.smooth_series(series, window=1), series)

    def test_invalid_decay_raises(self):
        with pytest.raises(ValueError):
            vol.smooth_series([1.0], decay=1.0)

    def test_weights_sum_to_one(self):
        for window in (1, 3, 7, 14):
            for decay in (0.1, 0.5, 0.8, 0.99):
                assert vol.smoothing_weights(window, decay).sum() == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(0, 1e6), min_size=1, max_size=30),
        st.integers(1, 10),
        st.floats(0.05, 0.95),
    )
    def test_matches_naive(self, series, window, decay):
        np.testing.assert_allclose(
            vol.smooth_series(series, window, decay),
            naive_smooth(series, window, decay),
            atol=1e-9 * max(1.0, max(series)),
        )


class TestDerivatives:
    def test_velocity_difference(self):
        out = vol.velocity([1.0, 3.0, 5.0])
        np.testing.assert_allclose(out, [0.0, 2.0, 2.0])

    def test_constant_series_all_zero(self):
        series = [4.0] * 12
        assert vol.velocity(series).sum() == 0.0
        assert vol.acceleration(series).sum() == 0.0
        assert vol.standardized(series).sum() == 0.0

    def test_frozen_rolling_standardization(self):
        # Series 1..30: at the last day the trailing 28 (excluding it) are
        # 2..29 with mean 15.5 and population std sqrt(65.25).
        series = list(range(1, 31))
        out = vol.standardized(series, baseline_window=28)
        sigma = np.sqrt(65.25)
        assert sigma == pytest.approx(8.077747210701755, abs=1e-12)
        assert out[-1] == pytest.approx((30 - 15.5) / sigma, abs=1e-12)
        assert out[-1] == pytest.approx(1.7950544, abs=1e-6)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-100, 100), min_size=2, max_size=40))
    def test_match_naive(self, series):
        np.testing.assert_allclose(vol.velocity(series), naive_velocity(series), atol=1e-9)
        np.testing.assert_allclose(
            vol.standardized(series, 7), naive_standardized(series, 7), atol=1e-9
        )


class TestPDI:
    def test_uniform_two_platforms(self):
        assert vol.platform_distribution_index([3.0, 3.0]) == pytest.approx(np.log(2), abs=1e-12)

    def test_concentrated(self):
        assert vol.platform_distribution_index([7.0, 0.0]) == 0.0

    def test_frozen_three_quarters(self):
        assert vol.platform_distribution_index([0.75, 0.25]) == pytest.approx(0.5623351, abs=1e-7)

    def test_all_zero_is_no_discourse(self):
        assert vol.platform_distribution_index([0.0, 0.0]) is None

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0, 1e5), min_size=1, max_size=6))
    def test_bounds_and_naive(self, volumes):
        got = vol.platform_distribution_index(volumes)
        expected = naive_pdi(volumes)
        if expected is None:
            assert got is None
        else:
            assert got == pytest.approx(expected, abs=1e-9)
            assert -1e-12 <= got <= np.log(len(volumes)) + 1e-12

    def test_scale_invariance(self):
        a = vol.platform_distribution_index([2.0, 5.0, 1.0])
        b = vol.platform_distribution_index([20.0, 50.0, 10.0])
        assert a == pytest.approx(b, abs=1e-12)
