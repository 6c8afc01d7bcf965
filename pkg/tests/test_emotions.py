"""Emotion bin distributions, aggregates, dispersion, and correlations."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discoursecast.features import emotions as emo

from oracles import (
    naive_aggregates,
    naive_bin_distribution,
    naive_dispersion,
    naive_emotion_bin,
    naive_pearson,
)


class TestAssignBin:
    @pytest.mark.parametrize(
        "score,expected",
        [(0.0, 1), (0.19, 1), (0.2, 2), (0.39, 2), (0.4, 3), (0.55, 3), (0.6, 4), (0.8, 5), (1.0, 5)],
    )
    def test_edges(self, score, expected):
        assert emo.assign_bin(score) == expected

    def test_out_of_range_raises(self):
        with pytest.raises(ValueError):
            emo.assign_bin(1.01)
        with pytest.raises(ValueError):
            emo.assign_bin(-0.01)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 1))
    def test_matches_naive(self, score):
        assert emo.assign_bin(score) == naive_emotion_bin(score)


class TestBinDistribution:
    def test_weighted_two_docs(self):
        # weights 1 and 3, scores in Low and High
        g = emo.bin_distribution([0.3, 0.7], [1.0, 3.0])
        np.testing.assert_allclose(g, [0.0, 0.25, 0.0, 0.75, 0.0])

    def test_single_doc_one_hot(self):
        g = emo.bin_distribution([0.45], [2.0])
        np.testing.assert_allclose(g, [0, 0, 1, 0, 0])

    def test_uniform_spread(self):
        g = emo.bin_distribution([0.1, 0.3, 0.5, 0.7, 0.9], [1.0] * 5)
        np.testing.assert_allclose(g, [0.2] * 5)

    def test_zero_weight_is_no_discourse(self):
        assert emo.bin_distribution([0.5], [0.0]) is None

    def test_weight_scale_invariance(self):
        g1 = emo.bin_distribution([0.1, 0.5, 0.9], [1.0, 2.0, 3.0])
        g2 = emo.bin_distribution([0.1, 0.5, 0.9], [10.0, 20.0, 30.0])
        np.testing.assert_allclose(g1, g2, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_matches_naive_and_sums_to_one(self, data):
        n = data.draw(st.integers(1, 20))
        scores = data.draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
        weights = data.draw(st.lists(st.floats(0.01, 100), min_size=n, max_size=n))
        g = emo.bin_distribution(scores, weights)
        np.testing.assert_allclose(g, naive_bin_distribution(scores, weights), atol=1e-9)
        assert g.sum() == pytest.approx(1.0, abs=1e-9)


class TestAggregates:
    def test_point_mass_moderate(self):
        mean, var, peak = emo.aggregates([0, 0, 1, 0, 0])
        assert (mean, var, peak) == (pytest.approx(0.5), pytest.approx(0.0), 3)

    def test_uniform(self):
        mean, var, peak = emo.aggregates([0.2] * 5)
        assert mean == pytest.approx(0.5)
        assert var == pytest.approx(0.08)
        assert peak == 1  # tie resolves low

    def test_frozen_mixture(self):
        mean, var, peak = emo.aggregates([0, 0.25, 0, 0.75, 0])
        assert mean == pytest.approx(0.6)
        assert peak == 4

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0, 1), min_size=5, max_size=5))
    def test_matches_naive(self, raw):
        total = sum(raw)
        if total <= 0:
            return
        g = [x / total for x in raw]
        got = emo.aggregates(g)
        expected = naive_aggregates(g)
        assert got[0] == pytest.approx(expected[0], abs=1e-9)
        assert got[1] == pytest.approx(expected[1], abs=1e-9)
        assert got[2] == expected[2]


class TestDispersion:
    def test_one_hot(self):
        assert emo.dispersion([1, 0, 0, 0, 0]) == (pytest.approx(1.0), pytest.approx(0.0))

    def test_uniform(self):
        c, h = emo.dispersion([0.2] * 5)
        assert c == pytest.approx(0.2)
        assert h == pytest.approx(np.log(5), abs=1e-12)

    def test_frozen_mixture(self):
        c, h = emo.dispersion([0, 0.25, 0, 0.75, 0])
        assert c == pytest.approx(0.625)
        assert h == pytest.approx(0.5623351, abs=1e-7)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0.001, 1), min_size=5, max_size=5))
    def test_bounds_and_naive(self, raw):
        g = [x / sum(raw) for x in raw]
        c, h = emo.dispersion(g)
        nc, nh = naive_dispersion(g)
        assert c == pytest.approx(nc, abs=1e-9)
        assert h == pytest.approx(nh, abs=1e-9)
        assert 0.2 - 1e-9 <= c <= 1 + 1e-9
        assert -1e-12 <= h <= np.log(5) + 1e-9


class TestCorrelations:
    def test_self_correlation_is_one(self):
        series = np.column_stack([np.arange(7.0), np.arange(7.0)])
        corr, degenerate = emo.correlation_matrix(series, t=6, window=7)
        assert corr[0, 1] == pytest.approx(1.0)
        assert not degenerate.any()

    def test_negation_is_minus_one(self):
        x = np.arange(7.0)
        series = np.column_stack([x, -x])
        corr, _ = emo.correlation_matrix(series, t=6, window=7)
        assert corr[0, 1] == pytest.approx(-1.0)

    def test_frozen_pair(self):
        x = np.array([1, 2, 3, 4, 5, 6, 7], dtype=float)
        y = np.array([2, 4, 5, 4, 5, 6, 9], dtype=float)
        corr, _ = emo.correlation_matrix(np.column_stack([x, y]), t=6, window=7)
        assert corr[0, 1] == pytest.approx(naive_pearson(list(x), list(y)), abs=1e-12)
        assert corr[0, 1] == pytest.approx(25 / 28, abs=1e-12)

    def test_constant_series_degenerate_zero(self):
        series = np.column_stack([np.ones(7), np.arange(7.0)])
        corr, degenerate = emo.correlation_matrix(series, t=6, window=7)
        assert degenerate[0] and not degenerate[1]
        assert corr[0, 1] == 0.0
        assert corr[0, 0] == 1.0  # diagonal pinned to 1

    def test_insufficient_history_raises(self):
        series = np.zeros((5, 3))
        with pytest.raises(ValueError):
            emo.correlation_matrix(series, t=4, window=7)

    def test_trailing_window_selection(self):
        x = np.concatenate([np.zeros(5), np.arange(7.0)])
        y = np.concatenate([np.zeros(5), 3 * np.arange(7.0)])
        corr, _ = emo.correlation_matrix(np.column_stack([x, y]), t=11, window=7)
        assert corr[0, 1] == pytest.approx(1.0)
