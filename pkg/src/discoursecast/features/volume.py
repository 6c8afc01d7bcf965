"""Volume features: weighted counts, smoothing, derivatives, platform spread.

A platform's raw volume on a day is the sum of engagement * relevance over
that day's documents. Smoothing applies an exponentially decaying window

    smoothed_t = sum_{tau=0}^{W-1} decay^tau * raw_{t-tau} * (1-decay)/(1-decay^W)

whose weights sum to one once the window is full; days before that use the
same formula with out-of-range terms treated as zero (warm-up). Velocity
and acceleration are first and second differences of the raw series, and
the standardized volume is a z-score against a trailing baseline window
that excludes the current day.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_SMOOTHING_WINDOW = 7
DEFAULT_SMOOTHING_DECAY = 0.8
DEFAULT_BASELINE_WINDOW = 28


def platform_volume(weights, relevances) -> float:
    """Engagement-and-relevance weighted volume for one platform-day."""
    total = 0.0
    for w, rho in zip(weights, relevances, strict=True):
        if w < 0:
            raise ValueError(f"negative engagement weight {w}")
        if not (0.0 <= rho <= 1.0):
            raise ValueError(f"relevance {rho} outside [0, 1]")
        total += w * rho
    return total


def smooth_series(
    series,
    window: int = DEFAULT_SMOOTHING_WINDOW,
    decay: float = DEFAULT_SMOOTHING_DECAY,
) -> np.ndarray:
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if not (0.0 < decay < 1.0):
        raise ValueError(f"decay must be in (0, 1), got {decay}")
    values = np.asarray(series, dtype=np.float64)
    if values.ndim != 1 or values.size < 1:
        raise ValueError("series must be a non-empty 1-d array")
    norm = (1.0 - decay) / (1.0 - decay**window)
    out = np.zeros_like(values)
    for t in range(values.size):
        acc = 0.0
        for tau in range(window):
            if t - tau < 0:
                break
            acc += decay**tau * values[t - tau]
        out[t] = acc * norm
    return out


def velocity(series) -> np.ndarray:
    """First difference; day 0 has no predecessor and reports 0."""
    values = np.asarray(series, dtype=np.float64)
    if values.size < 2:
        raise ValueError("need at least 2 days for velocity")
    out = np.zeros_like(values)
    out[1:] = values[1:] - values[:-1]
    return out


def acceleration(series) -> np.ndarray:
    """Second difference; the first two days report 0."""
    v = velocity(series)
    out = np.zeros_like(v)
    out[2:] = v[2:] - v[1:-1]
    return out


def standardized(series, baseline_window: int = DEFAULT_BASELINE_WINDOW) -> np.ndarray:
    """Z-score against the trailing ``baseline_window`` days, current day excluded.

    A zero or undefined baseline standard deviation yields 0 by convention,
    never NaN.
    """
    values = np.asarray(series, dtype=np.float64)
    if values.size < 2:
        raise ValueError("need at least 2 days for standardization")
    out = np.zeros_like(values)
    for t in range(values.size):
        lo = max(0, t - baseline_window)
        window = values[lo:t]
        if window.size == 0:
            continue
        mu = window.mean()
        sigma = window.std()  # population
        out[t] = (values[t] - mu) / sigma if sigma > 0 else 0.0
    return out


def platform_distribution_index(volumes) -> float | None:
    """Shannon entropy of per-platform volume shares.

    Returns None (the no-discourse marker) when every platform is silent;
    0 * log 0 counts as 0.
    """
    values = np.asarray(volumes, dtype=np.float64)
    if np.any(values < 0):
        raise ValueError("platform volumes must be non-negative")
    total = values.sum()
    if total <= 0:
        return None
    shares = values / total
    nonzero = shares[shares > 0]
    return float(-(nonzero * np.log(nonzero)).sum())


def smoothing_weights(window: int, decay: float) -> np.ndarray:
    """The normalized kernel; sums to 1 for any valid (window, decay)."""
    norm = (1.0 - decay) / (1.0 - decay**window)
    return norm * decay ** np.arange(window, dtype=np.float64)


def pdi_upper_bound(n_platforms: int) -> float:
    return math.log(n_platforms) if n_platforms > 0 else 0.0
