"""Per-day emotion distributions over five intensity bins and their summaries.

Each document's emotion score in [0, 1] falls into one of five bins
(Absent, Low, Moderate, High, Very High) with edges at multiples of 0.2;
the top bin is closed at 1.0. A day's bin distribution weights each
document by engagement * relevance. Summaries use the bin midpoints
(0.1, 0.3, 0.5, 0.7, 0.9) for mean and variance; concentration is the sum
of squared bin masses and entropy the Shannon entropy of the bins.
"""

from __future__ import annotations

import numpy as np

N_BINS = 5
BIN_NAMES = ("Absent", "Low", "Moderate", "High", "Very High")
BIN_EDGES = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
BIN_MIDPOINTS = np.array([0.1, 0.3, 0.5, 0.7, 0.9])


def assign_bin(score: float) -> int:
    """1-based bin index for a score in [0, 1]; 1.0 lands in the top bin."""
    if not (0.0 <= score <= 1.0):
        raise ValueError(f"emotion score {score} outside [0, 1]")
    for b in range(1, N_BINS):
        if score < BIN_EDGES[b]:
            return b
    return N_BINS


def bin_distribution(scores, weights) -> np.ndarray | None:
    """Weighted bin mass vector G for one emotion-day; None when weightless.

    ``weights`` are effective weights (engagement * relevance) and must be
    non-negative. With positive total weight the result sums to 1.
    """
    scores = np.asarray(scores, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if scores.shape != weights.shape:
        raise ValueError("scores and weights must align")
    if np.any(weights < 0):
        raise ValueError("effective weights must be non-negative")
    total = weights.sum()
    if total <= 0:
        return None
    g = np.zeros(N_BINS)
    for s, w in zip(scores, weights):
        g[assign_bin(float(s)) - 1] += w
    return g / total


def aggregates(g) -> tuple[float, float, int]:
    """(mean intensity, variance, peak bin) from a bin distribution.

    Variance uses population normalization. Peak ties resolve to the
    lowest bin index (1-based).
    """
    g = np.asarray(g, dtype=np.float64)
    mean = float(np.dot(g, BIN_MIDPOINTS))
    var = float(np.dot(g, (BIN_MIDPOINTS - mean) ** 2))
    peak = int(np.argmax(g)) + 1
    return mean, var, peak


def dispersion(g) -> tuple[float, float]:
    """(concentration, entropy); one-hot gives (1, 0), uniform (0.2, ln 5)."""
    g = np.asarray(g, dtype=np.float64)
    concentration = float(np.dot(g, g))
    nonzero = g[g > 0]
    entropy = float(-(nonzero * np.log(nonzero)).sum())
    return concentration, entropy


def correlation_matrix(
    mean_series: np.ndarray, t: int, window: int = 7
) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise Pearson correlations over the trailing window ending at t.

    ``mean_series`` is (days, emotions). Returns (corr, degenerate) where
    degenerate flags emotions whose series is constant in-window; their
    off-diagonal correlations are 0 by convention and the diagonal stays 1.
    """
    if t + 1 < window:
        raise ValueError(f"need {window} days of history, have {t + 1}")
    block = np.asarray(mean_series, dtype=np.float64)[t + 1 - window : t + 1]
    centered = block - block.mean(axis=0)
    var = (centered**2).mean(axis=0)
    degenerate = var <= 0
    n = block.shape[1]
    corr = np.zeros((n, n))
    sd = np.sqrt(var)
    ok = ~degenerate
    if ok.any():
        cov = centered.T @ centered / window
        denom = np.outer(sd, sd)
        with np.errstate(invalid="ignore", divide="ignore"):
            raw = cov / denom
        corr[np.ix_(ok, ok)] = raw[np.ix_(ok, ok)]
    np.fill_diagonal(corr, 1.0)
    return corr, degenerate
