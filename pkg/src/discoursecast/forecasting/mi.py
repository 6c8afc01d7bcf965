"""Mutual-information feature ranking on quantile-binned columns.

Every feature and target column is discretized into (up to) eight
quantile bins over the training range; a feature's score is its maximum
plug-in mutual information against any target. Selection keeps the top-K
scores, breaking ties toward the lower column index, so the result is
deterministic for a given matrix.
"""

from __future__ import annotations

import warnings

import numpy as np

N_QUANTILE_BINS = 8


def quantile_bin(column: np.ndarray, n_bins: int = N_QUANTILE_BINS) -> np.ndarray:
    """Integer bin codes from quantile edges; constant columns give one bin."""
    edges = np.quantile(column, np.linspace(0, 1, n_bins + 1)[1:-1])
    edges = np.unique(edges)
    return np.searchsorted(edges, column, side="right")


def plugin_mi(codes_a: np.ndarray, codes_b: np.ndarray) -> float:
    """Plug-in MI (nats) between two integer-coded columns."""
    ka = int(codes_a.max()) + 1
    kb = int(codes_b.max()) + 1
    if ka == 1 or kb == 1:
        return 0.0
    joint = np.zeros((ka, kb))
    np.add.at(joint, (codes_a, codes_b), 1.0)
    joint /= joint.sum()
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    mask = joint > 0
    return float((joint[mask] * np.log(joint[mask] / np.outer(pa, pb)[mask])).sum())


def mi_scores(features: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Max-over-targets MI per feature column.

    Constant target columns carry no information and are skipped with a
    warning; if every target is constant all scores are zero.
    """
    target_codes = []
    for j in range(targets.shape[1]):
        codes = quantile_bin(targets[:, j])
        if np.unique(codes).size == 1:
            warnings.warn(f"target column {j} is constant; skipped in MI ranking")
            continue
        target_codes.append(codes)
    scores = np.zeros(features.shape[1])
    if not target_codes:
        return scores
    for i in range(features.shape[1]):
        codes = quantile_bin(features[:, i])
        if np.unique(codes).size == 1:
            continue
        scores[i] = max(plugin_mi(codes, tc) for tc in target_codes)
    return scores


def select_features(features: np.ndarray, targets: np.ndarray, k: int) -> list[int]:
    """Indices of the top-k features by MI score, ties to the lower index."""
    if k > features.shape[1]:
        raise ValueError(f"k={k} exceeds feature count {features.shape[1]}")
    scores = mi_scores(features, targets)
    order = np.lexsort((np.arange(scores.size), -scores))
    return sorted(int(i) for i in order[:k])
