"""Thematic alignment features from keyphrase-to-topic distances.

Each topic is a centroid (the mean of its seed keyphrase embeddings). A
content item's thematic profile M is a topics x bins row-stochastic matrix:
for every topic, the share of the item's keyphrases whose cosine distance
to the centroid falls in each of six alignment bins (Core, Close, Related,
Peripheral, Distant, Unrelated). Cosine distance ranges over [0, 2] but the
bin grid tops out at 1.0, so larger distances clamp into Unrelated. Daily
aggregation weight-averages the item profiles; topic coupling is the mutual
information between two topics' dominant-bin assignments.
"""

from __future__ import annotations

import numpy as np

N_TOPIC_BINS = 6
TOPIC_BIN_NAMES = ("Core", "Close", "Related", "Peripheral", "Distant", "Unrelated")
TOPIC_BIN_EDGES = (0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0)

DEFAULT_TOPICS = (
    "Gender Equality",
    "Human Rights",
    "Violence",
    "Health & Reproductive Rights",
    "Political Change",
    "Natural Disaster",
    "Climate & Environment",
    "Migration & Displacement",
    "Technology & AI",
)


class ThemeError(Exception):
    pass


def topic_centroids(topic_keyphrases: dict[str, list[str]], embedder) -> dict[str, np.ndarray]:
    """Mean embedding per topic, not renormalized.

    A topic without keyphrases is an error, as is a centroid that averages
    to (numerically) zero, which would make cosine distances undefined.
    """
    centroids: dict[str, np.ndarray] = {}
    for topic, phrases in topic_keyphrases.items():
        if not phrases:
            raise ThemeError(f"topic {topic!r} has no keyphrases")
        vectors = [np.asarray(embedder.embed(p).vector) for p in phrases]
        centroid = np.mean(vectors, axis=0)
        if np.linalg.norm(centroid) < 1e-12:
            raise ThemeError(f"degenerate (zero) centroid for topic {topic!r}")
        centroids[topic] = centroid
    return centroids


def topic_distance(vector, centroid) -> float:
    """Cosine distance 1 - cos(v, c), in [0, 2]."""
    v = np.asarray(vector, dtype=np.float64)
    c = np.asarray(centroid, dtype=np.float64)
    nv, nc = np.linalg.norm(v), np.linalg.norm(c)
    if nv < 1e-12 or nc < 1e-12:
        raise ThemeError("cosine distance undefined for zero vector")
    return float(1.0 - np.dot(v, c) / (nv * nc))


def distance_bin(distance: float) -> int:
    """1-based alignment bin; distances above 1.0 clamp into the last bin."""
    if distance < 0:
        distance = 0.0
    for b in range(1, N_TOPIC_BINS):
        if distance < TOPIC_BIN_EDGES[b]:
            return b
    return N_TOPIC_BINS


def content_profile(keyphrases: list[str], centroids: dict[str, np.ndarray], embedder) -> np.ndarray | None:
    """Thematic profile matrix for one content item; None when no keyphrases."""
    if not keyphrases:
        return None
    topics = list(centroids)
    profile = np.zeros((len(topics), N_TOPIC_BINS))
    vectors = [np.asarray(embedder.embed(p).vector) for p in keyphrases]
    for vec in vectors:
        for row, topic in enumerate(topics):
            d = topic_distance(vec, centroids[topic])
            profile[row, distance_bin(d) - 1] += 1.0
    return profile / len(keyphrases)


def aggregate_profiles(profiles: list[np.ndarray], weights) -> np.ndarray | None:
    """Weight-averaged daily thematic distribution; None when weightless."""
    weights = np.asarray(weights, dtype=np.float64)
    if len(profiles) != weights.size:
        raise ValueError("profiles and weights must align")
    if np.any(weights < 0):
        raise ValueError("effective weights must be non-negative")
    total = weights.sum()
    if total <= 0 or not profiles:
        return None
    acc = np.zeros_like(profiles[0])
    for m, w in zip(profiles, weights):
        acc += w * m
    return acc / total


def dominant_bins(profile: np.ndarray) -> np.ndarray:
    """Per-topic argmax bin of a profile matrix, ties to the lowest bin (0-based)."""
    return np.argmax(profile, axis=1)


def dominant_bin_joint(
    profiles: list[np.ndarray], weights, topic_a: int, topic_b: int
) -> np.ndarray | None:
    """Joint distribution of dominant bins for two topics across a day's items."""
    weights = np.asarray(weights, dtype=np.float64)
    total = weights.sum()
    if total <= 0 or not profiles:
        return None
    joint = np.zeros((N_TOPIC_BINS, N_TOPIC_BINS))
    for m, w in zip(profiles, weights):
        bins = dominant_bins(m)
        joint[bins[topic_a], bins[topic_b]] += w
    return joint / total


def mutual_information(joint: np.ndarray, marginal_a, marginal_b, tol: float = 1e-9) -> float:
    """MI of a discrete joint against supplied marginals, in nats.

    The marginals must match the joint's own marginals within ``tol``.
    Zero joint cells contribute nothing; the result is non-negative up to
    floating-point noise.
    """
    joint = np.asarray(joint, dtype=np.float64)
    pa = np.asarray(marginal_a, dtype=np.float64)
    pb = np.asarray(marginal_b, dtype=np.float64)
    if np.any(joint < 0) or abs(joint.sum() - 1.0) > tol:
        raise ValueError("joint must be non-negative and sum to 1")
    if np.max(np.abs(joint.sum(axis=1) - pa)) > tol or np.max(np.abs(joint.sum(axis=0) - pb)) > tol:
        raise ValueError("marginals inconsistent with joint beyond tolerance")
    mask = joint > 0
    outer = np.outer(pa, pb)
    mi = float((joint[mask] * np.log(joint[mask] / outer[mask])).sum())
    return mi


def topic_mi_matrix(profiles: list[np.ndarray], weights, n_topics: int) -> np.ndarray | None:
    """Symmetric topic-coupling matrix from dominant-bin joints."""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.sum() <= 0 or not profiles:
        return None
    mi = np.zeros((n_topics, n_topics))
    for a in range(n_topics):
        for b in range(a, n_topics):
            joint = dominant_bin_joint(profiles, weights, a, b)
            value = mutual_information(joint, joint.sum(axis=1), joint.sum(axis=0))
            mi[a, b] = mi[b, a] = value
    return mi


def core_close_marginal(theta: np.ndarray) -> np.ndarray:
    """Per-topic mass in the two tightest alignment bins (exported summary)."""
    return theta[:, 0] + theta[:, 1]
