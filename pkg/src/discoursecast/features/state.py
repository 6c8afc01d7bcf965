"""Daily discourse-state assembly, the feature manifest, and the feature store.

A day's state concatenates, in manifest order: per-platform volume features
(raw, smoothed, velocity, acceleration, standardized) plus the platform
distribution index; 28 emotion mean intensities (the extended layout
appends the 28x5 bin distributions and 28 entropies); the flattened 9x6
thematic distribution; four calendar values (sin/cos of day-of-week and
month); and the flattened 9x5 key-event indicators. Days with zero
effective weight are emitted with an explicit missing marker and never
enter training windows.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

from ..adapters import EMOTION_LABELS
from ..corpus import Corpus, LayerAssignment
from . import emotions as emo
from . import themes as th
from . import volume as vol
from .events import CALENDAR_FEATURE_NAMES, IMPACT_LEVELS, KeyEvent, calendar_vector, encode_events

VOLUME_COMPONENTS = ("raw", "smoothed", "velocity", "acceleration", "standardized")


class StateError(Exception):
    pass


class MissingBlockError(StateError):
    def __init__(self, block: str):
        super().__init__(f"missing feature block: {block}")
        self.block = block


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    block: str
    offset: int


@dataclass(frozen=True)
class FeatureManifest:
    platforms: tuple[str, ...]
    topics: tuple[str, ...]
    extended: bool
    entries: tuple[ManifestEntry, ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def index_of(self, name: str) -> int:
        for e in self.entries:
            if e.name == name:
                return e.offset
        raise KeyError(f"feature {name!r} not in manifest")

    def block_slice(self, block: str) -> slice:
        offsets = [e.offset for e in self.entries if e.block == block]
        if not offsets:
            raise KeyError(f"block {block!r} not in manifest")
        return slice(min(offsets), max(offsets) + 1)

    def to_dict(self) -> dict:
        return {
            "platforms": list(self.platforms),
            "topics": list(self.topics),
            "extended": self.extended,
            "entries": [
                {"name": e.name, "block": e.block, "offset": e.offset} for e in self.entries
            ],
        }

    def hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def build_manifest(
    platforms: tuple[str, ...],
    topics: tuple[str, ...] = th.DEFAULT_TOPICS,
    extended: bool = False,
) -> FeatureManifest:
    names: list[tuple[str, str]] = []
    for platform in platforms:
        for component in VOLUME_COMPONENTS:
            names.append((f"volume_{component}[{platform}]", "volume"))
    names.append(("pdi", "volume"))
    for label in EMOTION_LABELS:
        names.append((f"emotion_mean[{label}]", "emotion"))
    if extended:
        for label in EMOTION_LABELS:
            for bin_name in emo.BIN_NAMES:
                names.append((f"emotion_bin[{label}][{bin_name}]", "emotion"))
        for label in EMOTION_LABELS:
            names.append((f"emotion_entropy[{label}]", "emotion"))
    for topic in topics:
        for bin_name in th.TOPIC_BIN_NAMES:
            names.append((f"theme[{topic}][{bin_name}]", "theme"))
    for cal in CALENDAR_FEATURE_NAMES:
        names.append((cal, "calendar"))
    for category in topics:
        for level in IMPACT_LEVELS:
            names.append((f"event[{category}][{level:+d}]", "key_events"))
        names.append((f"event[{category}][NA]", "key_events"))
    entries = tuple(
        ManifestEntry(name=n, block=b, offset=i) for i, (n, b) in enumerate(names)
    )
    return FeatureManifest(tuple(platforms), tuple(topics), extended, entries)


@dataclass
class DiscourseState:
    """One day's components prior to flattening."""

    day: date
    volume: dict[str, dict[str, float]]  # platform -> component -> value
    pdi: float
    emotion_means: np.ndarray
    emotion_bins: np.ndarray | None
    emotion_entropy: np.ndarray | None
    theta: np.ndarray
    calendar: np.ndarray
    key_events: np.ndarray


def assemble_discourse_state(state: DiscourseState, manifest: FeatureManifest) -> np.ndarray:
    """Flatten a day's components into the manifest's vector layout."""
    parts: list[np.ndarray] = []
    for platform in manifest.platforms:
        if platform not in state.volume:
            raise MissingBlockError(f"volume[{platform}]")
        per = state.volume[platform]
        parts.append(np.array([per[c] for c in VOLUME_COMPONENTS]))
    parts.append(np.array([state.pdi]))
    if state.emotion_means is None:
        raise MissingBlockError("emotion")
    parts.append(np.asarray(state.emotion_means, dtype=np.float64))
    if manifest.extended:
        if state.emotion_bins is None or state.emotion_entropy is None:
            raise MissingBlockError("emotion (extended)")
        parts.append(np.asarray(state.emotion_bins).reshape(-1))
        parts.append(np.asarray(state.emotion_entropy, dtype=np.float64))
    if state.theta is None:
        raise MissingBlockError("theme")
    parts.append(np.asarray(state.theta).reshape(-1))
    if state.calendar is None:
        raise MissingBlockError("calendar")
    parts.append(np.asarray(state.calendar, dtype=np.float64))
    if state.key_events is None:
        raise MissingBlockError("key_events")
    parts.append(np.asarray(state.key_events).reshape(-1))
    vector = np.concatenate(parts)
    if vector.size != manifest.size:
        raise StateError(f"assembled {vector.size} values, manifest expects {manifest.size}")
    return vector


@dataclass
class FeatureSeries:
    """Per-day feature vectors on a contiguous calendar grid.

    ``values[i]`` holds NaN where ``missing[i]`` is set (no-discourse day).
    """

    manifest: FeatureManifest
    dates: list[date]
    values: np.ndarray
    missing: np.ndarray

    def index_of_date(self, day: date) -> int:
        offset = (day - self.dates[0]).days
        if offset < 0 or offset >= len(self.dates):
            raise KeyError(f"date {day} outside series range")
        return offset

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.manifest.index_of(name)]


@dataclass
class DayAnalysis:
    """Per-day analysis exports that stay outside the model input layout."""

    day: date
    emotion_correlations: np.ndarray | None
    correlation_degenerate: np.ndarray | None
    topic_mi: np.ndarray | None
    core_close: np.ndarray | None


@dataclass
class SeriesBundle:
    series: FeatureSeries
    analysis: list[DayAnalysis] = field(default_factory=list)


def build_feature_series(
    corpus: Corpus,
    assignments: list[LayerAssignment],
    scorer,
    embedder,
    extractor,
    topic_keyphrases: dict[str, list[str]],
    events: list[KeyEvent],
    platforms: tuple[str, ...],
    extended: bool = False,
    smoothing_window: int = vol.DEFAULT_SMOOTHING_WINDOW,
    smoothing_decay: float = vol.DEFAULT_SMOOTHING_DECAY,
    baseline_window: int = vol.DEFAULT_BASELINE_WINDOW,
    correlation_window: int = 7,
    start: date | None = None,
    end: date | None = None,
) -> SeriesBundle:
    """Compute the full daily feature stack for an assigned corpus."""
    topics = tuple(topic_keyphrases)
    manifest = build_manifest(platforms, topics, extended)
    relevance = {a.document_id: a.relevance for a in assignments}
    docs = [d for d in corpus.documents if d.id in relevance]
    if not docs:
        raise StateError("no assigned documents to featurize")

    days_present = [d.day for d in docs]
    first = start or min(days_present)
    last = end or max(days_present)
    n_days = (last - first).days + 1
    dates = [first + timedelta(days=i) for i in range(n_days)]

    by_day: dict[date, list] = {}
    for doc in docs:
        by_day.setdefault(doc.day, []).append(doc)

    centroids = th.topic_centroids(topic_keyphrases, embedder)

    # Volume series per platform over the whole calendar grid, zeros on
    # silent days, so smoothing and derivatives see the true gaps.
    raw = np.zeros((n_days, len(platforms)))
    for i, day in enumerate(dates):
        for j, platform in enumerate(platforms):
            day_docs = [d for d in by_day.get(day, []) if d.platform == platform]
            raw[i, j] = vol.platform_volume(
                [d.engagement for d in day_docs],
                [relevance[d.id] for d in day_docs],
            )
    smoothed = np.column_stack(
        [vol.smooth_series(raw[:, j], smoothing_window, smoothing_decay) for j in range(len(platforms))]
    )
    if n_days >= 2:
        veloc = np.column_stack([vol.velocity(raw[:, j]) for j in range(len(platforms))])
        accel = np.column_stack([vol.acceleration(raw[:, j]) for j in range(len(platforms))])
        std = np.column_stack(
            [vol.standardized(raw[:, j], baseline_window) for j in range(len(platforms))]
        )
    else:
        veloc = np.zeros_like(raw)
        accel = np.zeros_like(raw)
        std = np.zeros_like(raw)

    values = np.full((n_days, manifest.size), np.nan)
    missing = np.zeros(n_days, dtype=bool)
    mean_series = np.zeros((n_days, len(EMOTION_LABELS)))
    analysis: list[DayAnalysis] = []

    for i, day in enumerate(dates):
        day_docs = by_day.get(day, [])
        weights = np.array([d.engagement * relevance[d.id] for d in day_docs])
        total_weight = weights.sum() if day_docs else 0.0
        if total_weight <= 0:
            missing[i] = True
            analysis.append(DayAnalysis(day, None, None, None, None))
            continue

        volume_block = {
            platform: {
                "raw": float(raw[i, j]),
                "smoothed": float(smoothed[i, j]),
                "velocity": float(veloc[i, j]),
                "acceleration": float(accel[i, j]),
                "standardized": float(std[i, j]),
            }
            for j, platform in enumerate(platforms)
        }
        pdi = vol.platform_distribution_index(raw[i])
        if pdi is None:
            # Discourse exists (weights > 0) so raw volume cannot all be zero.
            raise StateError(f"inconsistent volume state on {day}")

        score_matrix = np.array([scorer.score(d).scores for d in day_docs])
        means = np.zeros(len(EMOTION_LABELS))
        bins = np.zeros((len(EMOTION_LABELS), emo.N_BINS))
        entropies = np.zeros(len(EMOTION_LABELS))
        for e_idx in range(len(EMOTION_LABELS)):
            g = emo.bin_distribution(score_matrix[:, e_idx], weights)
            mean, _, _ = emo.aggregates(g)
            _, entropy = emo.dispersion(g)
            means[e_idx] = mean
            bins[e_idx] = g
            entropies[e_idx] = entropy
        mean_series[i] = means

        profiles = []
        profile_weights = []
        for doc, w in zip(day_docs, weights):
            profile = th.content_profile(extractor.extract(doc), centroids, embedder)
            if profile is not None:
                profiles.append(profile)
                profile_weights.append(w)
        theta = th.aggregate_profiles(profiles, profile_weights) if profiles else None
        if theta is None:
            # No keyphrases anywhere today: fall back to a flat "Unrelated"
            # profile so the day stays usable rather than dropping it.
            theta = np.zeros((len(topics), th.N_TOPIC_BINS))
            theta[:, -1] = 1.0
            topic_mi = np.zeros((len(topics), len(topics)))
            core_close = th.core_close_marginal(theta)
        else:
            topic_mi = th.topic_mi_matrix(profiles, profile_weights, len(topics))
            core_close = th.core_close_marginal(theta)

        state = DiscourseState(
            day=day,
            volume=volume_block,
            pdi=pdi,
            emotion_means=means,
            emotion_bins=bins if extended else None,
            emotion_entropy=entropies if extended else None,
            theta=theta,
            calendar=calendar_vector(day),
            key_events=encode_events(events, day, topics),
        )
        values[i] = assemble_discourse_state(state, manifest)

        if i + 1 >= correlation_window and not missing[max(0, i + 1 - correlation_window) : i + 1].any():
            corr, degenerate = emo.correlation_matrix(mean_series, i, correlation_window)
        else:
            corr, degenerate = None, None
        analysis.append(DayAnalysis(day, corr, degenerate, topic_mi, core_close))

    return SeriesBundle(FeatureSeries(manifest, dates, values, missing), analysis)


# ---------------------------------------------------------------------------
# Persistence


def write_manifest(path: str, manifest: FeatureManifest) -> None:
    payload = manifest.to_dict()
    payload["hash"] = manifest.hash()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path: str) -> FeatureManifest:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    entries = tuple(
        ManifestEntry(e["name"], e["block"], e["offset"]) for e in payload["entries"]
    )
    manifest = FeatureManifest(
        tuple(payload["platforms"]), tuple(payload["topics"]), payload["extended"], entries
    )
    if "hash" in payload and payload["hash"] != manifest.hash():
        raise StateError(f"manifest hash mismatch in {path}")
    return manifest


def write_feature_series(path: str, series: FeatureSeries) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, day in enumerate(series.dates):
            record = {
                "date": day.isoformat(),
                "missing": bool(series.missing[i]),
                "values": None if series.missing[i] else [float(x) for x in series.values[i]],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_feature_series(path: str, manifest: FeatureManifest) -> FeatureSeries:
    dates: list[date] = []
    rows: list[np.ndarray] = []
    missing: list[bool] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            dates.append(date.fromisoformat(record["date"]))
            if record["missing"]:
                missing.append(True)
                rows.append(np.full(manifest.size, np.nan))
            else:
                values = np.asarray(record["values"], dtype=np.float64)
                if values.size != manifest.size:
                    raise StateError(
                        f"record for {record['date']} has {values.size} values, "
                        f"manifest expects {manifest.size}"
                    )
                missing.append(False)
                rows.append(values)
    if not dates:
        raise StateError(f"empty feature store {path}")
    return FeatureSeries(manifest, dates, np.vstack(rows), np.asarray(missing))


def write_analysis(path: str, analysis: list[DayAnalysis]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in analysis:
            record = {
                "date": a.day.isoformat(),
                "emotion_correlations": None
                if a.emotion_correlations is None
                else [[float(x) for x in row] for row in a.emotion_correlations],
                "correlation_degenerate": None
                if a.correlation_degenerate is None
                else [bool(x) for x in a.correlation_degenerate],
                "topic_mi": None
                if a.topic_mi is None
                else [[float(x) for x in row] for row in a.topic_mi],
                "core_close": None
                if a.core_close is None
                else [float(x) for x in a.core_close],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")
