"""Supervised window assembly and the chronological train/validation split.

Windows slide with stride 1 over contiguous runs of non-missing days: the
encoder sees ``context_len`` days of selected features plus in-window lag
copies of each target (zero-filled where a lag would reach before the
window start, so the model never reads outside its context), and the
decoder sees the known future covariates (calendar and key-event
indicators) for the ``horizon`` days it must predict. The last 20% of
windows, by anchor order, form the validation split; no shuffling crosses
that boundary. Feature and target columns are standardized with
statistics from the training span only.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from ..features.state import FeatureManifest, FeatureSeries
from ..features.events import KeyEvent, calendar_vector, encode_events
from .config import ModelConfig
from .mi import select_features


class WindowError(Exception):
    pass


@dataclass
class WindowDataset:
    config: ModelConfig
    manifest_hash: str
    selected: list[int]           # manifest offsets fed to the encoder
    selected_names: list[str]     # the same features, by name
    target_indices: list[int]     # manifest offsets being predicted
    covariate_indices: list[int]  # manifest offsets of known future covariates
    feature_mean: np.ndarray
    feature_std: np.ndarray
    target_mean: np.ndarray
    target_std: np.ndarray
    anchors: list[date]           # last context day of each window
    ctx: np.ndarray               # (n, context_len, n_enc_features)
    fut_cov: np.ndarray           # (n, horizon, n_covariates)
    fut_y: np.ndarray             # (n, horizon, n_targets), standardized
    n_train: int

    @property
    def n_windows(self) -> int:
        return len(self.anchors)

    def train_slice(self) -> slice:
        return slice(0, self.n_train)

    def validation_slice(self) -> slice:
        return slice(self.n_train, self.n_windows)


def contiguous_segments(series: FeatureSeries) -> list[tuple[int, int]]:
    """[start, end) row ranges of consecutive non-missing days."""
    segments = []
    start = None
    for i, miss in enumerate(series.missing):
        if miss:
            if start is not None:
                segments.append((start, i))
                start = None
        elif start is None:
            start = i
    if start is not None:
        segments.append((start, len(series.missing)))
    return segments


def known_covariate_indices(manifest: FeatureManifest) -> list[int]:
    return [e.offset for e in manifest.entries if e.block in ("calendar", "key_events")]


def covariates_for_days(days: list[date], events: list[KeyEvent], manifest: FeatureManifest) -> np.ndarray:
    """Decoder covariates built directly from an event table (what-if path)."""
    rows = []
    for day in days:
        cal = calendar_vector(day)
        evt = encode_events(events, day, manifest.topics).reshape(-1)
        rows.append(np.concatenate([cal, evt]))
    return np.asarray(rows)


def _safe_std(std: np.ndarray) -> np.ndarray:
    out = std.copy()
    out[out <= 1e-12] = 1.0
    return out


def make_training_windows(
    series: FeatureSeries,
    config: ModelConfig,
    min_history_days: int = 60,
) -> WindowDataset:
    """Build the standardized, MI-selected supervised window set."""
    manifest = series.manifest
    target_indices = [manifest.index_of(name) for name in config.targets]
    covariate_indices = known_covariate_indices(manifest)

    span = config.context_len + config.horizon
    window_positions: list[tuple[int, int]] = []  # (segment_start, window_start)
    for seg_start, seg_end in contiguous_segments(series):
        for start in range(seg_start, seg_end - span + 1):
            window_positions.append((seg_start, start))
    if not window_positions:
        raise WindowError(
            f"need a contiguous span of at least {span} non-missing days; none found"
        )
    window_positions.sort(key=lambda p: p[1])

    n_windows = len(window_positions)
    n_val = int(round(config.validation_fraction * n_windows))
    n_train = n_windows - n_val
    if n_train < 1:
        raise WindowError("no training windows left after validation split")

    # Training-range rows: everything a training window can touch.
    last_train_row = window_positions[n_train - 1][1] + span
    train_rows = ~series.missing[:last_train_row]
    train_matrix = series.values[:last_train_row][train_rows]
    if train_matrix.shape[0] < min_history_days:
        raise WindowError(
            f"need at least {min_history_days} days of history for feature "
            f"selection, have {train_matrix.shape[0]}"
        )

    targets_matrix = train_matrix[:, target_indices]
    k = min(config.selected_feature_count, series.values.shape[1])
    selected = select_features(train_matrix, targets_matrix, k)

    feature_mean = train_matrix[:, selected].mean(axis=0)
    feature_std = _safe_std(train_matrix[:, selected].std(axis=0))
    target_mean = targets_matrix.mean(axis=0)
    target_std = _safe_std(targets_matrix.std(axis=0))

    values = series.values
    z_features = (values[:, selected] - feature_mean) / feature_std
    z_targets = (values[:, target_indices] - target_mean) / target_std

    ctx_list, cov_list, y_list, anchors = [], [], [], []
    for _, start in window_positions:
        ctx_rows = slice(start, start + config.context_len)
        fut_rows = slice(start + config.context_len, start + span)
        ctx_features = z_features[ctx_rows]
        lag_block = _in_window_lags(z_targets[ctx_rows], config.lags)
        ctx_list.append(np.concatenate([ctx_features, lag_block], axis=1))
        cov_list.append(values[fut_rows][:, covariate_indices])
        y_list.append(z_targets[fut_rows])
        anchors.append(series.dates[start + config.context_len - 1])

    manifest_names = manifest.names()
    return WindowDataset(
        config=config,
        manifest_hash=manifest.hash(),
        selected=selected,
        selected_names=[manifest_names[i] for i in selected],
        target_indices=target_indices,
        covariate_indices=covariate_indices,
        feature_mean=feature_mean,
        feature_std=feature_std,
        target_mean=target_mean,
        target_std=target_std,
        anchors=anchors,
        ctx=np.stack(ctx_list),
        fut_cov=np.stack(cov_list),
        fut_y=np.stack(y_list),
        n_train=n_train,
    )


def _in_window_lags(z_ctx: np.ndarray, lags: tuple[int, ...]) -> np.ndarray:
    """Lagged copies of the target block, zero-filled at the window start."""
    context_len, n_targets = z_ctx.shape
    out = np.zeros((context_len, n_targets * len(lags)))
    for j, lag in enumerate(lags):
        out[lag:, j * n_targets : (j + 1) * n_targets] = z_ctx[: context_len - lag]
    return out


def resolve_feature_indices(manifest: FeatureManifest, names: list[str]) -> list[int]:
    """Offsets of ``names`` in this manifest; missing names are a mismatch.

    Lookups go by name so a store whose columns were permuted together
    with its manifest still feeds the model identically.
    """
    try:
        return [manifest.index_of(name) for name in names]
    except KeyError as exc:
        raise WindowError(f"feature manifest mismatch: {exc}") from exc


def context_window(
    series: FeatureSeries,
    dataset_like,
    anchor: date,
) -> np.ndarray:
    """Encoder input for the window whose last context day is ``anchor``.

    ``dataset_like`` is any object carrying the standardization fields and
    selected feature names of a WindowDataset (a trained forecaster works
    too). Feature columns are resolved by name against the series' own
    manifest.
    """
    config = dataset_like.config
    end = series.index_of_date(anchor)
    start = end - config.context_len + 1
    if start < 0:
        raise WindowError(f"anchor {anchor} has fewer than {config.context_len} prior days")
    if series.missing[start : end + 1].any():
        raise WindowError(f"context window ending {anchor} crosses a missing day")
    rows = series.values[start : end + 1]
    selected = resolve_feature_indices(series.manifest, dataset_like.selected_names)
    target_indices = resolve_feature_indices(series.manifest, list(config.targets))
    z_features = (rows[:, selected] - dataset_like.feature_mean) / dataset_like.feature_std
    z_targets = (rows[:, target_indices] - dataset_like.target_mean) / dataset_like.target_std
    lag_block = _in_window_lags(z_targets, config.lags)
    return np.concatenate([z_features, lag_block], axis=1)


def future_days(anchor: date, horizon: int) -> list[date]:
    return [anchor + timedelta(days=step) for step in range(1, horizon + 1)]
