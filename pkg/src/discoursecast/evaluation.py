"""Directional calls, classification metrics, horizon sweeps, and replays.

A realized or forecast value classifies against a rolling baseline: with
mu and sigma the mean and population standard deviation of the trailing
28 days (the predicted day excluded), a value above mu + 2 sigma is an
Increase, below mu - 2 sigma a Decrease, and anything in the closed band
is Stable. Days with fewer than 28 prior days are Unscored and excluded
from metrics. Forecast distributions also yield class probabilities: the
Student-t tail mass above and below the band, with the remainder Stable.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import TYPE_CHECKING

import numpy as np

from .forecasting.studentt import StudentTParams, cdf
from .forecasting.windows import WindowError

if TYPE_CHECKING:
    from .forecasting.training import Forecaster

LABELS = ("Increase", "Stable", "Decrease")
DEFAULT_ROLLING_WINDOW = 28
SIGMA_MULTIPLIER = 2.0


class EvaluationError(Exception):
    pass


def rolling_stats(series, t: int, window: int = DEFAULT_ROLLING_WINDOW):
    """(mean, population std) of the trailing window ending just before t.

    Returns None (Unscored) when fewer than ``window`` days precede t.
    """
    if t < window:
        return None
    block = np.asarray(series, dtype=np.float64)[t - window : t]
    return float(block.mean()), float(block.std())


def classify_direction(y: float, mu: float, sigma: float) -> str:
    if y > mu + SIGMA_MULTIPLIER * sigma:
        return "Increase"
    if y < mu - SIGMA_MULTIPLIER * sigma:
        return "Decrease"
    return "Stable"


@dataclass(frozen=True)
class ClassScores:
    p_increase: float
    p_stable: float
    p_decrease: float
    degenerate_band: bool = False

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_increase, self.p_stable, self.p_decrease)

    def argmax_label(self) -> str:
        """Highest-probability class; exact ties resolve to Stable."""
        best = max(self.as_tuple())
        if self.p_stable == best:
            return "Stable"
        return "Increase" if self.p_increase == best else "Decrease"


def direction_probabilities(params: StudentTParams, mu: float, sigma: float) -> ClassScores:
    """Class probabilities from the forecast distribution's band exceedance."""
    upper = mu + SIGMA_MULTIPLIER * sigma
    lower = mu - SIGMA_MULTIPLIER * sigma
    p_inc = float(1.0 - cdf(upper, params.loc, params.scale, params.df))
    p_dec = float(cdf(lower, params.loc, params.scale, params.df))
    p_stable = max(0.0, 1.0 - p_inc - p_dec)
    return ClassScores(p_inc, p_stable, p_dec, degenerate_band=(sigma == 0.0))


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class MetricsSlice:
    """Three-class metrics for one (target, horizon) pair."""

    per_class: dict[str, ClassMetrics]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    confusion: dict[str, dict[str, int]]
    auc: float | None = None
    n_scored: int = 0
    n_unscored: int = 0

    def to_dict(self) -> dict:
        return {
            "per_class": {
                label: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for label, m in self.per_class.items()
            },
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "confusion": self.confusion,
            "auc": self.auc,
            "n_scored": self.n_scored,
            "n_unscored": self.n_unscored,
        }


def compute_metrics(predicted: list[str], truth: list[str]) -> MetricsSlice:
    """Per-class and macro precision/recall/F1 plus accuracy.

    Zero-denominator metrics resolve to 0 (conservative convention).
    """
    if len(predicted) != len(truth):
        raise EvaluationError("prediction and truth sequences must align")
    if not truth:
        raise EvaluationError("cannot compute metrics on empty input")
    confusion = {t: {p: 0 for p in LABELS} for t in LABELS}
    for p, t in zip(predicted, truth):
        confusion[t][p] += 1
    per_class = {}
    for label in LABELS:
        tp = confusion[label][label]
        fn = sum(confusion[label][p] for p in LABELS if p != label)
        fp = sum(confusion[t][label] for t in LABELS if t != label)
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class[label] = ClassMetrics(precision, recall, f1, tp + fn)
    accuracy = sum(confusion[l][l] for l in LABELS) / len(truth)
    return MetricsSlice(
        per_class=per_class,
        accuracy=accuracy,
        macro_precision=float(np.mean([per_class[l].precision for l in LABELS])),
        macro_recall=float(np.mean([per_class[l].recall for l in LABELS])),
        macro_f1=float(np.mean([per_class[l].f1 for l in LABELS])),
        confusion=confusion,
        n_scored=len(truth),
    )


def auc_ovr(scores: list[ClassScores], truth: list[str]) -> float | None:
    """Macro one-vs-rest rank AUC with ties counted one half.

    Classes lacking either a positive or a negative example are skipped;
    returns None when no class is scorable.
    """
    if len(scores) != len(truth):
        raise EvaluationError("scores and truth must align")
    per_class_auc = []
    for label, getter in (
        ("Increase", lambda s: s.p_increase),
        ("Stable", lambda s: s.p_stable),
        ("Decrease", lambda s: s.p_decrease),
    ):
        positives = [getter(s) for s, t in zip(scores, truth) if t == label]
        negatives = [getter(s) for s, t in zip(scores, truth) if t != label]
        if not positives or not negatives:
            warnings.warn(f"AUC: class {label} lacks positives or negatives; skipped")
            continue
        wins = 0.0
        for p in positives:
            for n in negatives:
                if p > n:
                    wins += 1.0
                elif p == n:
                    wins += 0.5
        per_class_auc.append(wins / (len(positives) * len(negatives)))
    if not per_class_auc:
        return None
    return float(np.mean(per_class_auc))


def label_series(values, window: int = DEFAULT_ROLLING_WINDOW) -> list[str | None]:
    """Ground-truth direction per day; None where history is insufficient."""
    values = np.asarray(values, dtype=np.float64)
    labels: list[str | None] = []
    for t in range(values.size):
        stats = rolling_stats(values, t, window)
        labels.append(None if stats is None else classify_direction(values[t], *stats))
    return labels


def persistence_labels(values, delta: int, window: int = DEFAULT_ROLLING_WINDOW) -> list[str | None]:
    """Baseline that predicts the value ``delta`` days ahead stays at today's.

    The prediction for day t is classified against day t's own rolling
    band, exactly as a realized value would be.
    """
    values = np.asarray(values, dtype=np.float64)
    labels: list[str | None] = []
    for t in range(values.size):
        if t - delta < 0:
            labels.append(None)
            continue
        stats = rolling_stats(values, t, window)
        labels.append(None if stats is None else classify_direction(values[t - delta], *stats))
    return labels


@dataclass
class HorizonEvaluation:
    """Everything the sweep produced for one forecast step delta."""

    delta: int
    per_target: dict[str, MetricsSlice]
    persistence: dict[str, MetricsSlice]
    days: list[date] = field(default_factory=list)

    def average(self, attr: str) -> float:
        return float(np.mean([getattr(m, attr) for m in self.per_target.values()]))

    def spread(self, attr: str) -> float:
        return float(np.std([getattr(m, attr) for m in self.per_target.values()]))


def evaluate_forecasts(
    forecaster: "Forecaster",
    series,
    events,
    deltas: list[int] | None = None,
    window: int = DEFAULT_ROLLING_WINDOW,
    anchors: list[date] | None = None,
) -> dict[int, HorizonEvaluation]:
    """Backtest across anchors: forecast from each, score each step delta.

    For each anchor t with a full context, the step-delta forecast for day
    t+delta is classified against the realized trailing window of t+delta,
    the same band that labels ground truth. Unscored days are dropped.
    """
    config = forecaster.config
    deltas = deltas or list(range(1, config.horizon + 1))
    if max(deltas) > config.horizon:
        raise EvaluationError(f"delta {max(deltas)} exceeds trained horizon {config.horizon}")

    target_values = {name: series.column(name) for name in config.targets}
    if anchors is None:
        anchors = _default_anchors(series, config, window)
    forecasts = {}
    for anchor in anchors:
        try:
            forecasts[anchor] = forecaster.predict(series, anchor, events)
        except WindowError:
            continue

    results: dict[int, HorizonEvaluation] = {}
    for delta in deltas:
        per_target: dict[str, MetricsSlice] = {}
        persistence: dict[str, MetricsSlice] = {}
        scored_days: list[date] = []
        for name in config.targets:
            values = target_values[name]
            pred, truth, probas, persist = [], [], [], []
            days_used = []
            unscored = 0
            for anchor, forecast in forecasts.items():
                target_day = anchor + timedelta(days=delta)
                try:
                    t = series.index_of_date(target_day)
                except KeyError:
                    unscored += 1
                    continue
                if series.missing[t]:
                    unscored += 1
                    continue
                stats = rolling_stats(values, t, window)
                if stats is None:
                    unscored += 1
                    continue
                mu, sigma = stats
                params = forecast.targets[name].params[delta - 1]
                scores = direction_probabilities(params, mu, sigma)
                pred.append(scores.argmax_label())
                probas.append(scores)
                truth.append(classify_direction(float(values[t]), mu, sigma))
                persist.append(classify_direction(float(values[series.index_of_date(anchor)]), mu, sigma))
                days_used.append(target_day)
            if not truth:
                continue
            slice_ = compute_metrics(pred, truth)
            slice_.auc = auc_ovr(probas, truth)
            slice_.n_unscored = unscored
            per_target[name] = slice_
            persistence[name] = compute_metrics(persist, truth)
            scored_days = days_used
        results[delta] = HorizonEvaluation(delta, per_target, persistence, scored_days)
    return results


def _default_anchors(series, config, window: int) -> list[date]:
    anchors = []
    for t in range(len(series.dates)):
        start = t - config.context_len + 1
        if start < 0 or t + 1 > len(series.dates) - 1:
            continue
        if series.missing[start : t + 1].any():
            continue
        if t + 1 < window:  # nothing scorable this early
            continue
        anchors.append(series.dates[t])
    return anchors


def metrics_report_dict(results: dict[int, HorizonEvaluation]) -> dict:
    """JSON-ready report: per-target rows plus an average row with std."""
    report: dict = {"deltas": {}}
    for delta in sorted(results):
        ev = results[delta]
        average = {}
        for attr in ("macro_f1", "macro_precision", "macro_recall", "accuracy"):
            average[attr] = ev.average(attr) if ev.per_target else None
            average[f"{attr}_std"] = ev.spread(attr) if ev.per_target else None
        report["deltas"][str(delta)] = {
            "per_target": {name: m.to_dict() for name, m in sorted(ev.per_target.items())},
            "persistence": {name: m.to_dict() for name, m in sorted(ev.persistence.items())},
            "average": average,
        }
    return report


def write_trend_tables(results: dict[int, HorizonEvaluation], path: str) -> None:
    """Per-class precision by horizon, one CSV row per (target, class)."""
    deltas = sorted(results)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["target", "class"] + [f"precision@{d}" for d in deltas])
        targets = sorted({name for ev in results.values() for name in ev.per_target})
        for name in targets:
            for label in LABELS:
                row = [name, label]
                for d in deltas:
                    m = results[d].per_target.get(name)
                    row.append("" if m is None else f"{m.per_class[label].precision:.6f}")
                writer.writerow(row)


@dataclass
class ReplayCell:
    anchor: date
    target: str
    platform: str
    truth_direction: str
    forecast_direction: str

    @property
    def match(self) -> bool:
        return self.truth_direction == self.forecast_direction


def case_study_replay(
    forecaster: "Forecaster",
    series,
    events,
    anchors: list[date],
    window: int = DEFAULT_ROLLING_WINDOW,
) -> tuple[list[ReplayCell], list[str]]:
    """Condition on history up to each anchor and score the following week.

    For every anchor and target the forecast direction at the trained
    horizon's end is compared to the realized direction; anchors too close
    to the series boundary are skipped with a reason. Returns (cells,
    skipped-anchor notes).
    """
    config = forecaster.config
    cells: list[ReplayCell] = []
    skipped: list[str] = []
    for anchor in anchors:
        try:
            t_anchor = series.index_of_date(anchor)
        except KeyError:
            skipped.append(f"{anchor}: outside series range")
            continue
        if t_anchor - config.context_len + 1 < 0:
            skipped.append(f"{anchor}: fewer than {config.context_len} prior days")
            continue
        if t_anchor + config.horizon >= len(series.dates):
            skipped.append(f"{anchor}: fewer than {config.horizon} subsequent truth days")
            continue
        try:
            forecast = forecaster.predict(series, anchor, events)
        except WindowError as exc:
            skipped.append(f"{anchor}: {exc}")
            continue
        delta = config.horizon
        target_day = anchor + timedelta(days=delta)
        t = series.index_of_date(target_day)
        for name in config.targets:
            values = series.column(name)
            stats = rolling_stats(values, t, window)
            if stats is None or series.missing[t]:
                continue
            mu, sigma = stats
            params = forecast.targets[name].params[delta - 1]
            scores = direction_probabilities(params, mu, sigma)
            cells.append(
                ReplayCell(
                    anchor=anchor,
                    target=name,
                    platform=_platform_of_target(name),
                    truth_direction=classify_direction(float(values[t]), mu, sigma),
                    forecast_direction=scores.argmax_label(),
                )
            )
    return cells, skipped


def _platform_of_target(name: str) -> str:
    if name.startswith("volume_") and "[" in name:
        return name[name.index("[") + 1 : name.index("]")]
    return "all"


def replay_match_table(cells: list[ReplayCell]) -> dict:
    """Match percentages per anchor and platform, plus the full cell grid."""
    summary: dict[str, dict[str, dict[str, float]]] = {}
    for cell in cells:
        anchor_key = cell.anchor.isoformat()
        bucket = summary.setdefault(anchor_key, {}).setdefault(
            cell.platform, {"matches": 0, "total": 0}
        )
        bucket["total"] += 1
        bucket["matches"] += int(cell.match)
    for per_platform in summary.values():
        for bucket in per_platform.values():
            bucket["match_pct"] = 100.0 * bucket["matches"] / bucket["total"]
    return {
        "cells": [
            {
                "anchor": c.anchor.isoformat(),
                "target": c.target,
                "platform": c.platform,
                "truth": c.truth_direction,
                "forecast": c.forecast_direction,
                "match": c.match,
            }
            for c in cells
        ],
        "summary": summary,
    }


def write_replay_csv(cells: list[ReplayCell], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["anchor", "target", "platform", "truth", "forecast", "match"])
        for c in cells:
            writer.writerow(
                [c.anchor.isoformat(), c.target, c.platform, c.truth_direction,
                 c.forecast_direction, "yes" if c.match else "no"]
            )
