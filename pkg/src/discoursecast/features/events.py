"""Key-event indicators and calendar encodings.

Events carry a category from the topic taxonomy, a UTC date, an impact in
{-1, 0, 1, 2} (not related / neutral / supports / opposes the movement),
and a positive magnitude. The magnitude is stored for provenance but the
default encoder uses only category-impact indicators: a day's encoding is
a categories x 5 binary matrix with one column per impact level plus a
"Not Available" column that is 1 exactly when the category saw no event.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import date

import numpy as np

IMPACT_LEVELS = (-1, 0, 1, 2)
IMPACT_MEANINGS = {
    -1: "not related",
    0: "neutral",
    1: "supports",
    2: "opposes",
}
N_IMPACT_COLUMNS = len(IMPACT_LEVELS) + 1  # +1 for "Not Available"


class EventError(Exception):
    pass


@dataclass(frozen=True)
class KeyEvent:
    category: str
    time: date
    impact: int
    magnitude: float = 1.0
    label: str = ""

    def __post_init__(self):
        if self.impact not in IMPACT_LEVELS:
            raise EventError(f"impact {self.impact} not in {IMPACT_LEVELS}")
        if not (self.magnitude > 0):
            raise EventError(f"magnitude must be positive, got {self.magnitude}")


def encode_events(events: list[KeyEvent], day: date, categories: tuple[str, ...]) -> np.ndarray:
    """Binary indicator matrix (len(categories) x 5) for one day.

    Column c for impact level IMPACT_LEVELS[c] is 1 when at least one event
    of that category and impact occurs on ``day``; the last column flags
    categories with no event at all.
    """
    index = {c: i for i, c in enumerate(categories)}
    grid = np.zeros((len(categories), N_IMPACT_COLUMNS))
    for event in events:
        if event.category not in index:
            raise EventError(f"unknown event category {event.category!r}")
        if event.time != day:
            continue
        grid[index[event.category], IMPACT_LEVELS.index(event.impact)] = 1.0
    no_event = grid[:, : len(IMPACT_LEVELS)].sum(axis=1) == 0
    grid[:, -1] = no_event.astype(float)
    return grid


def calendar_features(day: date) -> dict[str, float]:
    """Day-of-week (Monday=0) and month with sin/cos pairs for the model."""
    dow = day.weekday()
    month = day.month
    return {
        "day_of_week": float(dow),
        "month": float(month),
        "dow_sin": math.sin(2.0 * math.pi * dow / 7.0),
        "dow_cos": math.cos(2.0 * math.pi * dow / 7.0),
        "month_sin": math.sin(2.0 * math.pi * (month - 1) / 12.0),
        "month_cos": math.cos(2.0 * math.pi * (month - 1) / 12.0),
    }


CALENDAR_FEATURE_NAMES = ("dow_sin", "dow_cos", "month_sin", "month_cos")


def calendar_vector(day: date) -> np.ndarray:
    feats = calendar_features(day)
    return np.array([feats[name] for name in CALENDAR_FEATURE_NAMES])


def read_event_table(path: str) -> list[KeyEvent]:
    """Load events from CSV or JSON-lines, by file extension."""
    events: list[KeyEvent] = []
    if path.endswith(".csv"):
        with open(path, encoding="utf-8", newline="") as fh:
            for row in csv.DictReader(fh):
                events.append(_event_from_record(row))
    else:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    events.append(_event_from_record(json.loads(line)))
    return events


def _event_from_record(record: dict) -> KeyEvent:
    return KeyEvent(
        category=str(record["category"]),
        time=date.fromisoformat(str(record["date"])),
        impact=int(record["impact"]),
        magnitude=float(record.get("magnitude", 1.0) or 1.0),
        label=str(record.get("label", "") or ""),
    )


def event_record(event: KeyEvent) -> dict:
    return {
        "date": event.time.isoformat(),
        "category": event.category,
        "impact": event.impact,
        "magnitude": event.magnitude,
        "label": event.label,
    }


def write_event_table(path: str, events: list[KeyEvent]) -> None:
    if path.endswith(".csv"):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["date", "category", "impact", "magnitude", "label"])
            writer.writeheader()
            for event in events:
                writer.writerow(event_record(event))
    else:
        with open(path, "w", encoding="utf-8") as fh:
            for event in events:
                fh.write(json.dumps(event_record(event), sort_keys=True) + "\n")
