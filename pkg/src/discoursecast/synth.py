"""Seeded synthetic corpus generator with known ground-truth dynamics.

The generated world follows a fictional movement ("#EqualVoice") across a
news and a reddit platform. Document volume has weekly seasonality and
Poisson noise; scheduled key events inject three regimes with known
directional consequences the day they occur:

  * surge_opposing  - volume spikes on both platforms; anger, fear,
                      disapproval and sadness intensities jump
  * surge_supporting- volume spikes; joy, optimism, gratitude and
                      excitement intensities jump
  * lull            - volume collapses and the active emotions go quiet

Emotion intensities are realized through the lexicon scorer: bodies carry
a controlled density of per-emotion lexicon tokens, so the whole pipeline
(ingest, layering, scoring, features) reproduces the planned dynamics
without any mocked stage. Layer composition is controlled by salting
bodies with a known count of core-vocabulary words. Every draw flows
through one seeded generator, so identical (days, seed) arguments give
byte-identical output files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .features.events import KeyEvent, write_event_table

MOVEMENT_TOKEN = "#EqualVoice"
MOVEMENT_ID = "equalvoice"

CORE_KEYWORDS = (
    "equalpay", "walkout", "solidarity", "empowerment", "reform", "justice",
    "petition", "advocacy", "workplace", "rally", "equity", "voices",
)

FILLER_WORDS = (
    "council", "city", "program", "member", "group", "public", "local",
    "national", "community", "office", "street", "network", "project",
    "forum", "panel", "session", "agenda", "budget", "policy", "detail",
)

TOPIC_KEYPHRASES = {
    "Gender Equality": ["gender equality", "equal representation", "women in leadership", "pay parity"],
    "Human Rights": ["human rights", "civil liberties", "freedom of assembly", "legal aid"],
    "Violence": ["domestic violence", "assault case", "harassment report", "safety measures"],
    "Health & Reproductive Rights": ["reproductive health", "maternal care", "health access", "clinic funding"],
    "Political Change": ["election reform", "policy vote", "parliament session", "local elections"],
    "Natural Disaster": ["flood response", "earthquake relief", "storm damage", "evacuation plan"],
    "Climate & Environment": ["climate policy", "emission targets", "renewable energy", "conservation effort"],
    "Migration & Displacement": ["refugee support", "border policy", "asylum claims", "resettlement program"],
    "Technology & AI": ["algorithmic bias", "platform moderation", "data privacy", "automation impact"],
}

NEG_SURGE_EMOTIONS = ("anger", "fear")
POS_SURGE_EMOTIONS = ("joy", "optimism")

# Lexicon tokens re-declared here (kept in sync with the shipped lexicon
# file by a test) so body assembly does not need to parse the lexicon.
EMOTION_TOKEN = {
    "curiosity": "curious",
    "approval": "agree",
    "sadness": "sad",
    "anger": "angry",
    "fear": "afraid",
    "disapproval": "disagree",
    "joy": "happy",
    "optimism": "hopeful",
    "gratitude": "grateful",
    "excitement": "excited",
}

EVENT_CYCLE = (
    ("surge_opposing", "Violence", 2),
    ("surge_supporting", "Gender Equality", 1),
    ("lull", "Political Change", 0),
)

DEFAULT_TARGETS = (
    "volume_raw[news]",
    "volume_raw[reddit]",
    "emotion_mean[anger]",
    "emotion_mean[fear]",
    "emotion_mean[disapproval]",
    "emotion_mean[joy]",
    "emotion_mean[optimism]",
    "emotion_mean[gratitude]",
    "emotion_mean[excitement]",
    "emotion_mean[sadness]",
    "emotion_mean[curiosity]",
    "emotion_mean[approval]",
)


@dataclass
class SynthSpec:
    days: int = 120
    seed: int = 7
    start: date = date(2024, 9, 1)
    first_event_day: int = 32
    event_period: int = 12
    reddit_base_docs: float = 22.0
    news_base_docs: float = 9.0
    surge_volume_multiplier: float = 4.0
    lull_volume_multiplier: float = 0.15
    body_tokens: int = 40


def generate(out_dir: str, spec: SynthSpec | None = None) -> dict:
    """Write corpus.jsonl, events.csv, truth.json, config.json; return a summary."""
    spec = spec or SynthSpec()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(spec.seed)

    events, regimes = _schedule_events(spec)
    doc_count = 0
    with open(out / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for day_index in range(spec.days):
            day = spec.start + timedelta(days=day_index)
            regime = regimes.get(day_index, "baseline")
            for platform, base in (("news", spec.news_base_docs), ("reddit", spec.reddit_base_docs)):
                for record in _day_documents(rng, spec, day, platform, base, regime, doc_count):
                    fh.write(json.dumps(record, sort_keys=True) + "\n")
                    doc_count += 1

    write_event_table(str(out / "events.csv"), events)

    truth = {
        "movement_token": MOVEMENT_TOKEN,
        "events": [
            {
                "date": (spec.start + timedelta(days=d)).isoformat(),
                "kind": kind,
            }
            for d, kind in sorted(regimes.items())
        ],
        "surge_days": [
            (spec.start + timedelta(days=d)).isoformat()
            for d, kind in sorted(regimes.items())
            if kind.startswith("surge")
        ],
        "lull_days": [
            (spec.start + timedelta(days=d)).isoformat()
            for d, kind in sorted(regimes.items())
            if kind == "lull"
        ],
        "volume_targets": ["volume_raw[news]", "volume_raw[reddit]"],
        "neg_surge_targets": [f"emotion_mean[{e}]" for e in NEG_SURGE_EMOTIONS],
        "pos_surge_targets": [f"emotion_mean[{e}]" for e in POS_SURGE_EMOTIONS],
    }
    _write_json(out / "truth.json", truth)

    config = default_pipeline_config(seed=spec.seed)
    _write_json(out / "config.json", config)

    summary = {
        "days": spec.days,
        "seed": spec.seed,
        "documents": doc_count,
        "events": len(events),
        "out_dir": str(out),
    }
    return summary


def default_pipeline_config(seed: int = 7) -> dict:
    return {
        "movement": {
            "id": MOVEMENT_ID,
            "token": MOVEMENT_TOKEN,
            "keywords": list(CORE_KEYWORDS),
            "platforms": ["news", "reddit"],
            "layer_thresholds": [0.30, 0.20, 0.10],
            "percentile_cut": 1.0,
            "taxonomy": {k: list(v) for k, v in TOPIC_KEYPHRASES.items()},
        },
        "adapters": {
            "emotion": "stub-lexicon",
            "embedding": "stub-hash",
            "embed_dim": 32,
            "keyphrase_top_k": 10,
        },
        "features": {
            "extended": False,
            "smoothing_window": 7,
            "smoothing_decay": 0.8,
            "baseline_window": 28,
        },
        "model": {
            "context_len": 28,
            "horizon": 7,
            "lags": [1, 2, 3],
            "d_model": 64,
            "encoder_layers": 2,
            "decoder_layers": 2,
            "heads": 4,
            "ff_dim": 128,
            "dropout": 0.3,
            "batch_size": 2,
            "learning_rate": 3e-4,
            "weight_decay": 1e-5,
            "epochs": 60,
            "patience": 20,
            "seed": seed,
            "selected_feature_count": 64,
            "targets": list(DEFAULT_TARGETS),
        },
        "evaluation": {
            "rolling_window": 28,
        },
    }


def _schedule_events(spec: SynthSpec) -> tuple[list[KeyEvent], dict[int, str]]:
    # Jittered spacing: a fixed period would let a 28-day context predict
    # events from their rhythm alone, bypassing the indicator covariates.
    rng = np.random.default_rng(spec.seed + 104729)
    events: list[KeyEvent] = []
    regimes: dict[int, str] = {}
    cycle = 0
    day_index = spec.first_event_day
    while day_index < spec.days:
        kind, category, impact = EVENT_CYCLE[cycle % len(EVENT_CYCLE)]
        day = spec.start + timedelta(days=day_index)
        events.append(
            KeyEvent(
                category=category,
                time=day,
                impact=impact,
                magnitude=1.0 + (cycle % 3),
                label=f"{kind} #{cycle + 1}",
            )
        )
        regimes[day_index] = kind
        cycle += 1
        day_index += spec.event_period + int(rng.integers(-3, 4))
    # A few unrelated events (impact -1) that must not move anything.
    for offset in range(spec.first_event_day + 5, spec.days, 3 * spec.event_period):
        day = spec.start + timedelta(days=offset)
        events.append(
            KeyEvent(
                category="Technology & AI",
                time=day,
                impact=-1,
                magnitude=1.0,
                label="unrelated tech story",
            )
        )
    events.sort(key=lambda e: (e.time, e.category, e.impact))
    return events, regimes


def _day_documents(rng, spec: SynthSpec, day: date, platform: str, base: float,
                   regime: str, id_offset: int):
    season = 1.0 + 0.15 * np.sin(2.0 * np.pi * day.weekday() / 7.0)
    mult = 1.0
    if regime.startswith("surge"):
        mult = spec.surge_volume_multiplier
    elif regime == "lull":
        mult = spec.lull_volume_multiplier
    n_docs = max(1, int(rng.poisson(base * season * mult)))

    topics = list(TOPIC_KEYPHRASES)
    records = []
    for j in range(n_docs):
        doc_id = f"{platform}-{day.isoformat()}-{id_offset + j}"
        is_l0 = rng.random() < 0.12
        body_tokens: list[str] = []

        if not is_l0:
            salt_count = int(rng.choice([5, 3, 2, 1], p=[0.35, 0.25, 0.25, 0.15]))
            salt = rng.choice(len(CORE_KEYWORDS), size=salt_count, replace=False)
            body_tokens.extend(CORE_KEYWORDS[i] for i in sorted(salt))

        # Densities are fractions of the full text (body plus ~3 title tokens).
        total_tokens = spec.body_tokens + 3
        for emotion, density in _doc_emotion_mix(rng, regime):
            count = int(round(max(0.0, density) * total_tokens))
            body_tokens.extend([EMOTION_TOKEN[emotion]] * count)

        while len(body_tokens) < spec.body_tokens:
            body_tokens.append(FILLER_WORDS[int(rng.integers(len(FILLER_WORDS)))])
        body_tokens = body_tokens[: spec.body_tokens]
        rng.shuffle(body_tokens)

        if is_l0:
            keyphrases = sorted(
                CORE_KEYWORDS[i]
                for i in rng.choice(len(CORE_KEYWORDS), size=int(rng.integers(3, 6)), replace=False)
            )
            title = f"{MOVEMENT_TOKEN} movement notes {id_offset + j}"
        else:
            topic = topics[int(rng.integers(len(topics)))]
            pool = TOPIC_KEYPHRASES[topic]
            size = int(rng.integers(2, 4))
            keyphrases = sorted(
                pool[i] for i in rng.choice(len(pool), size=min(size, len(pool)), replace=False)
            )
            title = f"{platform} notes {id_offset + j}"

        hour = int(rng.integers(8, 21))
        ts = datetime(day.year, day.month, day.day, hour, tzinfo=timezone.utc)
        engagement = 1.0
        if platform == "reddit":
            engagement = round(float(rng.lognormal(1.0, 0.6)), 2)
            if regime.startswith("surge"):
                engagement = round(engagement * 2.0, 2)
        records.append(
            {
                "id": doc_id,
                "platform": platform,
                "timestamp": ts.isoformat(),
                "title": title,
                "body": " ".join(body_tokens),
                "engagement": engagement,
                "keyphrases": keyphrases,
            }
        )
    return records


# Per-document sampling weights for the target emotions. Every target
# emotion occurs off-event, so no rolling band ever degenerates to
# sigma = 0; the heavy trio sits high enough that a lull drops it more
# than two sigmas below its rolling mean.
EMOTION_PICK_WEIGHTS = {
    "curiosity": 1.0,
    "approval": 0.95,
    "sadness": 0.9,
    "anger": 0.3,
    "fear": 0.3,
    "disapproval": 0.3,
    "joy": 0.3,
    "optimism": 0.3,
    "gratitude": 0.3,
    "excitement": 0.3,
}

HEAVY_EMOTIONS = ("curiosity", "approval", "sadness")


def _doc_emotion_mix(rng, regime: str) -> list[tuple[str, float]]:
    """Per-document (emotion, token density) draws.

    Baseline documents carry three weighted-sampled emotions at light
    density (scores straddle the first bin edge, which keeps day-level
    means noisy but bounded). Surge documents swap one slot for the
    regime's surge emotion at a density that lands in the Moderate bin.
    Lull documents keep their picks but at near-zero density.
    """
    emotions = list(EMOTION_PICK_WEIGHTS)
    weights = np.array([EMOTION_PICK_WEIGHTS[e] for e in emotions])
    picks = rng.choice(len(emotions), size=3, replace=False, p=weights / weights.sum())
    mix = []
    scale = 0.08 if regime == "lull" else 1.0
    for i in sorted(picks):
        lo, hi = (0.18, 0.34) if emotions[i] in HEAVY_EMOTIONS else (0.12, 0.30)
        mix.append((emotions[i], float(rng.uniform(lo, hi)) * scale))
    if regime == "surge_opposing" or regime == "surge_supporting":
        pool = NEG_SURGE_EMOTIONS if regime == "surge_opposing" else POS_SURGE_EMOTIONS
        surge_emotion = pool[int(rng.integers(len(pool)))]
        mix = [(e, d * 0.6) for e, d in mix[:2] if e != surge_emotion]
        mix.append((surge_emotion, float(rng.normal(0.47, 0.03))))
    return mix


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
