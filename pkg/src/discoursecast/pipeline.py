"""End-to-end orchestration of the corpus-to-metrics pipeline.

Each stage reads its predecessors' outputs from the movement directory and
writes its own, so stages can run independently (and idempotently: same
inputs and seed give byte-identical outputs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date

from . import storage
from .adapters import FrequencyKeyphraseExtractor, make_embedder, make_emotion_scorer
from .corpus import (
    Corpus,
    Document,
    build_core_vocabulary,
    ingest_documents,
    assign_layers,
    layer_counts,
    parse_timestamp,
    read_layer_assignments,
    write_layer_assignments,
)
from .evaluation import (
    case_study_replay,
    evaluate_forecasts,
    metrics_report_dict,
    replay_match_table,
    write_replay_csv,
    write_trend_tables,
)
from .features.events import read_event_table
from .features.state import (
    build_feature_series,
    read_feature_series,
    read_manifest,
    write_analysis,
    write_feature_series,
    write_manifest,
)
from .forecasting import ModelConfig, make_training_windows
from .storage import MovementPaths


class PipelineError(Exception):
    pass


@dataclass
class MovementConfig:
    id: str
    token: str
    platforms: tuple[str, ...]
    taxonomy: dict[str, list[str]]
    keywords: list[str] = field(default_factory=list)
    layer_thresholds: tuple[float, ...] = (0.30, 0.20, 0.10)
    percentile_cut: float = 99.0

    @classmethod
    def from_dict(cls, payload: dict) -> "MovementConfig":
        return cls(
            id=payload["id"],
            token=payload["token"],
            platforms=tuple(payload["platforms"]),
            taxonomy={k: list(v) for k, v in payload["taxonomy"].items()},
            keywords=list(payload.get("keywords", [])),
            layer_thresholds=tuple(payload.get("layer_thresholds", (0.30, 0.20, 0.10))),
            percentile_cut=float(payload.get("percentile_cut", 99.0)),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "token": self.token,
            "platforms": list(self.platforms),
            "taxonomy": self.taxonomy,
            "keywords": self.keywords,
            "layer_thresholds": list(self.layer_thresholds),
            "percentile_cut": self.percentile_cut,
        }


@dataclass
class PipelineConfig:
    movement: MovementConfig
    model: ModelConfig
    adapters: dict = field(default_factory=dict)
    features: dict = field(default_factory=dict)
    evaluation: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path: str) -> "PipelineConfig":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        return cls.from_dict(payload)

    @classmethod
    def from_dict(cls, payload: dict) -> "PipelineConfig":
        return cls(
            movement=MovementConfig.from_dict(payload["movement"]),
            model=ModelConfig.from_dict(payload.get("model", {"targets": ["pdi"]})),
            adapters=dict(payload.get("adapters", {})),
            features=dict(payload.get("features", {})),
            evaluation=dict(payload.get("evaluation", {})),
        )

    def to_dict(self) -> dict:
        return {
            "movement": self.movement.to_dict(),
            "model": self.model.to_dict(),
            "adapters": self.adapters,
            "features": self.features,
            "evaluation": self.evaluation,
        }

    def emotion_scorer(self):
        return make_emotion_scorer(
            self.adapters.get("emotion", "stub-lexicon"),
            self.adapters.get("emotion_path"),
        )

    def embedder(self):
        return make_embedder(
            self.adapters.get("embedding", "stub-hash"),
            self.adapters.get("embedding_path"),
            dim=int(self.adapters.get("embed_dim", 32)),
            seed=int(self.adapters.get("embed_seed", 0)),
        )

    def extractor(self):
        return FrequencyKeyphraseExtractor(top_k=int(self.adapters.get("keyphrase_top_k", 10)))


def movement_paths(config: PipelineConfig, data_root: str) -> MovementPaths:
    return MovementPaths(data_root, config.movement.id).ensure()


def run_ingest(config: PipelineConfig, data_root: str, corpus_path: str,
               events_path: str | None = None) -> dict:
    paths = movement_paths(config, data_root)
    corpus = ingest_documents(corpus_path)
    _write_corpus(paths, corpus)
    storage.write_json(paths.root / "config.json", config.to_dict())
    if events_path:
        events = read_event_table(events_path)
        from .features.events import write_event_table

        write_event_table(str(paths.events), events)
    return {
        "stage": "ingest",
        "documents": len(corpus),
        "platform_counts": corpus.platform_counts(),
        "errors": [{"line": e.line, "message": e.message} for e in corpus.errors],
        "warnings": corpus.warnings,
        "events": len(read_event_table(str(paths.events))) if paths.events.exists() else 0,
    }


def _write_corpus(paths: MovementPaths, corpus: Corpus) -> None:
    lines = []
    for d in corpus.documents:
        lines.append(
            json.dumps(
                {
                    "id": d.id,
                    "platform": d.platform,
                    "timestamp": d.timestamp.isoformat(),
                    "title": d.title,
                    "body": d.body,
                    "engagement": d.engagement,
                    "keyphrases": d.keyphrases,
                },
                sort_keys=True,
            )
        )
    storage.atomic_write_text(paths.corpus, "\n".join(lines) + ("\n" if lines else ""))


def _read_corpus(paths: MovementPaths) -> Corpus:
    if not paths.corpus.exists():
        raise PipelineError(f"no ingested corpus under {paths.root}; run ingest first")
    documents = []
    with open(paths.corpus, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            documents.append(
                Document(
                    id=rec["id"],
                    platform=rec["platform"],
                    timestamp=parse_timestamp(rec["timestamp"]),
                    title=rec["title"],
                    body=rec["body"],
                    engagement=rec["engagement"],
                    keyphrases=list(rec["keyphrases"]),
                )
            )
    return Corpus(documents=documents)


def run_layer(config: PipelineConfig, data_root: str) -> dict:
    paths = movement_paths(config, data_root)
    corpus = _read_corpus(paths)
    vocab = build_core_vocabulary(corpus, config.movement.token, config.movement.percentile_cut)
    storage.write_json(
        paths.vocabulary,
        [
            {"keyword": s.keyword, "cooccurrence_count": s.cooccurrence_count, "percentile": s.percentile}
            for s in vocab
        ],
    )
    assignments = assign_layers(
        corpus, vocab, config.movement.token, config.movement.layer_thresholds
    )
    write_layer_assignments(str(paths.layers), assignments)
    return {
        "stage": "layer",
        "vocabulary_size": len(vocab),
        "assigned": len(assignments),
        "excluded": len(corpus) - len(assignments),
        "layer_counts": layer_counts(assignments, corpus),
    }


def run_featurize(config: PipelineConfig, data_root: str) -> dict:
    paths = movement_paths(config, data_root)
    corpus = _read_corpus(paths)
    if not paths.layers.exists():
        raise PipelineError("no layer assignments; run layer first")
    assignments = read_layer_assignments(str(paths.layers))
    events = read_event_table(str(paths.events)) if paths.events.exists() else []
    feats = config.features
    bundle = build_feature_series(
        corpus,
        assignments,
        scorer=config.emotion_scorer(),
        embedder=config.embedder(),
        extractor=config.extractor(),
        topic_keyphrases=config.movement.taxonomy,
        events=events,
        platforms=config.movement.platforms,
        extended=bool(feats.get("extended", False)),
        smoothing_window=int(feats.get("smoothing_window", 7)),
        smoothing_decay=float(feats.get("smoothing_decay", 0.8)),
        baseline_window=int(feats.get("baseline_window", 28)),
    )
    write_manifest(str(paths.manifest), bundle.series.manifest)
    write_feature_series(str(paths.features), bundle.series)
    write_analysis(str(paths.analysis), bundle.analysis)
    return {
        "stage": "featurize",
        "days": len(bundle.series.dates),
        "missing_days": int(bundle.series.missing.sum()),
        "features": bundle.series.manifest.size,
        "manifest_hash": bundle.series.manifest.hash(),
    }


def load_series(config: PipelineConfig, data_root: str):
    paths = movement_paths(config, data_root)
    if not paths.manifest.exists() or not paths.features.exists():
        raise PipelineError("no feature store; run featurize first")
    manifest = read_manifest(str(paths.manifest))
    return read_feature_series(str(paths.features), manifest)


def run_train(config: PipelineConfig, data_root: str,
              epochs: int | None = None) -> dict:
    from .forecasting import train

    paths = movement_paths(config, data_root)
    series = load_series(config, data_root)
    model_config = config.model
    if epochs is not None:
        payload = model_config.to_dict()
        payload["epochs"] = epochs
        model_config = ModelConfig.from_dict(payload)
    dataset = make_training_windows(series, model_config)
    forecaster = train(dataset)
    digest = storage.save_checkpoint(paths, forecaster)
    storage.write_json(paths.train_report, forecaster.report.to_dict())
    report = forecaster.report
    return {
        "stage": "train",
        "windows": dataset.n_windows,
        "training_windows": dataset.n_train,
        "epochs_run": len(report.epochs),
        "best_epoch": report.best_epoch,
        "final_train_nll": report.epochs[-1].train_nll,
        "final_validation_nll": report.epochs[-1].validation_nll,
        "model_hash": digest,
        "manifest_hash": forecaster.manifest_hash,
    }


def validation_anchors(config: PipelineConfig, series) -> list[date]:
    """Anchors of the chronological validation split (held-out evaluation span)."""
    dataset = make_training_windows(series, config.model)
    return dataset.anchors[dataset.n_train :]


def run_evaluate(config: PipelineConfig, data_root: str,
                 deltas: list[int] | None = None, span: str = "validation") -> dict:
    paths = movement_paths(config, data_root)
    series = load_series(config, data_root)
    forecaster = storage.load_current_checkpoint(paths)
    if forecaster.manifest_hash != series.manifest.hash():
        raise PipelineError("checkpoint manifest hash does not match the feature store")
    events = read_event_table(str(paths.events)) if paths.events.exists() else []
    window = int(config.evaluation.get("rolling_window", 28))
    anchors = validation_anchors(config, series) if span == "validation" else None
    results = evaluate_forecasts(
        forecaster, series, events, deltas=deltas, window=window, anchors=anchors
    )
    report = metrics_report_dict(results)
    report["manifest_hash"] = forecaster.manifest_hash
    report["model_hash"] = forecaster.model_hash
    storage.write_json(paths.metrics, report)
    summary = {
        "stage": "evaluate",
        "deltas": sorted(results),
        "metrics_path": str(paths.metrics),
    }
    for delta in sorted(results):
        ev = results[delta]
        if ev.per_target:
            summary[f"macro_f1@{delta}"] = ev.average("macro_f1")
    return summary


def run_sweep(config: PipelineConfig, data_root: str, span: str = "validation") -> dict:
    paths = movement_paths(config, data_root)
    series = load_series(config, data_root)
    forecaster = storage.load_current_checkpoint(paths)
    if forecaster.manifest_hash != series.manifest.hash():
        raise PipelineError("checkpoint manifest hash does not match the feature store")
    events = read_event_table(str(paths.events)) if paths.events.exists() else []
    window = int(config.evaluation.get("rolling_window", 28))
    anchors = validation_anchors(config, series) if span == "validation" else None
    results = evaluate_forecasts(
        forecaster, series, events,
        deltas=list(range(1, forecaster.config.horizon + 1)), window=window,
        anchors=anchors,
    )
    report = metrics_report_dict(results)
    report["manifest_hash"] = forecaster.manifest_hash
    report["model_hash"] = forecaster.model_hash
    storage.write_json(paths.metrics, report)
    write_trend_tables(results, str(paths.trends))
    return {
        "stage": "sweep",
        "deltas": sorted(results),
        "trends_path": str(paths.trends),
        "metrics_path": str(paths.metrics),
    }


def run_replay(config: PipelineConfig, data_root: str, anchors: list[date]) -> dict:
    paths = movement_paths(config, data_root)
    series = load_series(config, data_root)
    forecaster = storage.load_current_checkpoint(paths)
    events = read_event_table(str(paths.events)) if paths.events.exists() else []
    window = int(config.evaluation.get("rolling_window", 28))
    cells, skipped = case_study_replay(forecaster, series, events, anchors, window=window)
    table = replay_match_table(cells)
    table["skipped"] = skipped
    storage.write_json(paths.replay_json, table)
    write_replay_csv(cells, str(paths.replay_csv))
    return {
        "stage": "replay",
        "anchors": [a.isoformat() for a in anchors],
        "cells": len(cells),
        "skipped": skipped,
        "summary": table["summary"],
    }
