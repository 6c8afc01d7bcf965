"""HTTP API for series browsing, forecasting, and what-if event injection.

One movement per directory under the data root; the pipeline config stored
there at ingest time makes a movement visible. Responses are pure
functions of (persisted state, request): handlers read no clock and no
randomness, and JSON bodies are serialized with sorted keys so identical
requests against identical state produce byte-identical responses.

Status codes: 404 unknown movement or missing stage output, 409 when the
checkpoint's feature-manifest hash does not match the live store, 422 for
invalid what-if events, 503 when no trained model exists.

Threshold provenance: what-if direction calls classify each forecast step
against the rolling band of the last observed days ending at the anchor
(the future being unknown at serving time), unlike offline backtests which
use the realized trailing window of each predicted day.
"""

from __future__ import annotations

import json
from datetime import date, timedelta
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .evaluation import classify_direction, direction_probabilities, rolling_stats
from .features.events import IMPACT_LEVELS, KeyEvent, event_record, read_event_table
from .forecasting.training import Forecaster
from .pipeline import PipelineConfig
from .storage import MovementPaths, StorageError, append_event, load_current_checkpoint
from .features.state import read_feature_series, read_manifest


class ApiError(Exception):
    def __init__(self, status: int, detail: str):
        super().__init__(detail)
        self.status = status
        self.detail = detail


class WhatIfEvent(BaseModel):
    date: str
    category: str
    impact: int
    magnitude: float = 1.0
    label: str = ""


class WhatIfRequest(BaseModel):
    anchor_date: str
    horizon: int | None = None
    hypothetical_events: list[WhatIfEvent] = Field(default_factory=list)


class MovementStore:
    """Read access to one movement's persisted pipeline outputs."""

    def __init__(self, data_root: str, movement_id: str):
        self.id = movement_id
        self.paths = MovementPaths(data_root, movement_id)
        self._forecasters: dict[str, Forecaster] = {}

    @property
    def config_path(self) -> Path:
        return self.paths.root / "config.json"

    def exists(self) -> bool:
        return self.config_path.exists()

    def config(self) -> PipelineConfig:
        return PipelineConfig.load(str(self.config_path))

    def series(self):
        if not self.paths.manifest.exists() or not self.paths.features.exists():
            raise ApiError(404, f"movement {self.id!r} has no feature store; run featurize")
        manifest = read_manifest(str(self.paths.manifest))
        return read_feature_series(str(self.paths.features), manifest)

    def events(self) -> list[KeyEvent]:
        if not self.paths.events.exists():
            return []
        return read_event_table(str(self.paths.events))

    def forecaster(self) -> Forecaster:
        try:
            pointer = self.paths.checkpoint_pointer
            if not pointer.exists():
                raise ApiError(503, f"movement {self.id!r} has no trained model")
            digest = pointer.read_text().strip()
            if digest not in self._forecasters:
                self._forecasters[digest] = load_current_checkpoint(self.paths)
            return self._forecasters[digest]
        except StorageError as exc:
            raise ApiError(503, str(exc)) from exc


def _json_response(payload, status: int = 200) -> Response:
    return Response(
        content=json.dumps(payload, sort_keys=True) + "\n",
        status_code=status,
        media_type="application/json",
    )


def create_app(data_root: str) -> FastAPI:
    app = FastAPI(title="discoursecast", version="0.1.0")
    root = Path(data_root)

    def store_for(movement_id: str) -> MovementStore:
        store = MovementStore(str(root), movement_id)
        if not store.exists():
            raise ApiError(404, f"unknown movement {movement_id!r}")
        return store

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return JSONResponse({"detail": exc.detail}, status_code=exc.status)

    @app.get("/movements")
    def list_movements():
        movements = []
        if root.exists():
            for entry in sorted(root.iterdir()):
                config_path = entry / "config.json"
                if config_path.exists():
                    with open(config_path, encoding="utf-8") as fh:
                        movements.append(json.load(fh)["movement"])
        return _json_response({"movements": movements})

    @app.get("/movements/{movement_id}/series")
    def get_series(movement_id: str, request: Request):
        store = store_for(movement_id)
        series = store.series()
        params = request.query_params
        try:
            lo = date.fromisoformat(params["from"]) if "from" in params else series.dates[0]
            hi = date.fromisoformat(params["to"]) if "to" in params else series.dates[-1]
        except ValueError as exc:
            raise ApiError(422, f"bad date parameter: {exc}") from exc
        names = series.manifest.names()
        if "fields" in params:
            requested = [f for f in params["fields"].split(",") if f]
            unknown = [f for f in requested if f not in names]
            if unknown:
                raise ApiError(422, f"unknown fields: {unknown}")
            names = requested
        records = []
        for i, day in enumerate(series.dates):
            if day < lo or day > hi:
                continue
            if series.missing[i]:
                records.append({"date": day.isoformat(), "missing": True, "values": None})
            else:
                records.append(
                    {
                        "date": day.isoformat(),
                        "missing": False,
                        "values": {
                            name: float(series.values[i, series.manifest.index_of(name)])
                            for name in names
                        },
                    }
                )
        return _json_response(
            {"manifest_hash": series.manifest.hash(), "records": records}
        )

    @app.get("/movements/{movement_id}/events")
    def get_events(movement_id: str):
        store = store_for(movement_id)
        return _json_response({"events": [event_record(e) for e in store.events()]})

    @app.post("/movements/{movement_id}/events")
    def post_event(movement_id: str, event: WhatIfEvent):
        store = store_for(movement_id)
        key_event = _validate_event(event, store.config())
        append_event(store.paths, key_event)
        return _json_response({"appended": event_record(key_event), "total": len(store.events())})

    @app.post("/movements/{movement_id}/forecast")
    def post_forecast(movement_id: str, body: WhatIfRequest):
        store = store_for(movement_id)
        return _json_response(run_whatif(store, body))

    @app.get("/movements/{movement_id}/evaluation")
    def get_evaluation(movement_id: str, request: Request):
        store = store_for(movement_id)
        if not store.paths.metrics.exists():
            raise ApiError(503, f"movement {movement_id!r} has no evaluation report; run evaluate")
        with open(store.paths.metrics, encoding="utf-8") as fh:
            report = json.load(fh)
        delta = request.query_params.get("delta")
        if delta is not None:
            if delta not in report["deltas"]:
                raise ApiError(404, f"no evaluation at delta={delta}")
            report = {
                "deltas": {delta: report["deltas"][delta]},
                "manifest_hash": report.get("manifest_hash"),
                "model_hash": report.get("model_hash"),
            }
        return _json_response(report)

    return app


def _validate_event(event: WhatIfEvent, config: PipelineConfig,
                    anchor: date | None = None, horizon: int | None = None) -> KeyEvent:
    if event.category not in config.movement.taxonomy:
        raise ApiError(422, f"unknown event category {event.category!r}")
    if event.impact not in IMPACT_LEVELS:
        raise ApiError(422, f"impact must be one of {IMPACT_LEVELS}, got {event.impact}")
    if event.magnitude <= 0:
        raise ApiError(422, f"magnitude must be positive, got {event.magnitude}")
    try:
        when = date.fromisoformat(event.date)
    except ValueError as exc:
        raise ApiError(422, f"bad event date {event.date!r}: {exc}") from exc
    if anchor is not None:
        if when <= anchor:
            raise ApiError(422, f"hypothetical event {event.date} must be dated after the anchor {anchor}")
        if horizon is not None and when > anchor + timedelta(days=horizon):
            raise ApiError(422, f"hypothetical event {event.date} is beyond the forecast horizon")
    return KeyEvent(event.category, when, event.impact, event.magnitude, event.label)


def run_whatif(store: MovementStore, body: WhatIfRequest) -> dict:
    """Forecast from an anchor with stored plus hypothetical events."""
    config = store.config()
    series = store.series()
    forecaster = store.forecaster()
    if forecaster.manifest_hash != series.manifest.hash():
        raise ApiError(409, "checkpoint manifest hash does not match the feature store")
    try:
        anchor = date.fromisoformat(body.anchor_date)
    except ValueError as exc:
        raise ApiError(422, f"bad anchor date {body.anchor_date!r}: {exc}") from exc
    horizon = body.horizon or forecaster.config.horizon
    if not (1 <= horizon <= forecaster.config.horizon):
        raise ApiError(422, f"horizon must be in [1, {forecaster.config.horizon}]")
    hypothetical = [
        _validate_event(e, config, anchor, forecaster.config.horizon)
        for e in body.hypothetical_events
    ]
    events = store.events() + hypothetical

    from .forecasting.windows import WindowError

    try:
        result = forecaster.predict(series, anchor, events)
    except (WindowError, KeyError) as exc:
        raise ApiError(422, f"cannot forecast from anchor {anchor}: {exc}") from exc

    window = int(config.evaluation.get("rolling_window", 28))
    targets_payload = {}
    for name, tf in result.targets.items():
        column = series.column(name)
        t_anchor = series.index_of_date(anchor)
        stats = rolling_stats(column, t_anchor + 1, window)
        steps = []
        for step in range(horizon):
            params = tf.params[step]
            entry = {
                "step": step + 1,
                "date": (anchor + timedelta(days=step + 1)).isoformat(),
                "loc": params.loc,
                "scale": params.scale,
                "df": params.df,
                "quantiles": {q: tf.quantiles[q][step] for q in tf.quantiles},
            }
            if stats is not None:
                mu, sigma = stats
                scores = direction_probabilities(params, mu, sigma)
                entry["class_scores"] = {
                    "p_increase": scores.p_increase,
                    "p_stable": scores.p_stable,
                    "p_decrease": scores.p_decrease,
                    "degenerate_band": scores.degenerate_band,
                }
                # primary label: argmax of the band-exceedance probabilities;
                # the band check of the forecast median ships alongside it
                entry["direction"] = scores.argmax_label()
                entry["direction_by_median"] = classify_direction(params.loc, mu, sigma)
            else:
                entry["direction"] = "Unscored"
                entry["direction_by_median"] = "Unscored"
            steps.append(entry)
        targets_payload[name] = {
            "steps": steps,
            "band": None if stats is None else {"mu": stats[0], "sigma": stats[1]},
        }
    return {
        "anchor_date": anchor.isoformat(),
        "horizon": horizon,
        "manifest_hash": result.manifest_hash,
        "model_hash": result.model_hash,
        "targets": targets_payload,
        "hypothetical_events": [event_record(e) for e in hypothetical],
    }
