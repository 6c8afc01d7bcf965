"""Command-line entry point for the full pipeline.

Commands: synth, ingest, layer, featurize, train, evaluate, sweep, replay,
serve. Every command validates its inputs, prints a machine-readable JSON
summary on success, and exits non-zero on failure with a distinct code:

    0  success
    2  usage error (unknown flag or command; argparse default)
    3  missing input file or directory
    4  malformed input or invalid configuration
    5  manifest or checkpoint mismatch
    6  insufficient data (span, history, or window count)
    7  internal error

One config file (movement + adapters + features + model + evaluation)
drives every stage; flags override config values. Identical inputs and
seed give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date

EXIT_OK = 0
EXIT_MISSING_INPUT = 3
EXIT_INVALID = 4
EXIT_MISMATCH = 5
EXIT_INSUFFICIENT = 6
EXIT_INTERNAL = 7


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discoursecast",
        description="Discourse-state features and probabilistic direction forecasts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    synth.add_argument("--out", required=True, help="output directory")
    synth.add_argument("--days", type=int, default=120)
    synth.add_argument("--seed", type=int, default=7)
    synth.add_argument("--event-period", type=int, default=12)
    synth.add_argument("--first-event-day", type=int, default=32)

    def stage(name, help_text, **extra):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="pipeline config JSON")
        p.add_argument("--data-dir", required=True, help="data root directory")
        return p

    ingest = stage("ingest", "load a document corpus into the data directory")
    ingest.add_argument("--input", required=True, help="corpus JSON-lines file")
    ingest.add_argument("--events", help="key-event table (CSV or JSON-lines)")

    stage("layer", "build the co-occurrence vocabulary and assign layers")
    stage("featurize", "compute the daily discourse-state feature store")

    train = stage("train", "train the forecaster on the feature store")
    train.add_argument("--epochs", type=int, help="override config epochs")
    train.add_argument("--seed", type=int, help="override config seed")
    train.add_argument("--horizon", type=int, help="override forecast horizon (days)")

    evaluate = stage("evaluate", "score direction forecasts against ground truth")
    evaluate.add_argument("--delta", type=int, help="single horizon step (default: all)")
    evaluate.add_argument("--span", choices=("validation", "all"), default="validation")
    evaluate.add_argument("--window", type=int, help="override rolling-band window (days)")

    sweep = stage("sweep", "evaluate every horizon step and write trend tables")
    sweep.add_argument("--span", choices=("validation", "all"), default="validation")
    sweep.add_argument("--window", type=int, help="override rolling-band window (days)")

    replay = stage("replay", "replay forecasts anchored at key dates")
    replay.add_argument("--anchors", required=True,
                        help="comma-separated ISO dates, e.g. 2024-09-17,2025-05-13")
    replay.add_argument("--window", type=int, help="override rolling-band window (days)")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--config", required=True, help="pipeline config JSON")
    serve.add_argument("--data-dir", help="data root (or DISCOURSECAST_DATA_DIR)")
    serve.add_argument("--port", type=int, help="port (or DISCOURSECAST_PORT; default 8500)")
    serve.add_argument("--host", default="127.0.0.1")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        summary = _dispatch(args)
    except FileNotFoundError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_MISSING_INPUT
    except _known_invalid() as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return _classify_error(exc)
    except Exception as exc:  # pragma: no cover - safety net
        print(json.dumps({"error": f"internal: {exc}"}), file=sys.stderr)
        return EXIT_INTERNAL
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _known_invalid():
    from .adapters import AdapterError
    from .corpus import CorpusError
    from .evaluation import EvaluationError
    from .features.events import EventError
    from .features.state import StateError
    from .forecasting.windows import WindowError
    from .pipeline import PipelineError
    from .storage import StorageError

    return (
        AdapterError,
        CorpusError,
        EvaluationError,
        EventError,
        StateError,
        WindowError,
        PipelineError,
        StorageError,
        ValueError,
        KeyError,
        json.JSONDecodeError,
    )


def _classify_error(exc: Exception) -> int:
    from .forecasting.windows import WindowError
    from .pipeline import PipelineError
    from .storage import StorageError

    message = str(exc)
    if isinstance(exc, WindowError):
        return EXIT_INSUFFICIENT
    if isinstance(exc, (PipelineError, StorageError)) and ("hash" in message or "mismatch" in message):
        return EXIT_MISMATCH
    return EXIT_INVALID


def _load_config(path: str):
    from .pipeline import PipelineConfig

    return PipelineConfig.load(path)


def _apply_window(config, window: int | None):
    if window is not None:
        if window < 1:
            raise ValueError(f"--window must be >= 1, got {window}")
        config.evaluation["rolling_window"] = window
    return config


def _dispatch(args) -> dict:
    if args.command == "synth":
        from .synth import SynthSpec, generate

        return generate(
            args.out,
            SynthSpec(
                days=args.days,
                seed=args.seed,
                event_period=args.event_period,
                first_event_day=args.first_event_day,
            ),
        )

    if args.command == "ingest":
        from .pipeline import run_ingest

        return run_ingest(_load_config(args.config), args.data_dir, args.input, args.events)

    if args.command == "layer":
        from .pipeline import run_layer

        return run_layer(_load_config(args.config), args.data_dir)

    if args.command == "featurize":
        from .pipeline import run_featurize

        return run_featurize(_load_config(args.config), args.data_dir)

    if args.command == "train":
        from .pipeline import run_train

        config = _load_config(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.horizon is not None:
            overrides["horizon"] = args.horizon
        if overrides:
            from .forecasting import ModelConfig

            payload = config.model.to_dict()
            payload.update(overrides)
            config.model = ModelConfig.from_dict(payload)
        return run_train(config, args.data_dir, epochs=args.epochs)

    if args.command == "evaluate":
        from .pipeline import run_evaluate

        config = _apply_window(_load_config(args.config), args.window)
        deltas = [args.delta] if args.delta else None
        return run_evaluate(config, args.data_dir, deltas=deltas, span=args.span)

    if args.command == "sweep":
        from .pipeline import run_sweep

        config = _apply_window(_load_config(args.config), args.window)
        return run_sweep(config, args.data_dir, span=args.span)

    if args.command == "replay":
        from .pipeline import run_replay

        config = _apply_window(_load_config(args.config), args.window)
        anchors = [date.fromisoformat(a) for a in args.anchors.split(",") if a]
        return run_replay(config, args.data_dir, anchors)

    if args.command == "serve":
        import os

        import uvicorn

        from .service import create_app

        data_dir = args.data_dir or os.environ.get("DISCOURSECAST_DATA_DIR")
        if not data_dir:
            raise ValueError("serve needs --data-dir or DISCOURSECAST_DATA_DIR")
        port = args.port or int(os.environ.get("DISCOURSECAST_PORT", "8500"))
        _load_config(args.config)  # validate before binding the port
        app = create_app(data_dir)
        uvicorn.run(app, host=args.host, port=port, log_level="warning")
        return {"stage": "serve", "stopped": True}

    raise ValueError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
