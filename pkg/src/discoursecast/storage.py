"""On-disk layout and crash-safe persistence for movement data.

Every movement owns one directory under the data root. Event appends go
through write-temp-then-rename so an interrupted append leaves the prior
table intact; checkpoints are content-addressed by their SHA-256 with a
pointer file naming the current one.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .features.events import KeyEvent, event_record, read_event_table


class StorageError(Exception):
    pass


class MovementPaths:
    def __init__(self, data_root: str, movement_id: str):
        self.root = Path(data_root) / movement_id

    def ensure(self) -> "MovementPaths":
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "checkpoints").mkdir(exist_ok=True)
        return self

    @property
    def corpus(self) -> Path:
        return self.root / "corpus.jsonl"

    @property
    def events(self) -> Path:
        return self.root / "events.csv"

    @property
    def vocabulary(self) -> Path:
        return self.root / "vocabulary.json"

    @property
    def layers(self) -> Path:
        return self.root / "layers.jsonl"

    @property
    def manifest(self) -> Path:
        return self.root / "manifest.json"

    @property
    def features(self) -> Path:
        return self.root / "features.jsonl"

    @property
    def analysis(self) -> Path:
        return self.root / "analysis.jsonl"

    @property
    def checkpoint_dir(self) -> Path:
        return self.root / "checkpoints"

    @property
    def checkpoint_pointer(self) -> Path:
        return self.root / "checkpoint.current"

    @property
    def train_report(self) -> Path:
        return self.root / "train_report.json"

    @property
    def metrics(self) -> Path:
        return self.root / "metrics.json"

    @property
    def trends(self) -> Path:
        return self.root / "trends.csv"

    @property
    def replay_csv(self) -> Path:
        return self.root / "replay.csv"

    @property
    def replay_json(self) -> Path:
        return self.root / "replay.json"


def atomic_write_text(path: Path, content: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, payload) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: Path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def append_event(paths: MovementPaths, event: KeyEvent) -> None:
    """Append one event atomically: rewrite the whole table to a temp file
    and rename over the original."""
    existing = read_event_table(str(paths.events)) if paths.events.exists() else []
    existing.append(event)
    import csv
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["date", "category", "impact", "magnitude", "label"])
    writer.writeheader()
    for e in existing:
        writer.writerow(event_record(e))
    atomic_write_text(paths.events, buf.getvalue())


def save_checkpoint(paths: MovementPaths, forecaster) -> str:
    from .forecasting import checkpoint as ckpt

    blob = ckpt.serialize(forecaster)
    digest = ckpt.content_hash(blob)
    target = paths.checkpoint_dir / f"{digest}.ckpt"
    if not target.exists():
        fd, tmp = tempfile.mkstemp(dir=str(paths.checkpoint_dir), prefix=".ckpt.")
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, target)
    atomic_write_text(paths.checkpoint_pointer, digest + "\n")
    forecaster.model_hash = digest
    return digest


def load_current_checkpoint(paths: MovementPaths):
    from .forecasting import checkpoint as ckpt

    if not paths.checkpoint_pointer.exists():
        raise StorageError(f"no trained checkpoint under {paths.root}")
    digest = paths.checkpoint_pointer.read_text().strip()
    target = paths.checkpoint_dir / f"{digest}.ckpt"
    if not target.exists():
        raise StorageError(f"checkpoint {digest} referenced but missing")
    blob = target.read_bytes()
    if ckpt.content_hash(blob) != digest:
        raise StorageError(f"checkpoint {target} fails its content hash; refusing to serve")
    return ckpt.deserialize(blob)
