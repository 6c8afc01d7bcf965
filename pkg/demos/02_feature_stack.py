"""Compute the daily feature stack and inspect volume, emotion, and theme blocks.

Builds the full discourse-state series for a synthetic corpus, then prints
the feature manifest structure and a few days of selected columns around
the first injected event, where the volume spike and emotion surge are
visible in the raw numbers.

Run: python3 demos/02_feature_stack.py
"""

import json
import tempfile
from pathlib import Path

from discoursecast.pipeline import PipelineConfig, load_series, run_featurize, run_ingest, run_layer
from discoursecast.synth import SynthSpec, generate

workdir = Path(tempfile.mkdtemp(prefix="dcast_demo_"))
data = workdir / "data"
generate(workdir, SynthSpec(days=45, seed=5))
config = PipelineConfig.load(str(workdir / "config.json"))

run_ingest(config, str(data), str(workdir / "corpus.jsonl"), str(workdir / "events.csv"))
run_layer(config, str(data))
summary = run_featurize(config, str(data))
print(f"feature store: {summary['days']} days x {summary['features']} features")
print(f"manifest hash: {summary['manifest_hash'][:16]}...")

series = load_series(config, str(data))
blocks = {}
for entry in series.manifest.entries:
    blocks[entry.block] = blocks.get(entry.block, 0) + 1
print(f"blocks: {blocks}")

truth = json.loads((workdir / "truth.json").read_text())
event_day = truth["surge_days"][0]
print(f"\nfirst surge event: {event_day}")
columns = ["volume_raw[reddit]", "volume_smoothed[reddit]", "volume_velocity[reddit]",
           "pdi", "emotion_mean[anger]", "emotion_mean[curiosity]", "event[Violence][+2]"]
header = "date        " + " ".join(f"{c.split('[')[0][:10]:>11s}" for c in columns)
print(header)
event_index = [d.isoformat() for d in series.dates].index(event_day)
for i in range(event_index - 3, event_index + 3):
    row = " ".join(f"{series.values[i, series.manifest.index_of(c)]:11.3f}" for c in columns)
    marker = "  <- event" if i == event_index else ""
    print(f"{series.dates[i]} {row}{marker}")
