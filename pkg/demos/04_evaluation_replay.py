"""Score directional forecasts against rolling-band ground truth.

Runs the evaluation on a held-out span, comparing the model's three-class
direction calls (Increase / Stable / Decrease, rolling mean +/- 2 sigma
over 28 days) against the persistence baseline, then replays the forecast
anchored the day before a known event, Table-style.

Run: python3 demos/04_evaluation_replay.py   (a few minutes on CPU)
"""

import json
import tempfile
from datetime import date, timedelta
from pathlib import Path

from discoursecast.pipeline import (
    PipelineConfig,
    run_evaluate,
    run_featurize,
    run_ingest,
    run_layer,
    run_replay,
    run_train,
)
from discoursecast.synth import SynthSpec, generate

workdir = Path(tempfile.mkdtemp(prefix="dcast_demo_"))
data = workdir / "data"
generate(workdir, SynthSpec(days=160, seed=17))
config = PipelineConfig.load(str(workdir / "config.json"))

run_ingest(config, str(data), str(workdir / "corpus.jsonl"), str(workdir / "events.csv"))
run_layer(config, str(data))
run_featurize(config, str(data))
run_train(config, str(data))
run_evaluate(config, str(data), deltas=[1])

metrics = json.loads((data / config.movement.id / "metrics.json").read_text())
slice_1 = metrics["deltas"]["1"]
print("held-out direction metrics at delta=1 (model vs persistence):")
print(f"{'target':30s} {'model F1':>9s} {'pers F1':>9s} {'acc':>6s} {'AUC':>6s}")
for name in sorted(slice_1["per_target"]):
    m = slice_1["per_target"][name]
    p = slice_1["persistence"][name]
    auc = m["auc"]
    print(f"{name:30s} {m['macro_f1']:9.3f} {p['macro_f1']:9.3f} "
          f"{m['accuracy']:6.3f} {auc if auc is None else round(auc, 3)!s:>6s}")
print(f"\naverage macro F1: {slice_1['average']['macro_f1']:.3f}")

truth = json.loads((workdir / "truth.json").read_text())
anchors = [date.fromisoformat(d) - timedelta(days=1) for d in truth["surge_days"][-2:]]
summary = run_replay(config, str(data), anchors)
print(f"\nreplay anchored the day before the last two surges: {summary['summary']}")
