"""Train the transformer and read a probabilistic what-if forecast.

Trains on a 240-day synthetic corpus with recurring key events, then
forecasts the week after an anchor twice: once with the stored event
table and once with an extra hypothetical opposing event injected the
next day. The Student-t parameters, quantile bands, and band-exceedance
probabilities show how the what-if shifts the forecast.

Run: python3 demos/03_forecasting.py   (a few minutes on CPU)
"""

import tempfile
from datetime import date, timedelta
from pathlib import Path

from discoursecast.evaluation import direction_probabilities, rolling_stats
from discoursecast.features.events import KeyEvent, read_event_table
from discoursecast.pipeline import (
    PipelineConfig,
    load_series,
    run_featurize,
    run_ingest,
    run_layer,
    run_train,
)
from discoursecast.storage import MovementPaths, load_current_checkpoint
from discoursecast.synth import SynthSpec, generate

workdir = Path(tempfile.mkdtemp(prefix="dcast_demo_"))
data = workdir / "data"
generate(workdir, SynthSpec(days=240, seed=11))
config = PipelineConfig.load(str(workdir / "config.json"))

run_ingest(config, str(data), str(workdir / "corpus.jsonl"), str(workdir / "events.csv"))
run_layer(config, str(data))
run_featurize(config, str(data))
summary = run_train(config, str(data))
print(f"trained {summary['epochs_run']} epochs, "
      f"final train NLL {summary['final_train_nll']:.3f}, "
      f"validation NLL {summary['final_validation_nll']:.3f}")

series = load_series(config, str(data))
paths = MovementPaths(str(data), config.movement.id)
forecaster = load_current_checkpoint(paths)
events = read_event_table(str(paths.events))

# a quiet anchor: no stored event inside the following week
anchor = date(2025, 3, 20)
baseline = forecaster.predict(series, anchor, events)
whatif_event = KeyEvent("Violence", anchor + timedelta(days=1), impact=2, label="hypothetical")
whatif = forecaster.predict(series, anchor, events + [whatif_event])

for target in ("volume_raw[reddit]", "emotion_mean[anger]"):
    column = series.column(target)
    band = rolling_stats(column, series.index_of_date(anchor) + 1)
    print(f"\n{target}, anchored {anchor}; rolling band mu={band[0]:.3f} sigma={band[1]:.3f}")
    print("step   baseline loc [5%, 95%]  p(Inc)       what-if loc [5%, 95%]  p(Inc)")
    base_t, what_t = baseline.targets[target], whatif.targets[target]
    for step in range(forecaster.config.horizon):
        b, w = base_t.params[step], what_t.params[step]
        b_p = direction_probabilities(b, *band).p_increase
        w_p = direction_probabilities(w, *band).p_increase
        b_lo, b_hi = base_t.quantiles["0.05"][step], base_t.quantiles["0.95"][step]
        w_lo, w_hi = what_t.quantiles["0.05"][step], what_t.quantiles["0.95"][step]
        flag = "  <- hypothetical event" if step == 0 else ""
        print(f"  +{step + 1}  {b.loc:8.3f} [{b_lo:7.3f}, {b_hi:7.3f}] {b_p:6.3f} "
              f"{w.loc:9.3f} [{w_lo:7.3f}, {w_hi:7.3f}] {w_p:6.3f}{flag}")
print(f"\nmodel hash {baseline.model_hash[:16]}  manifest hash {baseline.manifest_hash[:16]}")
