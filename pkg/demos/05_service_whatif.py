"""Drive the HTTP service: series browsing, what-if forecasts, error codes.

Builds and trains a small movement, mounts the service in-process, and
walks the endpoints the console uses: movement listing, series slices,
the baseline vs what-if forecast differential, and the error contract.

Run: python3 demos/05_service_whatif.py   (a few minutes on CPU)
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from discoursecast.pipeline import (
    PipelineConfig,
    run_featurize,
    run_ingest,
    run_layer,
    run_train,
)
from discoursecast.service import create_app
from discoursecast.synth import SynthSpec, generate

workdir = Path(tempfile.mkdtemp(prefix="dcast_demo_"))
data = workdir / "data"
generate(workdir, SynthSpec(days=120, seed=23))
config = PipelineConfig.load(str(workdir / "config.json"))
run_ingest(config, str(data), str(workdir / "corpus.jsonl"), str(workdir / "events.csv"))
run_layer(config, str(data))
run_featurize(config, str(data))
run_train(config, str(data), epochs=15)

client = TestClient(create_app(str(data)))

movements = client.get("/movements").json()["movements"]
print("movements:", [m["id"] for m in movements])

series = client.get(
    "/movements/equalvoice/series",
    params={"from": "2024-11-01", "to": "2024-11-03", "fields": "pdi,volume_raw[reddit]"},
).json()
print(f"series slice ({len(series['records'])} days, manifest {series['manifest_hash'][:12]}):")
for record in series["records"]:
    print(f"  {record['date']}: {record['values']}")

anchor = "2024-11-24"
baseline = client.post(
    "/movements/equalvoice/forecast", json={"anchor_date": anchor}
).json()
whatif = client.post(
    "/movements/equalvoice/forecast",
    json={
        "anchor_date": anchor,
        "hypothetical_events": [
            {"date": "2024-11-25", "category": "Violence", "impact": 2, "label": "what if"}
        ],
    },
).json()

target = "volume_raw[reddit]"
print(f"\n{target} at step +1 (anchor {anchor}):")
for name, payload in (("baseline", baseline), ("what-if", whatif)):
    step = payload["targets"][target]["steps"][0]
    scores = step["class_scores"]
    print(
        f"  {name:9s} loc={step['loc']:8.2f} direction={step['direction']:8s} "
        f"p(Inc)={scores['p_increase']:.3f} p(Dec)={scores['p_decrease']:.3f}"
    )
print("forecast fields differ:", baseline["targets"] != whatif["targets"])
print("hashes:", baseline["manifest_hash"][:12], baseline["model_hash"][:12])

print("\nerror contract:")
print("  unknown movement ->", client.get("/movements/ghost/series").status_code)
bad_impact = client.post(
    "/movements/equalvoice/forecast",
    json={
        "anchor_date": anchor,
        "hypothetical_events": [{"date": "2024-11-25", "category": "Violence", "impact": 9}],
    },
)
print("  invalid impact   ->", bad_impact.status_code, json.dumps(bad_impact.json()))
early = client.post("/movements/equalvoice/forecast", json={"anchor_date": "2024-09-05"})
print("  anchor too early ->", early.status_code)
