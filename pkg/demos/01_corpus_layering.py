"""Walk through corpus ingestion, vocabulary building, and relevance layering.

Generates a small synthetic corpus, ingests it, derives the co-occurrence
vocabulary around the movement token, and prints the tiered layer summary
with matched fractions and relevance weights.

Run: python3 demos/01_corpus_layering.py
"""

import tempfile
from pathlib import Path

from discoursecast.corpus import assign_layers, build_core_vocabulary, ingest_documents
from discoursecast.synth import SynthSpec, generate

workdir = Path(tempfile.mkdtemp(prefix="dcast_demo_"))
generate(workdir, SynthSpec(days=30, seed=3))

corpus = ingest_documents(str(workdir / "corpus.jsonl"))
print(f"ingested {len(corpus)} documents: {corpus.platform_counts()}")
print(f"per-record errors: {len(corpus.errors)}, warnings: {len(corpus.warnings)}")

vocab = build_core_vocabulary(corpus, "#EqualVoice", percentile_cut=1.0)
print(f"\nco-occurrence vocabulary ({len(vocab)} keywords):")
for stats in vocab[:6]:
    print(f"  {stats.keyword:14s} count={stats.cooccurrence_count:4d} pct={stats.percentile:5.1f}")

assignments = assign_layers(corpus, vocab, "#EqualVoice")
by_layer = {}
for a in assignments:
    by_layer.setdefault(a.layer, []).append(a)
print(f"\nassigned {len(assignments)} of {len(corpus)} documents:")
for layer in sorted(by_layer):
    group = by_layer[layer]
    print(
        f"  L{layer}: {len(group):5d} docs, relevance {group[0].relevance:.3f}, "
        f"median matched fraction "
        f"{sorted(a.matched_fraction for a in group)[len(group) // 2]:.2f}"
    )
print(f"  excluded (below loosest threshold): {len(corpus) - len(assignments)}")
