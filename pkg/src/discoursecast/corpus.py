"""Document ingestion, co-occurrence vocabulary, and relevance layering.

Documents arrive as UTF-8 JSON-lines, one object per line with fields
``id, platform, timestamp, title, body, engagement, keyphrases``. Layering
walks a tiered rule set: layer 0 holds documents mentioning the movement
token directly, layers 1..3 hold documents matching a decreasing fraction
of the high-salience co-occurrence vocabulary, and everything below the
loosest threshold is excluded. A layer-``l`` document carries relevance
``1 - l/3``, which later weights every per-day aggregate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone, date

MAX_LAYER = 3
DEFAULT_LAYER_THRESHOLDS = (0.30, 0.20, 0.10)
DEFAULT_PERCENTILE_CUT = 99.0


class CorpusError(Exception):
    """Raised for unrecoverable corpus-level problems."""


class EmptyVocabularyError(CorpusError):
    """No document contains the movement token, so no vocabulary exists."""


@dataclass
class Document:
    """One post or article.

    ``engagement`` is likes+shares+comments for social platforms and a
    readership proxy for news; it must be non-negative. ``keyphrases`` may
    be empty until an extraction adapter fills it.
    """

    id: str
    platform: str
    timestamp: datetime
    title: str = ""
    body: str = ""
    engagement: float = 1.0
    keyphrases: list[str] = field(default_factory=list)

    @property
    def day(self) -> date:
        return self.timestamp.astimezone(timezone.utc).date()

    def text(self) -> str:
        return f"{self.title}\n{self.body}" if self.title else self.body


@dataclass
class IngestError:
    line: int
    message: str


@dataclass
class Corpus:
    """Immutable snapshot of ingested documents plus per-record diagnostics."""

    documents: list[Document]
    errors: list[IngestError] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def platform_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for doc in self.documents:
            counts[doc.platform] = counts.get(doc.platform, 0) + 1
        return dict(sorted(counts.items()))

    def __len__(self) -> int:
        return len(self.documents)


@dataclass(frozen=True)
class KeywordStats:
    """Co-occurrence count of one keyword with the movement token."""

    keyword: str
    cooccurrence_count: int
    percentile: float


@dataclass(frozen=True)
class LayerAssignment:
    document_id: str
    layer: int
    matched_fraction: float
    relevance: float


def parse_timestamp(raw: str) -> datetime:
    ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def ingest_documents(path: str, format: str = "jsonl") -> Corpus:
    """Load a JSON-lines corpus file.

    Malformed records are collected as per-line errors and skipped;
    duplicate ids are skipped with a warning. Ingestion never aborts on a
    bad record.
    """
    if format != "jsonl":
        raise CorpusError(f"unknown ingest format: {format!r}")
    documents: list[Document] = []
    errors: list[IngestError] = []
    warnings: list[str] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = _parse_record(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                errors.append(IngestError(lineno, str(exc)))
                continue
            if doc.id in seen:
                warnings.append(f"line {lineno}: duplicate id {doc.id!r} skipped")
                continue
            seen.add(doc.id)
            documents.append(doc)
    return Corpus(documents=documents, errors=errors, warnings=warnings)


def _parse_record(record: dict) -> Document:
    for key in ("id", "platform", "timestamp"):
        if key not in record:
            raise KeyError(f"missing required field {key!r}")
    engagement = float(record.get("engagement", 1.0))
    if engagement < 0:
        raise ValueError(f"negative engagement {engagement} for id {record['id']!r}")
    keyphrases = record.get("keyphrases") or []
    if not isinstance(keyphrases, list):
        raise TypeError("keyphrases must be an array of strings")
    return Document(
        id=str(record["id"]),
        platform=str(record["platform"]),
        timestamp=parse_timestamp(str(record["timestamp"])),
        title=str(record.get("title", "")),
        body=str(record.get("body", "")),
        engagement=engagement,
        keyphrases=[str(k) for k in keyphrases],
    )


def build_core_vocabulary(
    corpus: Corpus,
    movement_token: str,
    percentile_cut: float = DEFAULT_PERCENTILE_CUT,
) -> list[KeywordStats]:
    """Keywords in the top co-occurrence percentile with the movement token.

    A keyword co-occurs when it appears in the keyphrase list of a document
    that mentions the movement token in its title or body. The cut uses the
    nearest-rank percentile of the count distribution; ties at the cut are
    included. Ordering is count descending, then lexicographic.
    """
    if not (0 < percentile_cut <= 100):
        raise ValueError(f"percentile_cut must be in (0, 100], got {percentile_cut}")
    if not corpus.documents:
        raise CorpusError("corpus is empty")

    from .textutil import contains_phrase, tokenize

    movement_lower = movement_token.lower()
    counts: dict[str, int] = {}
    matched_any = False
    for doc in corpus.documents:
        tokens = tokenize(doc.text())
        if not contains_phrase(tokens, movement_token):
            continue
        matched_any = True
        for phrase in set(k.lower() for k in doc.keyphrases):
            if phrase == movement_lower:
                continue
            counts[phrase] = counts.get(phrase, 0) + 1
    if not matched_any:
        raise EmptyVocabularyError(
            f"movement token {movement_token!r} not found in any document"
        )
    if not counts:
        return []

    ordered_counts = sorted(counts.values())
    cut_rank = max(1, math.ceil(percentile_cut / 100.0 * len(ordered_counts)))
    cut_value = ordered_counts[cut_rank - 1]

    stats = [
        KeywordStats(
            keyword=kw,
            cooccurrence_count=n,
            percentile=_nearest_rank_percentile(ordered_counts, n),
        )
        for kw, n in counts.items()
        if n >= cut_value
    ]
    stats.sort(key=lambda s: (-s.cooccurrence_count, s.keyword))
    return stats


def _nearest_rank_percentile(ordered_counts: list[int], value: int) -> float:
    """Empirical CDF position of ``value`` in percent."""
    import bisect

    rank = bisect.bisect_right(ordered_counts, value)
    return 100.0 * rank / len(ordered_counts)


def assign_layers(
    corpus: Corpus,
    core_vocab: list[KeywordStats],
    movement_token: str,
    thresholds: tuple[float, ...] = DEFAULT_LAYER_THRESHOLDS,
) -> list[LayerAssignment]:
    """Assign each document to its strictest qualifying layer.

    Layer 0 requires the movement token in title or body. Otherwise the
    matched fraction is the share of the core vocabulary appearing in the
    document text, and the document lands in the smallest layer index whose
    threshold it meets (ties at a threshold qualify). Documents below the
    loosest threshold get no assignment.
    """
    _validate_thresholds(thresholds)
    if not core_vocab:
        raise CorpusError("core vocabulary is empty")

    from .textutil import contains_phrase, tokenize

    vocab = [s.keyword for s in core_vocab]
    assignments: list[LayerAssignment] = []
    for doc in corpus.documents:
        tokens = tokenize(doc.text())
        if contains_phrase(tokens, movement_token):
            assignments.append(LayerAssignment(doc.id, 0, 1.0, 1.0))
            continue
        matched = sum(1 for kw in vocab if contains_phrase(tokens, kw))
        fraction = matched / len(vocab)
        layer = _layer_for_fraction(fraction, thresholds)
        if layer is None:
            continue
        assignments.append(
            LayerAssignment(doc.id, layer, fraction, 1.0 - layer / MAX_LAYER)
        )
    return assignments


def _layer_for_fraction(fraction: float, thresholds: tuple[float, ...]) -> int | None:
    for i, threshold in enumerate(thresholds, start=1):
        if fraction >= threshold:
            return i
    return None


def _validate_thresholds(thresholds: tuple[float, ...]) -> None:
    if not thresholds:
        raise ValueError("thresholds must be non-empty")
    for t in thresholds:
        if not (0.0 < t < 1.0):
            raise ValueError(f"threshold {t} outside (0, 1)")
    for a, b in zip(thresholds, thresholds[1:]):
        if a <= b:
            raise ValueError("thresholds must be strictly decreasing")


def layer_counts(assignments: list[LayerAssignment], corpus: Corpus) -> dict[str, dict[str, int]]:
    """Per-platform document counts by layer, mirroring the extraction summary."""
    platform_of = {doc.id: doc.platform for doc in corpus.documents}
    table: dict[str, dict[str, int]] = {}
    for a in assignments:
        platform = platform_of[a.document_id]
        per_layer = table.setdefault(platform, {})
        key = f"L{a.layer}"
        per_layer[key] = per_layer.get(key, 0) + 1
    for per_layer in table.values():
        per_layer["total"] = sum(v for k, v in per_layer.items() if k != "total")
    return {p: dict(sorted(v.items())) for p, v in sorted(table.items())}


def write_layer_assignments(path: str, assignments: list[LayerAssignment]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in assignments:
            fh.write(
                json.dumps(
                    {
                        "document_id": a.document_id,
                        "layer": a.layer,
                        "matched_fraction": a.matched_fraction,
                        "relevance": a.relevance,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def read_layer_assignments(path: str) -> list[LayerAssignment]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                out.append(
                    LayerAssignment(
                        rec["document_id"],
                        rec["layer"],
                        rec["matched_fraction"],
                        rec["relevance"],
                    )
                )
    return out
