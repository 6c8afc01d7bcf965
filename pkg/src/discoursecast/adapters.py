"""Pluggable emotion, keyphrase, and embedding adapters.

Neural scorers live out of process: their outputs enter the pipeline
through file-backed adapters (JSON-lines keyed by document id or phrase).
The built-in stubs are deterministic functions of the text and an adapter
seed, so every pipeline stage and test runs hermetically. Emotion scoring
and keyphrase extraction both operate on the title+body concatenation.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .corpus import Document
from .textutil import tokenize


def _load_emotion_labels() -> tuple[str, ...]:
    text = resources.files("discoursecast.data").joinpath("emotion_labels.txt").read_text()
    return tuple(line.strip() for line in text.splitlines() if line.strip())


EMOTION_LABELS: tuple[str, ...] = _load_emotion_labels()
N_EMOTIONS = len(EMOTION_LABELS)
assert N_EMOTIONS == 28

DEFAULT_EMBED_DIM = 32


class AdapterError(Exception):
    pass


class MissingScoreError(AdapterError):
    """A file-backed adapter has no record for the requested key."""


@dataclass(frozen=True)
class EmotionScores:
    document_id: str
    scores: tuple[float, ...]

    def __post_init__(self):
        if len(self.scores) != N_EMOTIONS:
            raise AdapterError(
                f"expected {N_EMOTIONS} emotion scores, got {len(self.scores)}"
            )
        for s in self.scores:
            if not (0.0 <= s <= 1.0):
                raise AdapterError(f"emotion score {s} outside [0, 1]")


@dataclass(frozen=True)
class PhraseEmbedding:
    phrase: str
    vector: tuple[float, ...]


def _load_lexicon() -> dict[str, frozenset[str]]:
    raw = json.loads(
        resources.files("discoursecast.data").joinpath("emotion_lexicon.json").read_text()
    )
    return {emo: frozenset(tokens) for emo, tokens in raw["lexicon"].items()}


def _load_stopwords() -> frozenset[str]:
    text = resources.files("discoursecast.data").joinpath("stopwords.txt").read_text()
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


class LexiconEmotionScorer:
    """Stub scorer: per-emotion score = matched lexicon tokens / total tokens."""

    name = "stub-lexicon"

    def __init__(self):
        self._lexicon = _load_lexicon()

    def score(self, doc: Document) -> EmotionScores:
        tokens = tokenize(doc.text())
        if not tokens:
            return EmotionScores(doc.id, (0.0,) * N_EMOTIONS)
        total = len(tokens)
        scores = []
        for emo in EMOTION_LABELS:
            vocab = self._lexicon.get(emo, frozenset())
            matched = sum(1 for t in tokens if t in vocab)
            scores.append(min(1.0, matched / total))
        return EmotionScores(doc.id, tuple(scores))


class FileEmotionScorer:
    """Reads precomputed scores from JSON-lines ``{id, scores:[28]}``."""

    name = "file"

    def __init__(self, path: str):
        self.path = path
        self._scores: dict[str, tuple[float, ...]] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    self._scores[str(rec["id"])] = tuple(float(x) for x in rec["scores"])

    def score(self, doc: Document) -> EmotionScores:
        if doc.id not in self._scores:
            raise MissingScoreError(f"no emotion scores for document id {doc.id!r} in {self.path}")
        return EmotionScores(doc.id, self._scores[doc.id])


def write_emotion_scores(path: str, scores: list[EmotionScores]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in scores:
            fh.write(json.dumps({"id": s.document_id, "scores": list(s.scores)}) + "\n")


class HashEmbedder:
    """Stub embedder: seeded hash of each token to a unit vector, averaged.

    The same phrase always maps to the bitwise-identical vector regardless
    of process or platform, because the per-token seed comes from a stable
    SHA-256 digest rather than Python's randomized hash().
    """

    name = "stub-hash"

    def __init__(self, dim: int = DEFAULT_EMBED_DIM, seed: int = 0):
        if dim < 2:
            raise AdapterError("embedding dim must be >= 2")
        self.dim = dim
        self.seed = seed
        self._token_cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        cached = self._token_cache.get(token)
        if cached is not None:
            return cached
        digest = hashlib.sha256(f"{self.seed}:{token}".encode()).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
        vec = rng.standard_normal(self.dim)
        vec /= np.linalg.norm(vec)
        self._token_cache[token] = vec
        return vec

    def embed(self, phrase: str) -> PhraseEmbedding:
        tokens = tokenize(phrase)
        if not tokens:
            raise AdapterError(f"cannot embed empty phrase {phrase!r}")
        mean = np.mean([self._token_vector(t) for t in tokens], axis=0)
        norm = np.linalg.norm(mean)
        if norm < 1e-12:
            raise AdapterError(f"degenerate zero embedding for phrase {phrase!r}")
        vec = mean / norm
        return PhraseEmbedding(phrase, tuple(float(x) for x in vec))


class FileEmbedder:
    """Reads precomputed embeddings from JSON-lines ``{phrase, vector}``."""

    name = "file"

    def __init__(self, path: str):
        self.path = path
        self._vectors: dict[str, tuple[float, ...]] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    self._vectors[rec["phrase"]] = tuple(float(x) for x in rec["vector"])

    def embed(self, phrase: str) -> PhraseEmbedding:
        if phrase not in self._vectors:
            raise MissingScoreError(f"no embedding for phrase {phrase!r} in {self.path}")
        return PhraseEmbedding(phrase, self._vectors[phrase])


def write_embeddings(path: str, embeddings: list[PhraseEmbedding]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in embeddings:
            fh.write(json.dumps({"phrase": e.phrase, "vector": list(e.vector)}) + "\n")


class FrequencyKeyphraseExtractor:
    """Passes through ingest keyphrases; otherwise top-k frequent non-stopwords."""

    name = "stub-frequency"

    def __init__(self, top_k: int = 10):
        self.top_k = top_k
        self._stopwords = _load_stopwords()

    def extract(self, doc: Document) -> list[str]:
        if doc.keyphrases:
            return list(doc.keyphrases)
        counts: dict[str, int] = {}
        for token in tokenize(doc.text()):
            if token in self._stopwords:
                continue
            counts[token] = counts.get(token, 0) + 1
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [token for token, _ in ranked[: self.top_k]]


def make_emotion_scorer(adapter: str, path: str | None = None):
    if adapter == "stub-lexicon":
        return LexiconEmotionScorer()
    if adapter == "file":
        if path is None:
            raise AdapterError("file emotion adapter requires a path")
        return FileEmotionScorer(path)
    raise AdapterError(f"unknown emotion adapter {adapter!r}")


def make_embedder(adapter: str, path: str | None = None, dim: int = DEFAULT_EMBED_DIM, seed: int = 0):
    if adapter == "stub-hash":
        return HashEmbedder(dim=dim, seed=seed)
    if adapter == "file":
        if path is None:
            raise AdapterError("file embedding adapter requires a path")
        return FileEmbedder(path)
    raise AdapterError(f"unknown embedding adapter {adapter!r}")
