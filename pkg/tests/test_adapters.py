"""Emotion scoring, phrase embedding, and keyphrase extraction adapters."""

import json

import numpy as np
import pytest

from discoursecast.adapters import (
    EMOTION_LABELS,
    AdapterError,
    FileEmbedder,
    FileEmotionScorer,
    FrequencyKeyphraseExtractor,
    HashEmbedder,
    LexiconEmotionScorer,
    MissingScoreError,
    EmotionScores,
    PhraseEmbedding,
    write_embeddings,
    write_emotion_scores,
    _load_lexicon,
)
from discoursecast.corpus import Document, parse_timestamp


def _doc(body, title="", keyphrases=()):
    return Document(
        id="d1",
        platform="reddit",
        timestamp=parse_timestamp("2024-09-01T12:00:00Z"),
        title=title,
        body=body,
        keyphrases=list(keyphrases),
    )


class TestLexiconScorer:
    def test_empty_body_all_zero(self):
        scores = LexiconEmotionScorer().score(_doc(""))
        assert scores.scores == (0.0,) * 28

    def test_pure_anger_body_scores_one(self):
        scores = LexiconEmotionScorer().score(_doc("angry angry angry"))
        idx = EMOTION_LABELS.index("anger")
        assert scores.scores[idx] == 1.0
        assert sum(scores.scores) == 1.0

    def test_half_density(self):
        scores = LexiconEmotionScorer().score(_doc("angry council angry council"))
        idx = EMOTION_LABELS.index("anger")
        assert scores.scores[idx] == pytest.approx(0.5)

    def test_title_counts_toward_score(self):
        scores = LexiconEmotionScorer().score(_doc("council", title="angry"))
        idx = EMOTION_LABELS.index("anger")
        assert scores.scores[idx] == pytest.approx(0.5)

    def test_bounds_hold_for_arbitrary_text(self):
        scores = LexiconEmotionScorer().score(_doc("angry rage furious outrage sad happy"))
        assert all(0.0 <= s <= 1.0 for s in scores.scores)


class TestFileScorer:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "scores.jsonl"
        original = EmotionScores("d1", tuple([0.5] * 28))
        write_emotion_scores(str(path), [original])
        scorer = FileEmotionScorer(str(path))
        assert scorer.score(_doc("anything")) == original

    def test_missing_id_raises(self, tmp_path):
        path = tmp_path / "scores.jsonl"
        path.write_text(json.dumps({"id": "other", "scores": [0.0] * 28}) + "\n")
        with pytest.raises(MissingScoreError):
            FileEmotionScorer(str(path)).score(_doc("x"))

    def test_score_bounds_enforced(self):
        with pytest.raises(AdapterError):
            EmotionScores("d1", tuple([1.5] + [0.0] * 27))
        with pytest.raises(AdapterError):
            EmotionScores("d1", (0.0,) * 27)


class TestHashEmbedder:
    def test_determinism(self):
        a = HashEmbedder().embed("x").vector
        b = HashEmbedder().embed("x").vector
        assert a == b

    def test_two_token_phrase_is_renormalized_mean(self):
        e = HashEmbedder()
        ab = np.array(e.embed("a b").vector)
        mean = (np.array(e.embed("a").vector) + np.array(e.embed("b").vector)) / 2
        np.testing.assert_allclose(ab, mean / np.linalg.norm(mean), atol=1e-15)

    def test_unit_norm(self):
        vec = np.array(HashEmbedder().embed("some longer phrase here").vector)
        assert abs(np.linalg.norm(vec) - 1.0) < 1e-12

    def test_empty_phrase_raises(self):
        with pytest.raises(AdapterError):
            HashEmbedder().embed("   ")

    def test_seed_changes_vectors(self):
        a = HashEmbedder(seed=0).embed("x").vector
        b = HashEmbedder(seed=1).embed("x").vector
        assert a != b

    def test_dim_configurable(self):
        assert len(HashEmbedder(dim=16).embed("x").vector) == 16


class TestFileEmbedder:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "emb.jsonl"
        original = PhraseEmbedding("pay gap", (0.1, 0.2, 0.3))
        write_embeddings(str(path), [original])
        assert FileEmbedder(str(path)).embed("pay gap") == original

    def test_missing_phrase_raises(self, tmp_path):
        path = tmp_path / "emb.jsonl"
        path.write_text("")
        with pytest.raises(MissingScoreError):
            FileEmbedder(str(path)).embed("nope")


class TestKeyphraseExtractor:
    def test_passthrough_when_ingest_provided(self):
        doc = _doc("whatever text", keyphrases=["given phrase", "other"])
        assert FrequencyKeyphraseExtractor().extract(doc) == ["given phrase", "other"]

    def test_frequency_ranking(self):
        doc = _doc("rights rights march")
        assert FrequencyKeyphraseExtractor(top_k=2).extract(doc) == ["rights", "march"]

    def test_stopwords_dropped_and_ties_lexicographic(self):
        doc = _doc("the the the zebra apple")
        assert FrequencyKeyphraseExtractor(top_k=5).extract(doc) == ["apple", "zebra"]

    def test_empty_body_empty_list(self):
        assert FrequencyKeyphraseExtractor().extract(_doc("")) == []


def test_synth_emotion_tokens_stay_in_lexicon():
    from discoursecast.synth import EMOTION_TOKEN

    lexicon = _load_lexicon()
    for emotion, token in EMOTION_TOKEN.items():
        assert token in lexicon[emotion]
