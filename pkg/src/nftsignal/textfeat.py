"""Event-word feature extraction from per-frame tweet text.

Each timeframe's noun/verb tokens form one document.  A word's score is
tf * idf where tf is its relative frequency in the frame and
idf = ln(N / tfs(word, p)) with tfs counting only the frames where the
word's relative frequency reaches the containment threshold p.  The
threshold keeps bursty words (heavily used in a few frames, mentioned in
passing everywhere) from being flattened to zero idf.  The feature matrix
holds, per frame, the scores of that frame's top-k words over the union
vocabulary.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .postag import NOUN, VERB


class TextFeatError(ValueError):
    pass


_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#\w+")
# pragmatic emoji cluster: pictographs, symbols, flags, joiners, variation selectors
_EMOJI_RE = re.compile(
    "["
    "\U0001F000-\U0001FAFF"
    "\U00002600-\U000027BF"
    "\U00002B00-\U00002BFF"
    "\U0001F1E6-\U0001F1FF"
    "❤️‍"
    "]"
)
_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

_MIN_TOKEN_LEN = 2  # drops stray single letters and punctuation debris


@dataclass(frozen=True)
class TokenizedDoc:
    frame_index: int
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class TfidfConfig:
    p: float = 0.01  # minimum within-frame relative frequency for containment
    k: int = 10      # words kept per frame

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise TextFeatError("p must be in (0, 1]")
        if self.k < 1:
            raise TextFeatError("k must be >= 1")


@dataclass(frozen=True)
class WordScore:
    word: str
    tf: float
    idf: float
    tfidf: float


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Per-frame tf-idf vectors over the sorted union of top-k words."""

    vocab: tuple[str, ...]
    values: np.ndarray  # shape (n_frames, len(vocab))
    frame_indices: tuple[int, ...]

    @property
    def n_frames(self) -> int:
        return self.values.shape[0]

    def column(self, word: str) -> np.ndarray:
        try:
            j = self.vocab.index(word)
        except ValueError:
            raise TextFeatError(f"word {word!r} not in vocabulary") from None
        return self.values[:, j]

    def subset(self, rows) -> "FeatureMatrix":
        rows = list(rows)
        return FeatureMatrix(
            vocab=self.vocab,
            values=self.values[rows].copy(),
            frame_indices=tuple(self.frame_indices[r] for r in rows),
        )


def strip_noise(raw: str) -> str:
    """Remove URLs, @-mentions, #-tags and emoji; collapse whitespace, keep case."""
    s = _URL_RE.sub(" ", raw)
    s = _MENTION_RE.sub(" ", s)
    s = _HASHTAG_RE.sub(" ", s)
    s = _EMOJI_RE.sub(" ", s)
    return " ".join(s.split())


def clean_text(raw: str) -> str:
    """Lowercased :func:`strip_noise`; idempotent."""
    return strip_noise(raw).lower()


def pos_filter(text: str, tagger) -> list[str]:
    """Lowercased tokens tagged NOUN or VERB, in order of appearance."""
    tokens = [t for t in _TOKEN_RE.findall(text) if len(t) >= _MIN_TOKEN_LEN]
    tags = tagger.tag(tokens)
    return [t.lower() for t, tag in zip(tokens, tags) if tag in (NOUN, VERB)]


def tokenize_frame(frame_index: int, texts, tagger) -> TokenizedDoc:
    """Clean and POS-filter raw tweet texts of one frame into a document.

    Tagging happens on original-case text; tokens are lowercased afterwards.
    """
    tokens: list[str] = []
    for raw in texts:
        tokens.extend(pos_filter(strip_noise(raw), tagger))
    return TokenizedDoc(frame_index, tuple(tokens))


class _CorpusIndex:
    """Per-frame token counts plus containment lookups, built once per corpus."""

    def __init__(self, corpus):
        self.counters = [Counter(doc.tokens) for doc in corpus]
        self.lengths = [len(doc.tokens) for doc in corpus]
        self.n_frames = len(self.counters)

    def containment(self, word: str, p: float) -> int:
        """Frames where the word's relative frequency reaches p; floored at 1.

        A word can occur somewhere yet never reach the threshold; the floor
        keeps idf = ln(N / tfs) finite and maximal in that case.
        """
        count = 0
        for counter, length in zip(self.counters, self.lengths):
            if length and counter[word] / length >= p:
                count += 1
        return max(1, count)


def tfidf_score(word: str, frame: TokenizedDoc, corpus, config: TfidfConfig) -> WordScore:
    """Score one word of one frame against the whole corpus."""
    index = _CorpusIndex(corpus)
    counter = Counter(frame.tokens)
    if counter[word] == 0:
        raise TextFeatError(f"word {word!r} does not occur in frame {frame.frame_index}")
    return _score_word(word, counter, len(frame.tokens), index, config)


def _score_word(word, counter, length, index: _CorpusIndex, config: TfidfConfig) -> WordScore:
    tf = counter[word] / length
    idf = math.log(index.n_frames / index.containment(word, config.p))
    return WordScore(word=word, tf=tf, idf=idf, tfidf=tf * idf)


def event_words(frame: TokenizedDoc, corpus, config: TfidfConfig) -> list[WordScore]:
    """The frame's top-k distinct words by tf-idf; ties break lexicographically."""
    if not frame.tokens:
        raise TextFeatError(f"frame {frame.frame_index} has no tokens")
    index = _CorpusIndex(corpus)
    return _event_words_indexed(frame, index, config)


def _event_words_indexed(frame, index, config) -> list[WordScore]:
    counter = Counter(frame.tokens)
    scores = [
        _score_word(w, counter, len(frame.tokens), index, config)
        for w in sorted(counter)
    ]
    scores.sort(key=lambda ws: (-ws.tfidf, ws.word))
    return scores[: config.k]


def build_feature_matrix(corpus, config: TfidfConfig) -> FeatureMatrix:
    """Union top-k vocabulary over all frames; zero where a word missed a frame's top-k."""
    corpus = list(corpus)
    if not corpus:
        return FeatureMatrix(vocab=(), values=np.zeros((0, 0)), frame_indices=())
    index = _CorpusIndex(corpus)
    per_frame = [
        _event_words_indexed(doc, index, config) if doc.tokens else []
        for doc in corpus
    ]
    vocab = sorted({ws.word for scores in per_frame for ws in scores})
    col = {w: j for j, w in enumerate(vocab)}
    values = np.zeros((len(corpus), len(vocab)))
    for r, scores in enumerate(per_frame):
        for ws in scores:
            values[r, col[ws.word]] = ws.tfidf
    return FeatureMatrix(
        vocab=tuple(vocab),
        values=values,
        frame_indices=tuple(doc.frame_index for doc in corpus),
    )


OVERLAP_BUCKETS = ("all", "15-18", "10-14", "6-9", "2-5", "1")


@dataclass(frozen=True)
class OverlapDistribution:
    """How many vocabularies contain each word, plus bucketed union shares."""

    n_sets: int
    word_counts: dict[str, int]
    bucket_counts: dict[str, int]
    bucket_shares: dict[str, float]


def _bucket(count: int, n_sets: int) -> str:
    if count == n_sets:
        return "all"
    if count >= 15:
        return "15-18"
    if count >= 10:
        return "10-14"
    if count >= 6:
        return "6-9"
    if count >= 2:
        return "2-5"
    return "1"


def overlap_distribution(vocabs) -> OverlapDistribution:
    """Cross-project word sharing over the union vocabulary."""
    vocabs = [set(v) for v in vocabs]
    if len(vocabs) < 2:
        raise TextFeatError("need at least 2 vocabularies")
    counts: dict[str, int] = {}
    for vocab in vocabs:
        for word in vocab:
            counts[word] = counts.get(word, 0) + 1
    bucket_counts = {b: 0 for b in OVERLAP_BUCKETS}
    for word in counts:
        bucket_counts[_bucket(counts[word], len(vocabs))] += 1
    total = len(counts)
    shares = {b: (bucket_counts[b] / total if total else 0.0) for b in OVERLAP_BUCKETS}
    return OverlapDistribution(
        n_sets=len(vocabs),
        word_counts=dict(sorted(counts.items())),
        bucket_counts=bucket_counts,
        bucket_shares=shares,
    )


def matrix_to_csv(matrix: FeatureMatrix) -> str:
    """CSV with the vocabulary as header and one row per frame."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(matrix.vocab)
    for row in matrix.values:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def matrix_sidecar(matrix: FeatureMatrix, config: TfidfConfig, frame_starts=None) -> str:
    """JSON sidecar: config, vocabulary order, frame metadata."""
    doc = {
        "config": {"p": config.p, "k": config.k},
        "vocab": list(matrix.vocab),
        "frame_indices": list(matrix.frame_indices),
    }
    if frame_starts is not None:
        doc["frame_starts"] = [d.isoformat() for d in frame_starts]
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def matrix_from_csv(text: str, frame_indices=None) -> FeatureMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    vocab = tuple(rows[0])
    values = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
    if values.size == 0:
        values = np.zeros((0, len(vocab)))
    if frame_indices is None:
        frame_indices = tuple(range(values.shape[0]))
    return FeatureMatrix(vocab=vocab, values=values, frame_indices=tuple(frame_indices))
