"""Whitespace tokenizer and an Okapi BM25 inverted index."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Corpus, CorpusError, RankedList

INDEX_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    strip_edge_punctuation: bool = True


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self) -> None:
        if not self.k1 > 0:
            raise ValueError(f"k1 must be positive, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must lie in [0, 1], got {self.b}")


def _strip_edges(tok: str) -> str:
    start, end = 0, len(tok)
    while start < end and not tok[start].isalnum():
        start += 1
    while end > start and not tok[end - 1].isalnum():
        end -= 1
    return tok[start:end]


def tokenize(text: str, cfg: TokenizerConfig = TokenizerConfig()) -> list[str]:
    tokens = text.split()
    if cfg.lowercase:
        tokens = [t.lower() for t in tokens]
    if cfg.strip_edge_punctuation:
        tokens = [_strip_edges(t) for t in tokens]
    return [t for t in tokens if t]


@dataclass
class LexicalIndex:
    """Inverted index: term -> (doc positions, term frequencies), both sorted by position."""

    doc_ids: list[str]
    doc_lengths: np.ndarray
    postings: dict[str, tuple[np.ndarray, np.ndarray]]
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)

    @property
    def N(self) -> int:
        return len(self.doc_ids)

    @property
    def avgdl(self) -> float:
        return float(self.doc_lengths.mean())

    def df(self, term: str) -> int:
        post = self.postings.get(term)
        return 0 if post is None else len(post[0])

    def tf(self, term: str, position: int) -> int:
        post = self.postings.get(term)
        if post is None:
            return 0
        docs, freqs = post
        i = int(np.searchsorted(docs, position))
        if i < len(docs) and docs[i] == position:
            return int(freqs[i])
        return 0

    def idf(self, term: str) -> float:
        df = self.df(term)
        return math.log((self.N - df + 0.5) / (df + 0.5) + 1.0)

    def save(self, path: str | Path) -> None:
        """Dump the index as versioned JSON (internal format, not a public contract)."""
        payload = {
            "format": "ragbench-lexical",
            "version": INDEX_FORMAT_VERSION,
            "tokenizer": {
                "lowercase": self.tokenizer.lowercase,
                "strip_edge_punctuation": self.tokenizer.strip_edge_punctuation,
            },
            "doc_ids": self.doc_ids,
            "doc_lengths": self.doc_lengths.tolist(),
            "postings": {t: [d.tolist(), f.tolist()] for t, (d, f) in sorted(self.postings.items())},
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LexicalIndex":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("format") != "ragbench-lexical" or payload.get("version") != INDEX_FORMAT_VERSION:
            raise ValueError(f"{path}: not a version {INDEX_FORMAT_VERSION} lexical index dump")
        postings = {
            t: (np.asarray(d, dtype=np.int64), np.asarray(f, dtype=np.int64))
            for t, (d, f) in payload["postings"].items()
        }
        return cls(
            doc_ids=list(payload["doc_ids"]),
            doc_lengths=np.asarray(payload["doc_lengths"], dtype=np.int64),
            postings=postings,
            tokenizer=TokenizerConfig(**payload["tokenizer"]),
        )


def build_lexical_index(corpus: Corpus, cfg: TokenizerConfig = TokenizerConfig()) -> LexicalIndex:
    if len(corpus) == 0:
        raise CorpusError("cannot index an empty corpus")
    raw: dict[str, tuple[list[int], list[int]]] = {}
    lengths = []
    for pos, doc in enumerate(corpus):
        toks = tokenize(doc.text, cfg)
        lengths.append(len(toks))
        for term, tf in Counter(toks).items():
            docs, freqs = raw.setdefault(term, ([], []))
            docs.append(pos)
            freqs.append(tf)
    postings = {
        t: (np.asarray(d, dtype=np.int64), np.asarray(f, dtype=np.int64)) for t, (d, f) in raw.items()
    }
    return LexicalIndex(corpus.doc_ids, np.asarray(lengths, dtype=np.int64), postings, cfg)


def bm25_scores(index: LexicalIndex, query: str, params: Bm25Params = Bm25Params()) -> np.ndarray:
    """Score every indexed document; repeated query terms count once per occurrence."""
    scores = np.zeros(index.N, dtype=np.float64)
    avgdl = index.avgdl
    # an all-empty corpus has avgdl 0 and nothing to match
    if avgdl == 0:
        return scores
    norm = params.k1 * (1.0 - params.b + params.b * index.doc_lengths / avgdl)
    for term in tokenize(query, index.tokenizer):
        post = index.postings.get(term)
        if post is None:
            continue
        docs, freqs = post
        tf = freqs.astype(np.float64)
        scores[docs] += index.idf(term) * tf * (params.k1 + 1.0) / (tf + norm[docs])
    return scores


def lexical_search(
    index: LexicalIndex, query: str, params: Bm25Params = Bm25Params(), k: int = 10
) -> RankedList:
    """Top-``k`` documents by BM25 score; zero-score documents are dropped."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    scores = bm25_scores(index, query, params)
    hits = np.flatnonzero(scores > 0)
    return RankedList.from_pairs(
        ((index.doc_ids[i], float(scores[i])) for i in hits), source="bm25", k=k
    )
