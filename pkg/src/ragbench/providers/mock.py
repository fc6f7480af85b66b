"""Deterministic offline stand-ins for the embedding, completion, and rerank services."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from ..lexical import tokenize
from .base import PermanentProviderError


def _digest(data: str, seed: int) -> bytes:
    return hashlib.blake2b(data.encode("utf-8"), digest_size=8, salt=seed.to_bytes(8, "little")).digest()


@lru_cache(maxsize=1 << 16)
def _token_features(token: str, dimension: int, seed: int) -> tuple[tuple[int, float], ...]:
    padded = f"#{token}#"
    grams = [padded[i : i + 3] for i in range(max(len(padded) - 2, 1))]
    feats = []
    for g in [f"w:{token}"] + [f"g:{g}" for g in grams]:
        h = int.from_bytes(_digest(g, seed), "little")
        sign = 1.0 if (h >> 63) & 1 else -1.0
        feats.append((h % dimension, sign))
    return tuple(feats)


def hash_embedder(text: str, dimension: int = 256, seed: int = 0) -> np.ndarray:
    """Unit vector from signed feature hashing of word tokens and their character trigrams.

    Texts sharing vocabulary (or word fragments) get positive cosine
    similarity, which is enough for dense retrieval to behave sensibly in
    tests. Text without tokens falls back to a seeded random direction.
    """
    vec = np.zeros(dimension, dtype=np.float64)
    for tok in tokenize(text):
        for idx, sign in _token_features(tok, dimension, seed):
            vec[idx] += sign
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        rng = np.random.default_rng(int.from_bytes(_digest(text, seed), "little"))
        vec = rng.standard_normal(dimension)
        norm = np.linalg.norm(vec)
    return vec / norm


@dataclass
class HashEmbedder:
    dimension: int = 256
    seed: int = 0
    model_id: str = "mock-hash-embed"

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [hash_embedder(t, self.dimension, self.seed) for t in texts]


class ScriptError(PermanentProviderError):
    """No scripted rule matched the prompt."""


Response = Union[str, Callable[[re.Match, str], str]]


@dataclass
class ScriptedCompletion:
    """Completion provider answering from (regex, response) rules; first match wins.

    A response is either a literal string or a callable receiving the match
    and the full prompt.
    """

    rules: Sequence[tuple[Union[str, re.Pattern], Response]]
    model_id: str = "mock-scripted"
    calls: list[tuple[str, float, int]] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self._compiled = [
            (re.compile(p, re.DOTALL) if isinstance(p, str) else p, r) for p, r in self.rules
        ]

    def complete(self, prompt: str, temperature: float = 0.0, max_tokens: int = 256) -> str:
        self.calls.append((prompt, temperature, max_tokens))
        for pattern, response in self._compiled:
            m = pattern.search(prompt)
            if m is not None:
                return response(m, prompt) if callable(response) else response
        raise ScriptError(f"no scripted rule matches prompt: {prompt[:80]!r}")


@dataclass
class OracleReranker:
    """Scores the gold document 1.0 and every other candidate 0.5 / (1 + input position).

    ``gold`` maps query text to its gold doc_id; non-gold candidates keep
    their first-stage order.
    """

    gold: Mapping[str, str]
    model_id: str = "mock-oracle-rerank"

    def rerank(
        self, query: str, documents: Sequence[tuple[str, str]], top_n: int
    ) -> list[tuple[str, float]]:
        target = self.gold.get(query)
        scored = [
            (doc_id, 1.0 if doc_id == target else 0.5 / (1 + i))
            for i, (doc_id, _) in enumerate(documents)
        ]
        scored.sort(key=lambda e: -e[1])
        return scored[:top_n]
