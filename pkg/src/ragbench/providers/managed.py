"""Wrap raw providers with retry, rate limiting, an in-flight bound, and call accounting."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence, TypeVar

import numpy as np

from .base import (
    CallLedger,
    CompletionProvider,
    EmbeddingProvider,
    PermanentProviderError,
    RerankProvider,
)
from .cache import EmbeddingCache
from .policy import RateLimiter, RequestPolicy, with_retry

T = TypeVar("T")


class _Managed:
    kind = ""

    def __init__(
        self,
        inner,
        ledger: CallLedger | None = None,
        policy: RequestPolicy = RequestPolicy(),
        limiter: RateLimiter | None = None,
        max_in_flight: int = 8,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.inner = inner
        self.model_id: str = inner.model_id
        self.ledger = ledger if ledger is not None else CallLedger()
        self.policy = policy
        if limiter is None and policy.rate_limit is not None:
            limiter = RateLimiter(policy.rate_limit, sleep=sleep)
        self.limiter = limiter
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._sleep = sleep

    def _call(self, items: int, chars: int, fn: Callable[[], T]) -> T:
        def attempt() -> T:
            if self.limiter is not None:
                self.limiter.acquire()
            with self._slots:
                try:
                    out = fn()
                except Exception:
                    self.ledger.record(self.kind, self.model_id, items, chars, ok=False)
                    raise
            self.ledger.record(self.kind, self.model_id, items, chars)
            return out

        return with_retry(self.policy, attempt, sleep=self._sleep)


class ManagedEmbedding(_Managed):
    kind = "embed"

    @property
    def dimension(self) -> int:
        return self.inner.dimension

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        texts = list(texts)
        return self._call(len(texts), sum(map(len, texts)), lambda: list(self.inner.embed(texts)))


class ManagedCompletion(_Managed):
    kind = "complete"

    def complete(self, prompt: str, temperature: float = 0.0, max_tokens: int = 256) -> str:
        if temperature < 0 or max_tokens < 1:
            raise ValueError("temperature must be >= 0 and max_tokens >= 1")
        text = self._call(1, len(prompt), lambda: self.inner.complete(prompt, temperature, max_tokens))
        if text is None:
            raise PermanentProviderError(f"{self.model_id} returned no text")
        return text


class ManagedRerank(_Managed):
    kind = "rerank"

    def rerank(
        self, query: str, documents: Sequence[tuple[str, str]], top_n: int
    ) -> list[tuple[str, float]]:
        if top_n < 1:
            raise ValueError("top_n must be positive")
        documents = list(documents)
        chars = len(query) + sum(len(t) for _, t in documents)
        out = self._call(
            len(documents), chars, lambda: list(self.inner.rerank(query, documents, top_n))
        )
        expected = min(top_n, len(documents))
        if len(out) != expected:
            raise PermanentProviderError(f"reranker returned {len(out)} results, expected {expected}")
        scores = [s for _, s in out]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise PermanentProviderError("reranker scores are not non-increasing")
        known = {d for d, _ in documents}
        if any(d not in known for d, _ in out):
            raise PermanentProviderError("reranker returned an unknown document")
        return [(d, float(s)) for d, s in out]


@dataclass
class ProviderBundle:
    """The three services plus the shared embedding cache and call ledger."""

    embedding: ManagedEmbedding
    completion: ManagedCompletion | None
    rerank: ManagedRerank | None
    cache: EmbeddingCache = field(default_factory=EmbeddingCache)
    ledger: CallLedger = field(default_factory=CallLedger)

    @classmethod
    def wrap(
        cls,
        embedding: EmbeddingProvider,
        completion: CompletionProvider | None = None,
        rerank: RerankProvider | None = None,
        *,
        cache: EmbeddingCache | None = None,
        policy: RequestPolicy = RequestPolicy(),
        max_in_flight: int = 8,
        sleep: Callable[[float], None] = time.sleep,
    ) -> "ProviderBundle":
        ledger = CallLedger()
        kw = dict(ledger=ledger, policy=policy, max_in_flight=max_in_flight, sleep=sleep)
        return cls(
            embedding=ManagedEmbedding(embedding, **kw),
            completion=ManagedCompletion(completion, **kw) if completion is not None else None,
            rerank=ManagedRerank(rerank, **kw) if rerank is not None else None,
            cache=cache if cache is not None else EmbeddingCache(),
            ledger=ledger,
        )
