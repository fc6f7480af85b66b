"""Provider plumbing: retry with backoff, the rate limiter, the call ledger, the embedding cache.

    python3 demos/07_providers.py
"""

import tempfile
from pathlib import Path

from ragbench.providers import (
    EmbeddingCache,
    HashEmbedder,
    ProviderBundle,
    RateLimiter,
    RequestPolicy,
    ScriptedCompletion,
    cached_embed,
    with_retry,
)


class Flaky:
    def __init__(self, failures):
        self.failures = failures

    def __call__(self):
        if self.failures:
            self.failures -= 1
            raise ConnectionError("transient")
        return "ok"


waits = []
print("retry:", with_retry(RequestPolicy(max_attempts=3, base_delay=1.0), Flaky(2), sleep=waits.append), "after waits", waits)


class Clock:
    now = 0.0

    def time(self):
        return self.now

    def sleep(self, s):
        self.now += s


clock = Clock()
limiter = RateLimiter(3, clock=clock.time, sleep=clock.sleep)
print("rate limit 3/min admission times:", [limiter.acquire() for _ in range(7)])

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "embeddings.cache"
    bundle = ProviderBundle.wrap(HashEmbedder(32), ScriptedCompletion([(r".*", "42")]), cache=EmbeddingCache(path))
    texts = ["net income", "revenue", "net income"]
    cached_embed(bundle.embedding, bundle.cache, texts)
    bundle.cache.save()
    again = ProviderBundle.wrap(HashEmbedder(32), cache=EmbeddingCache(path))
    cached_embed(again.embedding, again.cache, texts)
    print("first run ledger :", bundle.ledger.summary())
    print("second run ledger:", again.ledger.summary() or "no calls (all cache hits)")
