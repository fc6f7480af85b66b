"""Query-side expansion: HyDE and multi-query retrieval."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..corpus import RankedList
from ..fusion import RrfConfig, rrf_fuse
from ..providers import CompletionProvider, EmbeddingCache, EmbeddingProvider, cached_embed
from ..vector import VectorIndex, vector_search
from .base import DenseRetriever, Retriever, StrategyConfig
from .prompts import PromptLibrary, render


def hyde_retrieve(
    query: str,
    completion: CompletionProvider,
    embedding: EmbeddingProvider,
    cache: EmbeddingCache,
    vindex: VectorIndex,
    cfg: StrategyConfig = StrategyConfig(),
    k: int = 10,
    prompts: PromptLibrary = PromptLibrary(),
) -> RankedList:
    """Retrieve with the embedding of a generated answer passage.

    An empty generation falls back to embedding the raw query.
    """
    prompt = render(prompts.hyde_template, query=query)
    passage = completion.complete(prompt, cfg.hyde_temperature, cfg.hyde_max_tokens).strip()
    text = passage if passage else query
    vec = cached_embed(embedding, cache, [text])[0]
    return vector_search(vindex, vec, k).with_source("hyde")


_NUMBERED = re.compile(r"^\d\. (.*)$")


def parse_variants(text: str, n: int) -> list[str]:
    """Query variants from lines shaped ``<digit>. <query>``; other lines are ignored."""
    variants = []
    for line in text.splitlines():
        m = _NUMBERED.match(line.strip())
        if m and m.group(1).strip():
            variants.append(m.group(1).strip())
    return variants[:n]


def multi_query_retrieve(
    query: str,
    completion: CompletionProvider,
    base: Retriever,
    cfg: StrategyConfig = StrategyConfig(),
    k: int = 10,
    prompts: PromptLibrary = PromptLibrary(),
) -> RankedList:
    """Fuse retrievals for the original query and its generated variants with RRF."""
    prompt = render(prompts.multi_query, n=cfg.multi_query_n, query=query)
    raw = completion.complete(prompt, cfg.multi_query_temperature, cfg.multi_query_max_tokens)
    variants = parse_variants(raw, cfg.multi_query_n)
    depth = cfg.multi_query_depth or k
    lists = [base.retrieve(q, depth) for q in [query, *variants]]
    if len(lists) == 1:
        return lists[0].top(k).with_source("multi_query")
    return rrf_fuse(lists, RrfConfig(cfg.multi_query_rrf_k), k).with_source("multi_query")


@dataclass
class HydeRetriever:
    completion: CompletionProvider
    dense: DenseRetriever
    cfg: StrategyConfig = field(default_factory=StrategyConfig)
    prompts: PromptLibrary = field(default_factory=PromptLibrary)
    name: str = "hyde"

    def retrieve(self, query: str, k: int) -> RankedList:
        d = self.dense
        return hyde_retrieve(
            query, self.completion, d.embedding, d.cache, d.index, self.cfg, k, self.prompts
        ).with_source(self.name)


@dataclass
class MultiQueryRetriever:
    completion: CompletionProvider
    base: Retriever
    cfg: StrategyConfig = field(default_factory=StrategyConfig)
    prompts: PromptLibrary = field(default_factory=PromptLibrary)
    name: str = "multi_query"

    def retrieve(self, query: str, k: int) -> RankedList:
        return multi_query_retrieve(
            query, self.completion, self.base, self.cfg, k, self.prompts
        ).with_source(self.name)
