"""Strategy knobs and the single-stage retrievers the composed strategies build on."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from ..corpus import RankedList
from ..fusion import ConvexConfig, RrfConfig, convex_fuse, min_max, rrf_fuse
from ..lexical import Bm25Params, LexicalIndex, lexical_search
from ..providers import EmbeddingCache, EmbeddingProvider, cached_embed
from ..vector import VectorIndex, vector_search


@dataclass(frozen=True)
class StrategyConfig:
    hyde_max_tokens: int = 150
    hyde_temperature: float = 0.0
    multi_query_n: int = 3
    multi_query_rrf_k: float = 60.0
    multi_query_temperature: float = 0.0
    multi_query_max_tokens: int = 256
    multi_query_depth: int | None = None  # None: retrieve each variant to the requested k
    crag_eval_temperature: float = 0.0
    crag_eval_max_tokens: int = 16
    crag_rewrite_temperature: float = 0.5
    crag_rewrite_max_tokens: int = 128
    crag_top_k: int = 5
    contextual_max_tokens: int = 100
    contextual_temperature: float = 0.0
    rerank_pool: int = 50
    rerank_top_n: int = 10
    first_stage_depth: int | None = None  # None: the whole corpus feeds fusion

    def __post_init__(self) -> None:
        counts = ("hyde_max_tokens", "multi_query_n", "multi_query_max_tokens", "crag_eval_max_tokens",
                  "crag_rewrite_max_tokens", "crag_top_k", "contextual_max_tokens", "rerank_pool",
                  "rerank_top_n")
        for name in counts:
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("multi_query_depth", "first_stage_depth"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be positive")
        temps = ("hyde_temperature", "multi_query_temperature", "crag_eval_temperature",
                 "crag_rewrite_temperature", "contextual_temperature")
        for name in temps:
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.multi_query_rrf_k <= 0:
            raise ValueError("multi_query_rrf_k must be positive")


class Retriever(Protocol):
    name: str

    def retrieve(self, query: str, k: int) -> RankedList: ...


@dataclass
class Bm25Retriever:
    index: LexicalIndex
    params: Bm25Params = field(default_factory=Bm25Params)
    name: str = "bm25"

    def retrieve(self, query: str, k: int) -> RankedList:
        return lexical_search(self.index, query, self.params, k).with_source(self.name)


@dataclass
class DenseRetriever:
    index: VectorIndex
    embedding: EmbeddingProvider
    cache: EmbeddingCache
    name: str = "dense"

    def embed_query(self, text: str) -> np.ndarray:
        return cached_embed(self.embedding, self.cache, [text])[0]

    def retrieve(self, query: str, k: int) -> RankedList:
        return vector_search(self.index, self.embed_query(query), k).with_source(self.name)


def _depth(depth: int | None, n_docs: int, k: int) -> int:
    return max(k, depth if depth is not None else n_docs)


@dataclass
class HybridRrfRetriever:
    sparse: Bm25Retriever
    dense: DenseRetriever
    rrf: RrfConfig = field(default_factory=RrfConfig)
    depth: int | None = None
    name: str = "hybrid_rrf"

    def retrieve(self, query: str, k: int) -> RankedList:
        depth = _depth(self.depth, len(self.dense.index), k)
        lists = [self.sparse.retrieve(query, depth), self.dense.retrieve(query, depth)]
        return rrf_fuse(lists, self.rrf, k).with_source(self.name)


@dataclass
class HybridCcRetriever:
    sparse: Bm25Retriever
    dense: DenseRetriever
    convex: ConvexConfig = field(default_factory=ConvexConfig)
    depth: int | None = None
    name: str = "hybrid_cc"

    def retrieve(self, query: str, k: int) -> RankedList:
        depth = _depth(self.depth, len(self.dense.index), k)
        sparse = self.sparse.retrieve(query, depth)
        dense = self.dense.retrieve(query, depth)
        # a query sharing no term with the corpus leaves BM25 empty
        if not len(sparse):
            if self.convex.alpha == 0.0:
                return RankedList((), self.name)
            scores = {d: self.convex.alpha * v for d, v in min_max(dense).items()}
            return RankedList.from_scores(scores, self.name, k)
        return convex_fuse(sparse, dense, self.convex, k).with_source(self.name)
