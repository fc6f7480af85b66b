"""Two-stage retrieval: a first-stage candidate pool reordered by a reranker."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus import Corpus, RankedList
from ..providers import RerankProvider
from .base import Retriever, StrategyConfig


def two_stage_retrieve(
    query: str,
    first_stage: Retriever,
    reranker: RerankProvider,
    corpus: Corpus,
    cfg: StrategyConfig = StrategyConfig(),
) -> RankedList:
    """Rerank the first-stage top ``rerank_pool`` and keep the reranker's top ``rerank_top_n``.

    A pool shorter than ``rerank_pool`` is reranked as is.
    """
    pool = first_stage.retrieve(query, cfg.rerank_pool)
    if not len(pool):
        return RankedList((), "rerank")
    docs = [(doc_id, corpus[doc_id].text) for doc_id in pool.doc_ids]
    scored = reranker.rerank(query, docs, cfg.rerank_top_n)
    return RankedList.from_pairs(scored, source="rerank")


@dataclass
class TwoStageRetriever:
    first_stage: Retriever
    reranker: RerankProvider
    corpus: Corpus
    cfg: StrategyConfig = field(default_factory=StrategyConfig)
    name: str = "hybrid_rerank"

    def retrieve(self, query: str, k: int) -> RankedList:
        ranked = two_stage_retrieve(query, self.first_stage, self.reranker, self.corpus, self.cfg)
        return ranked.top(k).with_source(self.name)
