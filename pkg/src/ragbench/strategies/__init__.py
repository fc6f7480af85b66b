from .base import (
    Bm25Retriever,
    DenseRetriever,
    HybridCcRetriever,
    HybridRrfRetriever,
    Retriever,
    StrategyConfig,
)
from .contextual import AlreadyContextualizedError, contextualize_corpus, contextualize_document
from .corrective import CragRetriever, CragTrace, RelevanceLabel, crag_retrieve, parse_label
from .expansion import (
    HydeRetriever,
    MultiQueryRetriever,
    hyde_retrieve,
    multi_query_retrieve,
    parse_variants,
)
from .prompts import PromptLibrary, render
from .rerank import TwoStageRetriever, two_stage_retrieve

__all__ = [
    "AlreadyContextualizedError",
    "Bm25Retriever",
    "CragRetriever",
    "CragTrace",
    "DenseRetriever",
    "HybridCcRetriever",
    "HybridRrfRetriever",
    "HydeRetriever",
    "MultiQueryRetriever",
    "PromptLibrary",
    "RelevanceLabel",
    "Retriever",
    "StrategyConfig",
    "TwoStageRetriever",
    "contextualize_corpus",
    "contextualize_document",
    "crag_retrieve",
    "hyde_retrieve",
    "multi_query_retrieve",
    "parse_label",
    "parse_variants",
    "render",
    "two_stage_retrieve",
]
