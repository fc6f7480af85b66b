"""Retrieval strategy engine and benchmark harness for text-and-table RAG."""

from .corpus import (
    Corpus,
    Document,
    Query,
    QuerySet,
    RankedList,
    Subset,
    corpus_stats,
    load_corpus,
    load_queries,
)
from .fusion import ConvexConfig, RrfConfig, convex_fuse, rrf_fuse
from .lexical import Bm25Params, LexicalIndex, TokenizerConfig, build_lexical_index, lexical_search, tokenize
from .vector import VectorIndex, build_vector_index, vector_search

__version__ = "0.1.0"

__all__ = [
    "Bm25Params",
    "ConvexConfig",
    "Corpus",
    "Document",
    "LexicalIndex",
    "Query",
    "QuerySet",
    "RankedList",
    "RrfConfig",
    "Subset",
    "TokenizerConfig",
    "VectorIndex",
    "build_lexical_index",
    "build_vector_index",
    "convex_fuse",
    "corpus_stats",
    "lexical_search",
    "load_corpus",
    "load_queries",
    "rrf_fuse",
    "tokenize",
    "vector_search",
]
