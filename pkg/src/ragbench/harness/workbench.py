"""Lazily built indexes and retrievers shared across runs of one corpus."""

from __future__ import annotations

import threading

from ..corpus import Corpus, QuerySet
from ..lexical import LexicalIndex, build_lexical_index
from ..providers import ProviderBundle, cached_embed
from ..strategies import (
    Bm25Retriever,
    CragRetriever,
    DenseRetriever,
    HybridCcRetriever,
    HybridRrfRetriever,
    HydeRetriever,
    MultiQueryRetriever,
    PromptLibrary,
    Retriever,
    TwoStageRetriever,
    contextualize_corpus,
)
from ..vector import VectorIndex, build_vector_index
from .config import METHODS, ConfigError, ExperimentConfig
from .offline import build_providers


class Workbench:
    """Owns the providers plus every index derived from one corpus.

    Indexes are built on first use and reused by later runs, so sweeps and
    multi-method runs share embeddings and the contextualized corpus.
    """

    def __init__(
        self,
        cfg: ExperimentConfig,
        corpus: Corpus,
        queries: QuerySet | None = None,
        providers: ProviderBundle | None = None,
        prompts: PromptLibrary | None = None,
    ):
        self.cfg = cfg
        self.corpus = corpus
        self.queries = queries
        self.providers = providers if providers is not None else build_providers(cfg, queries)
        if prompts is None:
            prompts = (
                PromptLibrary.from_directory(cfg.paths.prompts_dir) if cfg.paths.prompts_dir else PromptLibrary()
            )
        self.prompts = prompts
        self._lexical: dict[tuple, LexicalIndex] = {}
        self._vector: dict[bool, VectorIndex] = {}
        self._contextual: Corpus | None = None
        self._lock = threading.RLock()

    def contextual_corpus(self) -> Corpus:
        with self._lock:
            if self._contextual is None:
                if self.corpus.contextualized:
                    self._contextual = self.corpus
                else:
                    self._contextual = contextualize_corpus(
                        self.corpus,
                        self._completion(),
                        self.cfg.strategy,
                        self.prompts,
                        workers=self.cfg.workers,
                    )
            return self._contextual

    def use_contextual_corpus(self, corpus: Corpus) -> None:
        """Install a precomputed contextualized corpus (same doc ids)."""
        if corpus.doc_ids != self.corpus.doc_ids:
            raise ValueError("contextualized corpus must keep the original doc ids and order")
        with self._lock:
            self._contextual = corpus
            self._lexical = {k: v for k, v in self._lexical.items() if not k[0]}
            self._vector.pop(True, None)

    def _corpus(self, contextual: bool) -> Corpus:
        return self.contextual_corpus() if contextual else self.corpus

    def lexical_index(self, contextual: bool = False) -> LexicalIndex:
        key = (contextual, self.cfg.tokenizer)
        with self._lock:
            if key not in self._lexical:
                self._lexical[key] = build_lexical_index(self._corpus(contextual), self.cfg.tokenizer)
            return self._lexical[key]

    def vector_index(self, contextual: bool = False) -> VectorIndex:
        with self._lock:
            if contextual not in self._vector:
                corpus = self._corpus(contextual)
                p = self.providers
                vectors = cached_embed(p.embedding, p.cache, [d.text for d in corpus])
                self._vector[contextual] = build_vector_index(zip(corpus.doc_ids, vectors))
            return self._vector[contextual]

    def _completion(self):
        if self.providers.completion is None:
            raise ConfigError("this method needs a completion provider")
        return self.providers.completion

    def prepare(self, method: str) -> None:
        """Build every index ``method`` needs, so later calls are query-time only."""
        if method in ("bm25", "hybrid_rrf", "hybrid_cc", "hybrid_rerank", "crag"):
            self.lexical_index()
        if method in ("dense", "hybrid_rrf", "hybrid_cc", "hybrid_rerank", "hyde", "multi_query", "crag"):
            self.vector_index()
        if method == "contextual_hybrid":
            self.lexical_index(contextual=True)
        if method in ("contextual_dense", "contextual_hybrid"):
            self.vector_index(contextual=True)

    def retriever(self, method: str, cfg: ExperimentConfig | None = None) -> Retriever:
        """Retriever for ``method`` under ``cfg`` (defaults to the workbench config)."""
        cfg = cfg or self.cfg
        if method not in METHODS or method == "oracle":
            raise ConfigError(f"no retriever for method {method!r}")
        p = self.providers
        depth = cfg.strategy.first_stage_depth

        def bm25(contextual: bool = False) -> Bm25Retriever:
            return Bm25Retriever(self.lexical_index(contextual), cfg.bm25)

        def dense(contextual: bool = False) -> DenseRetriever:
            return DenseRetriever(self.vector_index(contextual), p.embedding, p.cache)

        def hybrid(contextual: bool = False) -> HybridRrfRetriever:
            return HybridRrfRetriever(bm25(contextual), dense(contextual), cfg.rrf, depth)

        if method == "bm25":
            return bm25()
        if method == "dense":
            return dense()
        if method == "hybrid_rrf":
            return hybrid()
        if method == "hybrid_cc":
            return HybridCcRetriever(bm25(), dense(), cfg.convex, depth)
        if method == "hybrid_rerank":
            if p.rerank is None:
                raise ConfigError("hybrid_rerank needs a rerank provider")
            return TwoStageRetriever(hybrid(), p.rerank, self.corpus, cfg.strategy)
        if method == "hyde":
            return HydeRetriever(self._completion(), dense(), cfg.strategy, self.prompts)
        if method == "multi_query":
            return MultiQueryRetriever(self._completion(), dense(), cfg.strategy, self.prompts)
        if method == "contextual_dense":
            return DenseRetriever(self.vector_index(True), p.embedding, p.cache, name="contextual_dense")
        if method == "contextual_hybrid":
            r = hybrid(contextual=True)
            r.name = "contextual_hybrid"
            return r
        # crag
        return CragRetriever(hybrid(), self._completion(), self.corpus, cfg.strategy, self.prompts)
