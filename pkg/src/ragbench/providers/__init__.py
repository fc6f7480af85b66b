from .base import (
    CallLedger,
    CallRecord,
    CompletionProvider,
    DimensionMismatchError,
    EmbeddingProvider,
    OfflineViolationError,
    PermanentProviderError,
    ProviderError,
    RerankProvider,
)
from .cache import EmbeddingCache, cache_key, cached_embed
from .managed import ManagedCompletion, ManagedEmbedding, ManagedRerank, ProviderBundle
from .mock import HashEmbedder, OracleReranker, ScriptedCompletion, ScriptError, hash_embedder
from .policy import RateLimiter, RequestPolicy, RetryError, with_retry

__all__ = [
    "CallLedger",
    "CallRecord",
    "CompletionProvider",
    "DimensionMismatchError",
    "EmbeddingCache",
    "EmbeddingProvider",
    "HashEmbedder",
    "ManagedCompletion",
    "ManagedEmbedding",
    "ManagedRerank",
    "OfflineViolationError",
    "OracleReranker",
    "PermanentProviderError",
    "ProviderBundle",
    "ProviderError",
    "RateLimiter",
    "RequestPolicy",
    "RerankProvider",
    "RetryError",
    "ScriptError",
    "ScriptedCompletion",
    "cache_key",
    "cached_embed",
    "hash_embedder",
    "with_retry",
]
