"""Provider contracts, errors, and the call ledger."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np


class ProviderError(RuntimeError):
    """A provider call failed. ``retryable`` tells the retry loop whether to try again."""

    retryable = True


class PermanentProviderError(ProviderError):
    retryable = False


class DimensionMismatchError(ProviderError):
    retryable = False


class OfflineViolationError(PermanentProviderError):
    """A network provider was used while running in offline mode."""


@runtime_checkable
class EmbeddingProvider(Protocol):
    model_id: str
    dimension: int

    def embed(self, texts: Sequence[str]) -> Sequence[np.ndarray]: ...


@runtime_checkable
class CompletionProvider(Protocol):
    model_id: str

    def complete(self, prompt: str, temperature: float = 0.0, max_tokens: int = 256) -> str: ...


@runtime_checkable
class RerankProvider(Protocol):
    model_id: str

    def rerank(
        self, query: str, documents: Sequence[tuple[str, str]], top_n: int
    ) -> list[tuple[str, float]]:
        """Order ``(doc_id, text)`` pairs by relevance; return at most ``top_n`` (doc_id, score)."""
        ...


@dataclass(frozen=True)
class CallRecord:
    kind: str
    model_id: str
    items: int
    chars: int
    ok: bool = True


class CallLedger:
    """Thread-safe log of every external call attempt."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._records: list[CallRecord] = []

    def record(self, kind: str, model_id: str, items: int, chars: int, ok: bool = True) -> None:
        with self._lock:
            self._records.append(CallRecord(kind, model_id, items, chars, ok))

    @property
    def records(self) -> list[CallRecord]:
        with self._lock:
            return sorted(self._records, key=lambda r: (r.kind, r.model_id, r.items, r.chars, r.ok))

    def count(self, kind: str | None = None, ok: bool | None = True) -> int:
        with self._lock:
            return sum(
                1
                for r in self._records
                if (kind is None or r.kind == kind) and (ok is None or r.ok == ok)
            )

    def summary(self) -> dict[str, dict[str, int]]:
        """Per ``kind:model_id`` totals of calls, failed calls, items, and payload characters."""
        out: dict[str, dict[str, int]] = {}
        for r in self.records:
            row = out.setdefault(
                f"{r.kind}:{r.model_id}", {"calls": 0, "failed": 0, "items": 0, "chars": 0}
            )
            row["calls"] += 1
            row["failed"] += 0 if r.ok else 1
            row["items"] += r.items
            row["chars"] += r.chars
        return dict(sorted(out.items()))

    def reset(self) -> None:
        with self._lock:
            self._records.clear()
