"""Single-relevant-document rank metrics and their per-query aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from ..corpus import RankedList

DEFAULT_CUTOFFS = (1, 3, 5, 10, 20)

Ranking = Union[RankedList, Sequence[str]]


def gold_rank(ranked: Ranking, gold: str) -> int | None:
    """1-based position of ``gold`` in ``ranked``; None when absent."""
    ids = ranked.doc_ids if isinstance(ranked, RankedList) else ranked
    for i, doc_id in enumerate(ids, start=1):
        if doc_id == gold:
            return i
    return None


def _check(k: int) -> None:
    if k < 1:
        raise ValueError("k must be >= 1")


def recall_at_k(ranked: Ranking, gold: str, k: int) -> float:
    _check(k)
    r = gold_rank(ranked, gold)
    return 1.0 if r is not None and r <= k else 0.0


def mrr_at_k(ranked: Ranking, gold: str, k: int) -> float:
    _check(k)
    r = gold_rank(ranked, gold)
    return 1.0 / r if r is not None and r <= k else 0.0


def ndcg_at_k(ranked: Ranking, gold: str, k: int) -> float:
    # one relevant document: ideal DCG is 1
    _check(k)
    r = gold_rank(ranked, gold)
    return 1.0 / math.log2(r + 1) if r is not None and r <= k else 0.0


def average_precision(ranked: Ranking, gold: str) -> float:
    r = gold_rank(ranked, gold)
    return 1.0 / r if r is not None else 0.0


def metric_names(cutoffs: Sequence[int] = DEFAULT_CUTOFFS) -> list[str]:
    names = []
    for prefix in ("recall", "mrr", "ndcg"):
        names.extend(f"{prefix}@{k}" for k in cutoffs)
    names.append("map")
    return names


def query_metrics(ranked: Ranking, gold: str, cutoffs: Sequence[int] = DEFAULT_CUTOFFS) -> dict[str, float]:
    """Every rank metric for one query, keyed as ``recall@5``, ``mrr@3``, ``map`` ..."""
    out: dict[str, float] = {}
    for k in cutoffs:
        out[f"recall@{k}"] = recall_at_k(ranked, gold, k)
    for k in cutoffs:
        out[f"mrr@{k}"] = mrr_at_k(ranked, gold, k)
    for k in cutoffs:
        out[f"ndcg@{k}"] = ndcg_at_k(ranked, gold, k)
    out["map"] = average_precision(ranked, gold)
    return out


@dataclass
class MetricReport:
    """Per-query metric values with their means; aggregates are always recomputed."""

    per_query: dict[str, dict[str, float]]
    cutoffs: tuple[int, ...] = DEFAULT_CUTOFFS
    metrics: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.metrics:
            names: dict[str, None] = {}
            for row in self.per_query.values():
                names.update(dict.fromkeys(row))
            self.metrics = list(names)

    @property
    def query_ids(self) -> list[str]:
        return sorted(self.per_query)

    def values(self, metric: str, query_ids: Iterable[str] | None = None) -> list[float]:
        ids = self.query_ids if query_ids is None else list(query_ids)
        return [self.per_query[q][metric] for q in ids]

    @property
    def aggregates(self) -> dict[str, float]:
        return {m: mean(self.values(m)) for m in self.metrics}

    def restricted(self, query_ids: Iterable[str]) -> "MetricReport":
        ids = set(query_ids)
        return MetricReport({q: v for q, v in self.per_query.items() if q in ids}, self.cutoffs, list(self.metrics))


def mean(values: Sequence[float]) -> float:
    # math.fsum keeps the mean independent of summation order
    return math.fsum(values) / len(values) if values else 0.0


def evaluate_rankings(
    rankings: Mapping[str, Ranking],
    golds: Mapping[str, str],
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
) -> MetricReport:
    per_query = {qid: query_metrics(rankings[qid], golds[qid], cutoffs) for qid in sorted(rankings)}
    return MetricReport(per_query, tuple(cutoffs), metric_names(cutoffs))
