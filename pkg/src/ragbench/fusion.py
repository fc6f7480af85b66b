"""Reciprocal rank fusion and min-max convex combination of ranked lists."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import RankedList


@dataclass(frozen=True)
class RrfConfig:
    k_rrf: float = 60.0

    def __post_init__(self) -> None:
        if not self.k_rrf > 0:
            raise ValueError(f"k_rrf must be positive, got {self.k_rrf}")


@dataclass(frozen=True)
class ConvexConfig:
    alpha: float = 0.5  # weight of the dense list
    normalization: str = "min_max"

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.normalization != "min_max":
            raise ValueError(f"unsupported normalization {self.normalization!r}")


def rrf_fuse(lists: Sequence[RankedList], cfg: RrfConfig = RrfConfig(), k: int = 10) -> RankedList:
    """Score each document in the union by sum of 1 / (k_rrf + rank) over the lists holding it."""
    if len(lists) < 2:
        raise ValueError("rrf_fuse needs at least two ranked lists")
    if k < 1:
        raise ValueError("k must be a positive integer")
    fused: dict[str, float] = {}
    for ranked in lists:
        for rank, (doc_id, _) in enumerate(ranked, start=1):
            fused[doc_id] = fused.get(doc_id, 0.0) + 1.0 / (cfg.k_rrf + rank)
    return RankedList.from_scores(fused, source="rrf", k=k)


def min_max(ranked: RankedList) -> dict[str, float]:
    """Rescale a list's scores onto [0, 1]; a constant-score list maps to all ones."""
    if not len(ranked):
        return {}
    scores = ranked.scores
    lo, hi = min(scores), max(scores)
    if hi == lo:
        return {d: 1.0 for d in ranked.doc_ids}
    return {d: (s - lo) / (hi - lo) for d, s in ranked}


def convex_fuse(
    sparse: RankedList, dense: RankedList, cfg: ConvexConfig = ConvexConfig(), k: int = 10
) -> RankedList:
    """alpha * dense + (1 - alpha) * sparse over min-max normalized scores; absent docs get 0."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not len(sparse) or not len(dense):
        raise ValueError("convex_fuse needs two non-empty ranked lists")
    s_norm, d_norm = min_max(sparse), min_max(dense)
    # a list carrying zero weight adds no candidates, so alpha in {0, 1} reproduces one retriever
    pool: set[str] = set()
    if cfg.alpha < 1.0:
        pool |= s_norm.keys()
    if cfg.alpha > 0.0:
        pool |= d_norm.keys()
    fused = {
        doc: cfg.alpha * d_norm.get(doc, 0.0) + (1.0 - cfg.alpha) * s_norm.get(doc, 0.0)
        for doc in pool
    }
    return RankedList.from_scores(fused, source="cc", k=k)
