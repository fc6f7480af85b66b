"""Exact inner-product search over unit-normalized document embeddings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import RankedList


class VectorIndexError(ValueError):
    pass


@dataclass(frozen=True)
class VectorIndex:
    """Row-per-document matrix of float32 unit vectors.

    ``_rows64`` is a float64 copy of ``rows`` used for scoring, so sums are
    accumulated in double precision over the stored single-precision values.
    """

    rows: np.ndarray
    row_ids: tuple[str, ...]
    _rows64: np.ndarray
    _id_order: np.ndarray  # rank of each row's doc_id in ascending doc_id order

    @property
    def dimension(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return len(self.row_ids)


def _as_vector(vec, what: str) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise VectorIndexError(f"{what} must be a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise VectorIndexError(f"{what} has non-finite components")
    return arr


def build_vector_index(vectors: Iterable[tuple[str, Sequence[float]]]) -> VectorIndex:
    """L2-normalize and stack ``(doc_id, vector)`` pairs."""
    ids: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    dim = None
    for doc_id, vec in vectors:
        arr = _as_vector(vec, f"vector for {doc_id!r}")
        if dim is None:
            dim = arr.shape[0]
        elif arr.shape[0] != dim:
            raise VectorIndexError(f"dimension mismatch for {doc_id!r}: {arr.shape[0]} != {dim}")
        if doc_id in seen:
            raise VectorIndexError(f"duplicate doc_id {doc_id!r}")
        norm = np.linalg.norm(arr)
        if norm == 0.0:
            raise VectorIndexError(f"zero vector for {doc_id!r} cannot be normalized")
        seen.add(doc_id)
        ids.append(doc_id)
        rows.append(arr / norm)
    if not rows:
        raise VectorIndexError("no vectors to index")
    mat = np.vstack(rows).astype(np.float32)
    mat.setflags(write=False)
    rows64 = mat.astype(np.float64)
    rows64.setflags(write=False)
    order = np.empty(len(ids), dtype=np.int64)
    order[np.argsort(np.asarray(ids, dtype=object), kind="stable")] = np.arange(len(ids))
    return VectorIndex(mat, tuple(ids), rows64, order)


def vector_scores(index: VectorIndex, query_vector: Sequence[float]) -> np.ndarray:
    """Cosine similarity of the (normalized) query against every row."""
    q = _as_vector(query_vector, "query vector")
    if q.shape[0] != index.dimension:
        raise VectorIndexError(f"query dimension {q.shape[0]} != index dimension {index.dimension}")
    norm = np.linalg.norm(q)
    if norm == 0.0:
        raise VectorIndexError("zero query vector")
    q = (q / norm).astype(np.float32).astype(np.float64)
    return index._rows64 @ q


def top_k(scores: np.ndarray, id_order: np.ndarray, k: int) -> np.ndarray:
    """Row positions of the ``k`` best scores, ties broken by ascending doc_id."""
    n = scores.shape[0]
    if k < n:
        cut = np.partition(scores, n - k)[n - k]
        cand = np.flatnonzero(scores >= cut)
    else:
        cand = np.arange(n)
    order = np.lexsort((id_order[cand], -scores[cand]))
    return cand[order[:k]]


def vector_search(index: VectorIndex, query_vector: Sequence[float], k: int) -> RankedList:
    if k < 1:
        raise ValueError("k must be a positive integer")
    scores = vector_scores(index, query_vector)
    best = top_k(scores, index._id_order, k)
    return RankedList(tuple((index.row_ids[i], float(scores[i])) for i in best), source="dense")
