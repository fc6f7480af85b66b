"""Persistent embedding cache keyed by (model_id, text) digests."""

from __future__ import annotations

import hashlib
import os
import struct
import threading
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .base import DimensionMismatchError, EmbeddingProvider, PermanentProviderError

MAGIC = b"RAGEMB1"
VERSION = 1
_DIM = struct.Struct("<I")


def cache_key(model_id: str, text: str) -> bytes:
    """32-byte SHA-256 digest of ``model_id`` NUL ``text``."""
    return hashlib.sha256(model_id.encode("utf-8") + b"\x00" + text.encode("utf-8")).digest()


class EmbeddingCache:
    """In-memory map from cache key to float32 vector, persisted in a flat binary file.

    File layout: ``RAGEMB1`` + version byte, then records of
    (32-byte key, uint32 LE dimension, dimension float32 LE values).
    Vectors are stored exactly as the provider returned them (no normalization).
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[bytes, np.ndarray] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._entries = dict(_read(self.path))

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: object) -> bool:
        return key in self._entries

    def keys(self) -> list[bytes]:
        return list(self._entries)

    def get(self, key: bytes) -> np.ndarray | None:
        return self._entries.get(key)

    def put(self, key: bytes, vector: np.ndarray) -> None:
        if len(key) != 32:
            raise ValueError("cache keys are 32-byte digests")
        vec = np.asarray(vector, dtype="<f4").copy()
        vec.setflags(write=False)
        with self._lock:
            self._entries[key] = vec

    def save(self, path: str | Path | None = None) -> Path:
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no cache path configured")
        with self._lock:
            items = sorted(self._entries.items())
        tmp = target.with_name(target.name + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(MAGIC + bytes([VERSION]))
            for key, vec in items:
                fh.write(key)
                fh.write(_DIM.pack(len(vec)))
                fh.write(np.asarray(vec, dtype="<f4").tobytes())
        os.replace(tmp, target)
        return target

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingCache":
        if not Path(path).exists():
            raise FileNotFoundError(path)
        return cls(path)


def _read(path: Path) -> Iterator[tuple[bytes, np.ndarray]]:
    data = path.read_bytes()
    header = len(MAGIC) + 1
    if data[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{path}: not an embedding cache file")
    if data[len(MAGIC)] != VERSION:
        raise ValueError(f"{path}: unsupported cache version {data[len(MAGIC)]}")
    pos = header
    while pos < len(data):
        if pos + 36 > len(data):
            raise ValueError(f"{path}: truncated record at byte {pos}")
        key = data[pos : pos + 32]
        (dim,) = _DIM.unpack_from(data, pos + 32)
        pos += 36
        end = pos + 4 * dim
        if end > len(data):
            raise ValueError(f"{path}: truncated vector at byte {pos}")
        vec = np.frombuffer(data[pos:end], dtype="<f4").copy()
        vec.setflags(write=False)
        yield key, vec
        pos = end


def cached_embed(
    provider: EmbeddingProvider,
    cache: EmbeddingCache,
    texts: Sequence[str],
    batch_size: int = 64,
) -> list[np.ndarray]:
    """Embed ``texts`` through ``cache``; only misses reach the provider.

    Misses are de-duplicated and sent in batches of ``batch_size``. Output
    order matches input order and every vector is float32.
    """
    for t in texts:
        if not isinstance(t, str) or not t:
            raise ValueError("texts must be non-empty strings")
    keys = [cache_key(provider.model_id, t) for t in texts]
    misses: dict[bytes, str] = {}
    for key, text in zip(keys, texts):
        if key not in cache and key not in misses:
            misses[key] = text
    pending = list(misses.items())
    for start in range(0, len(pending), batch_size):
        chunk = pending[start : start + batch_size]
        vectors = list(provider.embed([t for _, t in chunk]))
        if len(vectors) != len(chunk):
            raise DimensionMismatchError(
                f"provider returned {len(vectors)} vectors for {len(chunk)} texts"
            )
        for (key, _), vec in zip(chunk, vectors):
            arr = np.asarray(vec)
            if arr.ndim != 1 or arr.shape[0] != provider.dimension:
                raise DimensionMismatchError(
                    f"expected dimension {provider.dimension}, got shape {arr.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise PermanentProviderError("provider returned non-finite components")
            cache.put(key, arr)
    return [cache.get(k) for k in keys]  # type: ignore[misc]
