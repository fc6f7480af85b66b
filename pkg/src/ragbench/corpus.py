"""Documents, queries, and the ranked-list type shared by every retriever."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence


class Subset(str, Enum):
    FINQA = "FinQA"
    CONVFINQA = "ConvFinQA"
    TATDQA = "TATDQA"
    OTHER = "Other"

    @classmethod
    def parse(cls, label: Any) -> "Subset":
        key = "".join(ch for ch in str(label).lower() if ch.isalnum())
        return _SUBSET_KEYS.get(key, cls.OTHER)


_SUBSET_KEYS = {
    "finqa": Subset.FINQA,
    "convfinqa": Subset.CONVFINQA,
    "tatdqa": Subset.TATDQA,
}


class CorpusError(ValueError):
    """Raised for invalid document or query records."""

    def __init__(self, message: str, index: int | None = None):
        if index is not None:
            message = f"record {index}: {message}"
        super().__init__(message)
        self.index = index


class DuplicateIdError(CorpusError):
    pass


class MalformedRecordError(CorpusError):
    pass


class UnknownGoldError(CorpusError):
    pass


class InvalidAnswerError(CorpusError):
    pass


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    subset: Subset = Subset.OTHER
    # LLM summary prepended by contextualization; None for raw documents
    context: str | None = None

    @property
    def token_count(self) -> int:
        return len(self.text.split())

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {"doc_id": self.doc_id, "text": self.text, "subset": self.subset.value}
        if self.context is not None:
            rec["context"] = self.context
        return rec


@dataclass(frozen=True)
class Query:
    query_id: str
    text: str
    gold_doc_id: str
    gold_answer: float
    subset: Subset = Subset.OTHER

    def to_record(self) -> dict[str, Any]:
        return {
            "query_id": self.query_id,
            "text": self.text,
            "gold_doc_id": self.gold_doc_id,
            "gold_answer": self.gold_answer,
            "subset": self.subset.value,
        }


class Corpus:
    """Ordered, immutable collection of documents with an id index."""

    def __init__(self, documents: Iterable[Document]):
        docs = tuple(documents)
        index: dict[str, int] = {}
        for pos, doc in enumerate(docs):
            if not doc.doc_id:
                raise MalformedRecordError("empty doc_id", pos)
            if not doc.text:
                raise MalformedRecordError(f"empty text for {doc.doc_id!r}", pos)
            if doc.doc_id in index:
                raise DuplicateIdError(f"duplicate doc_id {doc.doc_id!r}", pos)
            index[doc.doc_id] = pos
        self._docs = docs
        self._index = index

    @property
    def documents(self) -> tuple[Document, ...]:
        return self._docs

    @property
    def index(self) -> Mapping[str, int]:
        return self._index

    @property
    def contextualized(self) -> bool:
        return any(d.context is not None for d in self._docs)

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs)

    def __getitem__(self, doc_id: str) -> Document:
        return self._docs[self._index[doc_id]]

    def __contains__(self, doc_id: object) -> bool:
        return doc_id in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Corpus) and self._docs == other._docs

    def __hash__(self) -> int:
        return hash(self._docs)

    def __repr__(self) -> str:
        return f"Corpus({len(self)} documents)"

    @property
    def doc_ids(self) -> list[str]:
        return [d.doc_id for d in self._docs]


class QuerySet:
    """Queries validated against a corpus; iteration follows insertion order."""

    def __init__(self, queries: Iterable[Query], corpus: Corpus):
        qs = tuple(queries)
        seen: set[str] = set()
        for pos, q in enumerate(qs):
            if q.query_id in seen:
                raise DuplicateIdError(f"duplicate query_id {q.query_id!r}", pos)
            if q.gold_doc_id not in corpus:
                raise UnknownGoldError(
                    f"gold_doc_id {q.gold_doc_id!r} of query {q.query_id!r} not in corpus", pos
                )
            seen.add(q.query_id)
        self._queries = qs
        self._by_id = {q.query_id: q for q in qs}

    def __len__(self) -> int:
        return len(self._queries)

    def __iter__(self) -> Iterator[Query]:
        return iter(self._queries)

    def __getitem__(self, query_id: str) -> Query:
        return self._by_id[query_id]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuerySet) and self._queries == other._queries

    def __hash__(self) -> int:
        return hash(self._queries)

    @property
    def queries(self) -> tuple[Query, ...]:
        return self._queries

    def subset(self, query_ids: Iterable[str]) -> list[Query]:
        return [self._by_id[qid] for qid in query_ids]


@dataclass(frozen=True)
class RankedList:
    """Ranked (doc_id, score) entries ordered by score desc, then doc_id asc.

    Build instances with :meth:`from_scores` or :meth:`from_pairs` unless the
    entries are already known to be in canonical order.
    """

    entries: tuple[tuple[str, float], ...] = ()
    source: str = ""

    def __post_init__(self) -> None:
        seen: set[str] = set()
        prev: tuple[str, float] | None = None
        for doc_id, score in self.entries:
            if not math.isfinite(score):
                raise ValueError(f"non-finite score for {doc_id!r}")
            if doc_id in seen:
                raise ValueError(f"duplicate doc_id {doc_id!r} in ranked list")
            seen.add(doc_id)
            if prev is not None and (score > prev[1] or (score == prev[1] and doc_id < prev[0])):
                raise ValueError("entries are not in (score desc, doc_id asc) order")
            prev = (doc_id, score)

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, float]], source: str = "", k: int | None = None
    ) -> "RankedList":
        ordered = sorted(((d, float(s)) for d, s in pairs), key=lambda e: (-e[1], e[0]))
        if k is not None:
            ordered = ordered[:k]
        return cls(tuple(ordered), source)

    @classmethod
    def from_scores(
        cls, scores: Mapping[str, float], source: str = "", k: int | None = None
    ) -> "RankedList":
        return cls.from_pairs(scores.items(), source, k)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(self.entries)

    @property
    def doc_ids(self) -> list[str]:
        return [d for d, _ in self.entries]

    @property
    def scores(self) -> list[float]:
        return [s for _, s in self.entries]

    def rank_of(self, doc_id: str) -> int | None:
        """1-based rank of ``doc_id``, or None when absent."""
        for i, (d, _) in enumerate(self.entries, start=1):
            if d == doc_id:
                return i
        return None

    def top(self, k: int) -> "RankedList":
        return RankedList(self.entries[:k], self.source)

    def with_source(self, source: str) -> "RankedList":
        return RankedList(self.entries, source)


# ---------------------------------------------------------------------------
# record streams


def _require(rec: Mapping[str, Any], fields: Sequence[str], index: int) -> None:
    if not isinstance(rec, Mapping):
        raise MalformedRecordError("record is not an object", index)
    missing = [f for f in fields if f not in rec]
    if missing:
        raise MalformedRecordError(f"missing field(s) {', '.join(missing)}", index)


def iter_jsonl(path: str | Path) -> Iterator[dict[str, Any]]:
    """Yield one JSON object per non-blank line of a UTF-8 file."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecordError(f"invalid JSON ({exc.msg})", lineno) from exc


def write_jsonl(path: str | Path, records: Iterable[Mapping[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def load_corpus(source: Iterable[Mapping[str, Any]] | str | Path) -> Corpus:
    """Build a :class:`Corpus` from document records or a JSONL path.

    Records need ``doc_id``, ``text`` and ``subset``; extra fields are ignored
    except ``context``, which marks an already contextualized document.
    """
    if isinstance(source, (str, Path)):
        source = iter_jsonl(source)
    docs = []
    for i, rec in enumerate(source):
        _require(rec, ("doc_id", "text", "subset"), i)
        doc_id, text = rec["doc_id"], rec["text"]
        if not isinstance(doc_id, str) or not doc_id:
            raise MalformedRecordError("doc_id must be a non-empty string", i)
        if not isinstance(text, str) or not text.strip():
            raise MalformedRecordError(f"empty text for {doc_id!r}", i)
        context = rec.get("context")
        docs.append(Document(doc_id, text, Subset.parse(rec["subset"]), context))
    return Corpus(docs)


def _parse_answer(value: Any, index: int) -> float:
    if isinstance(value, bool):
        raise InvalidAnswerError(f"gold_answer {value!r} is not numeric", index)
    try:
        num = float(Decimal(str(value).strip()))
    except (InvalidOperation, ValueError) as exc:
        raise InvalidAnswerError(f"gold_answer {value!r} is not numeric", index) from exc
    if not math.isfinite(num):
        raise InvalidAnswerError(f"gold_answer {value!r} is not finite", index)
    return num


def load_queries(source: Iterable[Mapping[str, Any]] | str | Path, corpus: Corpus) -> QuerySet:
    """Parse query records and resolve every gold document against ``corpus``."""
    if isinstance(source, (str, Path)):
        source = iter_jsonl(source)
    queries = []
    for i, rec in enumerate(source):
        _require(rec, ("query_id", "text", "gold_doc_id", "gold_answer", "subset"), i)
        queries.append(
            Query(
                query_id=str(rec["query_id"]),
                text=str(rec["text"]),
                gold_doc_id=str(rec["gold_doc_id"]),
                gold_answer=_parse_answer(rec["gold_answer"], i),
                subset=Subset.parse(rec["subset"]),
            )
        )
    return QuerySet(queries, corpus)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    write_jsonl(path, (d.to_record() for d in corpus))


def save_queries(queries: Iterable[Query], path: str | Path) -> None:
    write_jsonl(path, (q.to_record() for q in queries))


@dataclass(frozen=True)
class CorpusStats:
    count: int
    mean_tokens: float
    per_subset: dict[str, int] = field(default_factory=dict)


def corpus_stats(corpus: Corpus) -> CorpusStats:
    if len(corpus) == 0:
        raise CorpusError("corpus is empty")
    counts = [d.token_count for d in corpus]
    per_subset = Counter(d.subset.value for d in corpus)
    return CorpusStats(len(counts), sum(counts) / len(counts), dict(sorted(per_subset.items())))
