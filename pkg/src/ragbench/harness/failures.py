"""Sampling and labelling of retrieval failures (gold document missing from the top 5)."""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from ..corpus import Corpus, QuerySet
from ..providers import CompletionProvider
from .runner import MethodResult

CATEGORIES = (
    "table_structure_mismatch",
    "numerical_reasoning",
    "vocabulary_mismatch",
    "ambiguous_query",
    "long_document",
)
UNCATEGORIZED = "uncategorized"

FAILURE_DEPTH = 5

CATEGORIZE_PROMPT = """\
A retrieval system failed to return the gold document among its top 5 results.
Classify the most likely cause as exactly one of:
- table structure mismatch: the answer sits in a table whose layout does not match the question's wording
- numerical reasoning: the question needs a computation rather than a direct lookup
- vocabulary mismatch: the question and document use different terms for the same thing
- ambiguous query: the question could match many documents
- long document: the relevant content is diluted by a long document

Question: {question}

Gold document excerpt:
{document}

Category:"""


@dataclass(frozen=True)
class FailureCase:
    query_id: str
    gold_doc_id: str
    retrieved: tuple[str, ...]
    category: str = UNCATEGORIZED
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "gold_doc_id": self.gold_doc_id,
            "retrieved": list(self.retrieved),
            "category": self.category,
            "note": self.note,
        }


def find_failures(result: MethodResult, queries: QuerySet, depth: int = FAILURE_DEPTH) -> list[FailureCase]:
    out = []
    for qid in sorted(result.rankings):
        top = tuple(result.rankings[qid][:depth])
        gold = queries[qid].gold_doc_id
        if gold not in top:
            out.append(FailureCase(qid, gold, top))
    return out


def sample_failures(
    result: MethodResult, queries: QuerySet, n: int = 100, seed: int = 42
) -> list[FailureCase]:
    """Uniform sample (without replacement) of ``min(n, #failures)`` failures, fixed by ``seed``."""
    failures = find_failures(result, queries)
    return random.Random(seed).sample(failures, min(n, len(failures)))


_LABEL_RE = re.compile("|".join(c.replace("_", " ") for c in CATEGORIES))


def parse_category(text: str) -> str:
    """Earliest category phrase in ``text`` (case, ``_`` and ``-`` insensitive); else uncategorized."""
    norm = re.sub(r"[_\-\s]+", " ", text.lower())
    m = _LABEL_RE.search(norm)
    return m.group(0).replace(" ", "_") if m else UNCATEGORIZED


def categorize_failure(
    completion: CompletionProvider,
    case: FailureCase,
    queries: QuerySet | None = None,
    corpus: Corpus | None = None,
    excerpt_tokens: int = 300,
) -> FailureCase:
    """Ask the completion provider for a category; failures leave the case uncategorized with a note."""
    question = queries[case.query_id].text if queries is not None else case.query_id
    doc = corpus[case.gold_doc_id].text if corpus is not None else case.gold_doc_id
    excerpt = " ".join(doc.split()[:excerpt_tokens])
    prompt = CATEGORIZE_PROMPT.format(question=question, document=excerpt)
    try:
        out = completion.complete(prompt, 0.0, 16)
    except Exception as exc:
        return replace(case, category=UNCATEGORIZED, note=f"provider error: {exc}")
    return replace(case, category=parse_category(out))


def categorize_failures(
    completion: CompletionProvider,
    cases: Iterable[FailureCase],
    queries: QuerySet | None = None,
    corpus: Corpus | None = None,
) -> list[FailureCase]:
    return [categorize_failure(completion, c, queries, corpus) for c in cases]


def category_histogram(cases: Sequence[FailureCase]) -> dict[str, int]:
    counts = Counter(c.category for c in cases)
    return {c: counts.get(c, 0) for c in (*CATEGORIES, UNCATEGORIZED)}
