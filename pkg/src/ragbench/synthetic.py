"""Seeded synthetic corpora for offline tests, demos, and the mock pipeline.

Words are random pseudo-words, so no two documents share vocabulary by
accident. Two kinds of queries are planted:

* lexical queries name a rare code word found only in a long gold document,
  while their other words are inflections of stems that a handful of short
  decoy documents use in a different form. BM25 finds the gold document via
  the code word; the hash embedder, which also sees character trigrams, is
  pulled towards the decoys.
* semantic queries inflect the stems of a short gold document differently
  (no exact token overlap apart from one shared marker word), and also carry
  two marker words that long decoy documents repeat. BM25 prefers the decoys;
  the embedder matches the gold document's word fragments.

Each method therefore misses a disjoint half of the queries, and rank fusion
recovers both halves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, Document, Query, QuerySet, Subset

_CONSONANTS = "bcdfghjklmnpqrstvwxz"
_VOWELS = "aeiouy"
_SUBSETS = (Subset.FINQA, Subset.CONVFINQA, Subset.TATDQA)


@dataclass(frozen=True)
class SyntheticBenchmark:
    corpus: Corpus
    queries: QuerySet
    lexical_ids: tuple[str, ...]
    semantic_ids: tuple[str, ...]


class _Words:
    """Unique pronounceable pseudo-words drawn from one generator."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.seen: set[str] = set()

    def __call__(self, syllables: int = 3) -> str:
        while True:
            w = "".join(
                self.rng.choice(list(_CONSONANTS)) + self.rng.choice(list(_VOWELS)) for _ in range(syllables)
            )
            if w not in self.seen:
                self.seen.add(w)
                return w


def _amount(rng: np.random.Generator) -> float:
    return round(float(rng.uniform(1, 999)), 1)


def synthetic_benchmark(
    n_docs: int = 200,
    n_queries: int = 50,
    seed: int = 42,
    group_size: int = 5,
    decoys: int = 5,
) -> SyntheticBenchmark:
    """Build a corpus of ``n_docs`` documents and ``n_queries`` planted queries.

    The first half of the queries is lexical, the rest semantic; they come in groups of ``group_size``
    sharing one set of ``decoys`` decoy documents. Every gold document states
    its answer as its first number, so oracle-context generation is exact.
    """
    n_lex = (n_queries + 1) // 2
    n_sem = n_queries // 2
    n_groups = -(-n_lex // group_size) + -(-n_sem // group_size)
    needed = n_queries + n_groups * decoys
    if n_docs < needed:
        raise ValueError(f"need at least {needed} documents for {n_queries} queries")

    rng = np.random.default_rng(seed)
    word = _Words(rng)
    filler = [word() for _ in range(400)]

    def fill(n: int) -> list[str]:
        return [filler[i] for i in rng.integers(0, len(filler), n)]

    docs: list[tuple[str, str]] = []  # (text, kind) in creation order, ids assigned after shuffling
    queries: list[tuple[str, int, float, str]] = []  # (text, doc position, answer, kind)

    def add_doc(text: str) -> int:
        docs.append((text, ""))
        return len(docs) - 1

    # lexical groups: stems shared by short decoys; each query has its own code word
    for g in range(-(-n_lex // group_size)):
        stems = [word(2) for _ in range(4)]
        for _ in range(decoys):
            add_doc(" ".join([s + "ation" for s in stems] + fill(6)) + f" | {_amount(rng)} |")
        for _ in range(min(group_size, n_lex - g * group_size)):
            code = word(4)
            answer = _amount(rng)
            gold = f"{' '.join(fill(40))} {code} reported {answer} {' '.join(fill(100))} {code}"
            pos = add_doc(gold)
            queries.append((f"what is the {' '.join(s + 'ing' for s in stems)} of {code}?", pos, answer, "lexical"))

    # semantic groups: two marker words repeated in long decoys, one of them also in each gold
    for g in range(-(-n_sem // group_size)):
        m1, m2 = word(3), word(3)
        for _ in range(decoys):
            body = fill(150)
            for _ in range(3):
                body.insert(int(rng.integers(0, len(body))), m1)
                body.insert(int(rng.integers(0, len(body))), m2)
            add_doc(" ".join(body) + f" total {_amount(rng)}")
        for _ in range(min(group_size, n_sem - g * group_size)):
            stems = [word(3) for _ in range(4)]
            answer = _amount(rng)
            gold = f"{' '.join(s + 'ation' for s in stems)} {m1} amounted to {answer} | {' '.join(fill(4))} |"
            pos = add_doc(gold)
            queries.append((f"how {' '.join(s + 'ing' for s in stems)} {m1} {m2}?", pos, answer, "semantic"))

    while len(docs) < n_docs:
        add_doc(f"{' '.join(fill(int(rng.integers(20, 80))))} {_amount(rng)}")

    order = rng.permutation(len(docs))
    doc_id = {int(pos): f"doc-{i:04d}" for i, pos in enumerate(order)}
    documents = [
        Document(doc_id[int(pos)], docs[int(pos)][0], _SUBSETS[i % len(_SUBSETS)]) for i, pos in enumerate(order)
    ]
    corpus = Corpus(sorted(documents, key=lambda d: d.doc_id))

    lexical, semantic, qs = [], [], []
    for i, (text, pos, answer, kind) in enumerate(queries):
        qid = f"q-{i:03d}"
        qs.append(Query(qid, text, doc_id[pos], answer, corpus[doc_id[pos]].subset))
        (lexical if kind == "lexical" else semantic).append(qid)
    return SyntheticBenchmark(corpus, QuerySet(qs, corpus), tuple(lexical), tuple(semantic))
