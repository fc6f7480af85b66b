"""Corrective retrieval: grade the first round, rewrite the query when nothing is relevant."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from ..corpus import Corpus, RankedList
from ..providers import CompletionProvider
from .base import Retriever, StrategyConfig
from .prompts import PromptLibrary, render


class RelevanceLabel(str, Enum):
    RELEVANT = "RELEVANT"
    AMBIGUOUS = "AMBIGUOUS"
    IRRELEVANT = "IRRELEVANT"


_LABEL = re.compile(r"\b(RELEVANT|AMBIGUOUS|IRRELEVANT)\b")


def parse_label(text: str) -> RelevanceLabel:
    """First exact (upper-case, whole-word) label in ``text``; AMBIGUOUS if none."""
    m = _LABEL.search(text)
    return RelevanceLabel(m.group(1)) if m else RelevanceLabel.AMBIGUOUS


@dataclass
class CragTrace:
    labels: list[RelevanceLabel]
    rewritten: str | None = None
    rewrite_labels: list[RelevanceLabel] | None = None
    chosen_round: int = 1

    @property
    def corrected(self) -> bool:
        return self.rewritten is not None


def _grade(
    query: str,
    ranked: RankedList,
    corpus: Corpus,
    completion: CompletionProvider,
    cfg: StrategyConfig,
    prompts: PromptLibrary,
) -> list[RelevanceLabel]:
    labels = []
    for doc_id in ranked.doc_ids[: cfg.crag_top_k]:
        prompt = render(prompts.crag_eval, query=query, document=corpus[doc_id].text)
        out = completion.complete(prompt, cfg.crag_eval_temperature, cfg.crag_eval_max_tokens)
        labels.append(parse_label(out))
    return labels


def crag_retrieve(
    query: str,
    hybrid: Retriever,
    completion: CompletionProvider,
    corpus: Corpus,
    cfg: StrategyConfig = StrategyConfig(),
    k: int = 10,
    prompts: PromptLibrary = PromptLibrary(),
    trace: list[CragTrace] | None = None,
) -> RankedList:
    """Grade the top ``crag_top_k`` hybrid results; if none is RELEVANT, rewrite and retry.

    The round with more RELEVANT labels wins, ties going to the first round.
    Each round is retrieved to depth ``max(k, crag_top_k)`` and truncated to ``k``.
    """
    depth = max(k, cfg.crag_top_k)
    first = hybrid.retrieve(query, depth)
    labels = _grade(query, first, corpus, completion, cfg, prompts)
    record = CragTrace(labels)
    result = first
    if RelevanceLabel.RELEVANT not in labels:
        prompt = render(prompts.crag_rewrite, query=query)
        rewritten = completion.complete(
            prompt, cfg.crag_rewrite_temperature, cfg.crag_rewrite_max_tokens
        ).strip()
        if rewritten:
            second = hybrid.retrieve(rewritten, depth)
            labels2 = _grade(rewritten, second, corpus, completion, cfg, prompts)
            record.rewritten, record.rewrite_labels = rewritten, labels2
            if labels2.count(RelevanceLabel.RELEVANT) > labels.count(RelevanceLabel.RELEVANT):
                result, record.chosen_round = second, 2
    if trace is not None:
        trace.append(record)
    return result.top(k).with_source("crag")


@dataclass
class CragRetriever:
    hybrid: Retriever
    completion: CompletionProvider
    corpus: Corpus
    cfg: StrategyConfig = field(default_factory=StrategyConfig)
    prompts: PromptLibrary = field(default_factory=PromptLibrary)
    name: str = "crag"
    traces: list[CragTrace] = field(default_factory=list, repr=False)

    def retrieve(self, query: str, k: int) -> RankedList:
        return crag_retrieve(
            query, self.hybrid, self.completion, self.corpus, self.cfg, k, self.prompts, self.traces
        ).with_source(self.name)
