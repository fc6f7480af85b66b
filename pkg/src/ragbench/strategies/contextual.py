"""Index-time enrichment: prepend a generated summary to every document."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from ..corpus import Corpus, Document
from ..providers import CompletionProvider
from .base import StrategyConfig
from .prompts import PromptLibrary, render

SEPARATOR = "\n\n"


class AlreadyContextualizedError(ValueError):
    pass


def contextualize_document(
    doc: Document,
    completion: CompletionProvider,
    cfg: StrategyConfig = StrategyConfig(),
    prompts: PromptLibrary = PromptLibrary(),
) -> Document:
    prompt = render(prompts.contextual_whole, document=doc.text)
    summary = completion.complete(prompt, cfg.contextual_temperature, cfg.contextual_max_tokens).strip()
    text = f"{summary}{SEPARATOR}{doc.text}" if summary else doc.text
    return replace(doc, text=text, context=summary)


def contextualize_corpus(
    corpus: Corpus,
    completion: CompletionProvider,
    cfg: StrategyConfig = StrategyConfig(),
    prompts: PromptLibrary = PromptLibrary(),
    workers: int = 1,
) -> Corpus:
    """Return a new corpus whose texts carry a summary prefix (whole-document mode).

    Any failed completion aborts the whole call; nothing partial is returned.
    """
    if corpus.contextualized:
        raise AlreadyContextualizedError("corpus is already contextualized")

    def one(doc: Document) -> Document:
        return contextualize_document(doc, completion, cfg, prompts)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            docs = list(pool.map(one, corpus))
    else:
        docs = [one(d) for d in corpus]
    return Corpus(docs)
