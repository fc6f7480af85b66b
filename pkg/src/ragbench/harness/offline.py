"""Provider construction: deterministic mocks for offline runs, HTTP clients otherwise."""

from __future__ import annotations

import re

from ..corpus import QuerySet
from ..eval.generation import extract_number
from ..lexical import tokenize
from ..providers import (
    EmbeddingCache,
    HashEmbedder,
    OracleReranker,
    ProviderBundle,
    RequestPolicy,
    ScriptedCompletion,
)
from ..providers import http
from .config import ExperimentConfig


_HEADER = re.compile(r"^Document \d+:$", re.MULTILINE)


def _first_number(m: re.Match, prompt: str) -> str:
    value = extract_number(_HEADER.sub("", m.group(1)))
    if value is None:
        return "UNANSWERABLE"
    return f"{value:.12g}"


def _variants(m: re.Match, prompt: str) -> str:
    q = m.group(1).strip()
    plain = " ".join(tokenize(q))
    return f"1. {q}\n2. {plain}\n3. {plain} financial report"


def _grade(m: re.Match, prompt: str) -> str:
    query = set(tokenize(m.group(1)))
    doc = set(tokenize(m.group(2)))
    if not query:
        return "AMBIGUOUS"
    share = len(query & doc) / len(query)
    return "RELEVANT" if share >= 0.5 else "IRRELEVANT"


def _summary(m: re.Match, prompt: str) -> str:
    words = m.group(1).split()
    return "Summary: " + " ".join(words[:12])


def _failure(m: re.Match, prompt: str) -> str:
    return "table structure mismatch" if "|" in m.group(1) else "vocabulary mismatch"


def default_offline_rules() -> list:
    """Deterministic responses keyed on each built-in prompt's distinctive tail."""
    return [
        (r"Context:\n(.*)\n\nQuestion: .*\n\nAnswer:\s*$", _first_number),
        (r"Question: (.*)\nDocument: (.*)\n\nRespond with exactly one of:.*Classification:\s*$", _grade),
        (r"Original question: (.*)\n\nAlternative queries:\s*$", _variants),
        (r"Original question: (.*)\n\nPlease rewrite.*Rewritten question:\s*$", lambda m, p: m.group(1).strip()),
        (r"Question: (.*)\n+Passage:\s*$", lambda m, p: m.group(1).strip()),
        (r"Here is a document:\n<document>\n(.*)\n</document>", _summary),
        (r"Gold document excerpt:\n(.*)\n\nCategory:\s*$", _failure),
    ]


def mock_completion(cfg: ExperimentConfig) -> ScriptedCompletion:
    rules: list = [(r.pattern, r.response) for r in cfg.providers.mock.rules]
    return ScriptedCompletion(rules + default_offline_rules())


def build_providers(
    cfg: ExperimentConfig,
    queries: QuerySet | None = None,
    cache: EmbeddingCache | None = None,
) -> ProviderBundle:
    """Managed provider bundle for ``cfg``.

    Offline: hash embedder, scripted completion, and an oracle reranker that
    knows each query's gold document. Online: the HTTP clients, with
    credentials read from the environment.
    """
    pc = cfg.providers
    policy = RequestPolicy(pc.max_attempts, pc.base_delay, pc.multiplier, pc.rate_limit)
    if cache is None:
        cache = EmbeddingCache(cfg.paths.cache) if cfg.paths.cache else EmbeddingCache()
    if pc.offline:
        http.set_offline(True)
        gold = {q.text: q.gold_doc_id for q in queries} if queries is not None else {}
        return ProviderBundle.wrap(
            HashEmbedder(pc.mock.dimension, pc.mock.seed),
            mock_completion(cfg),
            OracleReranker(gold),
            cache=cache,
            policy=policy,
            max_in_flight=pc.max_in_flight,
        )
    http.set_offline(False)
    return ProviderBundle.wrap(
        http.OpenAIEmbeddings(pc.embedding.model, pc.embedding.dimension or 3072),
        http.OpenAIChat(pc.completion.model),
        http.CohereRerank(pc.rerank.model),
        cache=cache,
        policy=policy,
        max_in_flight=pc.max_in_flight,
    )
