"""Experiment orchestration, reports, significance tables, and end-to-end generation."""

from __future__ import annotations

import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, TypeVar

from ..corpus import Corpus, Query, QuerySet, Subset, write_jsonl
from ..eval import (
    MetricReport,
    bonferroni,
    format_gold,
    mean,
    metric_names,
    number_match,
    paired_bootstrap,
    query_metrics,
    rouge_l,
    significant,
    token_f1,
)
from ..providers import CallLedger, CompletionProvider
from ..strategies import CragRetriever, PromptLibrary, Retriever, render
from .config import ConfigError, ExperimentConfig
from .workbench import Workbench

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
SUBSETS = (Subset.FINQA.value, Subset.CONVFINQA.value, Subset.TATDQA.value, Subset.OTHER.value)

T = TypeVar("T")
R = TypeVar("R")


class RunAborted(RuntimeError):
    """A provider failed mid-run; per-query results so far went to ``partial_path``."""

    def __init__(self, message: str, partial_path: Path | None):
        super().__init__(message)
        self.partial_path = partial_path


@dataclass
class MethodResult:
    method: str
    per_query: dict[str, dict[str, float]]
    rankings: dict[str, list[str]]
    subsets: dict[str, str]
    cutoffs: tuple[int, ...]
    calls: dict[str, dict[str, int]] = field(default_factory=dict)
    extras: dict[str, float] = field(default_factory=dict)

    @property
    def report(self) -> MetricReport:
        return MetricReport(self.per_query, self.cutoffs, metric_names(self.cutoffs))

    @property
    def aggregates(self) -> dict[str, float]:
        return self.report.aggregates

    def per_subset(self) -> dict[str, dict[str, float]]:
        out: dict[str, dict[str, float]] = {}
        for subset in SUBSETS:
            ids = [q for q in sorted(self.per_query) if self.subsets[q] == subset]
            if not ids:
                continue
            row: dict[str, float] = {"n": len(ids)}
            row.update(self.report.restricted(ids).aggregates)
            out[subset] = row
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "aggregates": self.aggregates,
            "calls": self.calls,
            "cutoffs": list(self.cutoffs),
            "extras": self.extras,
            "per_query": self.per_query,
            "per_subset": self.per_subset(),
            "rankings": self.rankings,
            "subsets": self.subsets,
        }

    @classmethod
    def from_dict(cls, method: str, data: dict[str, Any]) -> "MethodResult":
        # aggregates and per_subset are derived and recomputed
        return cls(
            method=method,
            per_query={q: dict(v) for q, v in data["per_query"].items()},
            rankings={q: list(v) for q, v in data["rankings"].items()},
            subsets=dict(data["subsets"]),
            cutoffs=tuple(data["cutoffs"]),
            calls=data.get("calls", {}),
            extras=data.get("extras", {}),
        )


@dataclass
class SignificanceRow:
    method_a: str
    method_b: str
    metric: str
    mean_a: float
    mean_b: float
    delta: float
    p_value: float
    p_adjusted: float
    significant: bool

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


@dataclass
class RunReport:
    methods: dict[str, MethodResult]
    config: dict[str, Any]
    calls: dict[str, dict[str, int]] = field(default_factory=dict)
    significance: list[SignificanceRow] = field(default_factory=list)
    format_version: int = FORMAT_VERSION

    @property
    def query_ids(self) -> list[str]:
        first = next(iter(self.methods.values()))
        return sorted(first.per_query)

    def __getitem__(self, method: str) -> MethodResult:
        return self.methods[method]

    def to_json(self) -> str:
        payload = {
            "calls": self.calls,
            "config": self.config,
            "format_version": self.format_version,
            "methods": {m: self.methods[m].to_dict() for m in sorted(self.methods)},
            "significance": [r.to_dict() for r in self.significance],
        }
        return json.dumps(payload, indent=1, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported report format {data.get('format_version')!r}")
        return cls(
            methods={m: MethodResult.from_dict(m, d) for m, d in data["methods"].items()},
            config=data["config"],
            calls=data.get("calls", {}),
            significance=[SignificanceRow(**r) for r in data.get("significance", [])],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RunReport":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def _ledger_delta(before: dict, after: dict) -> dict[str, dict[str, int]]:
    out = {}
    for key, row in after.items():
        prev = before.get(key, {})
        diff = {f: v - prev.get(f, 0) for f, v in row.items()}
        if any(diff.values()):
            out[key] = diff
    return out


def _parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_partial(cfg: ExperimentConfig, method: str, rows: Iterable[dict[str, Any]]) -> Path | None:
    out_dir = Path(cfg.paths.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"partial-{method}.jsonl"
        write_jsonl(path, rows)
        return path
    except OSError:
        log.exception("could not write partial results")
        return None


def run_method(wb: Workbench, method: str, cfg: ExperimentConfig | None = None) -> MethodResult:
    """Retrieve for every query with ``method`` and score all rank metrics."""
    cfg = cfg or wb.cfg
    if wb.queries is None:
        raise ConfigError("workbench has no queries")
    queries = list(wb.queries)
    depth = max(cfg.cutoffs)
    subsets = {q.query_id: q.subset.value for q in queries}

    if method == "oracle":
        rankings = {q.query_id: [q.gold_doc_id] for q in queries}
        per_query = {q.query_id: query_metrics(rankings[q.query_id], q.gold_doc_id, cfg.cutoffs) for q in queries}
        return MethodResult(method, per_query, rankings, subsets, tuple(cfg.cutoffs))

    # index builds count toward the first method that triggers them on this workbench
    before = wb.providers.ledger.summary()
    wb.prepare(method)
    retriever = wb.retriever(method, cfg)
    done: dict[str, list[str]] = {}

    def one(q: Query) -> list[str]:
        ids = retriever.retrieve(q.text, depth).doc_ids
        done[q.query_id] = ids
        return ids

    try:
        ranked = _parallel_map(one, queries, cfg.workers)
    except Exception as exc:
        rows = [{"query_id": qid, "ranking": done[qid]} for qid in sorted(done)]
        path = _write_partial(cfg, method, rows)
        raise RunAborted(f"{method}: run aborted after {len(done)} queries: {exc}", path) from exc

    rankings = {q.query_id: ids for q, ids in zip(queries, ranked)}
    per_query = {
        q.query_id: query_metrics(rankings[q.query_id], q.gold_doc_id, cfg.cutoffs) for q in queries
    }
    extras: dict[str, float] = {}
    if isinstance(retriever, CragRetriever) and retriever.traces:
        extras["crag_correction_rate"] = sum(t.corrected for t in retriever.traces) / len(retriever.traces)
    calls = _ledger_delta(before, wb.providers.ledger.summary())
    return MethodResult(
        method,
        {q: per_query[q] for q in sorted(per_query)},
        {q: rankings[q] for q in sorted(rankings)},
        {q: subsets[q] for q in sorted(subsets)},
        tuple(cfg.cutoffs),
        calls,
        extras,
    )


def run_experiment(
    cfg: ExperimentConfig,
    corpus: Corpus,
    queries: QuerySet,
    workbench: Workbench | None = None,
    methods: Sequence[str] | None = None,
    metric: str | None = None,
) -> RunReport:
    """Run ``cfg.method`` (or every name in ``methods``) over ``queries``.

    With several methods and a ``metric``, the report carries the pairwise
    significance table for that metric.
    """
    wb = workbench or Workbench(cfg, corpus, queries)
    if wb.queries is None:
        wb.queries = queries
    names = list(methods) if methods else [cfg.method]
    for m in names:
        ExperimentConfig(method=m)  # validates the name
    results = {m: run_method(wb, m, cfg) for m in names}
    report = RunReport(results, cfg.to_dict(), wb.providers.ledger.summary())
    if metric and len(results) > 1:
        report.significance = compare_methods([report], metric, cfg.bootstrap.B, cfg.seed, cfg.bootstrap.alpha)
    return report


def compare_methods(
    reports: Sequence[RunReport],
    metric: str,
    B: int = 10_000,
    seed: int = 42,
    alpha: float = 0.05,
) -> list[SignificanceRow]:
    """Paired bootstrap for every pair of methods across ``reports``, Bonferroni-adjusted.

    Method names repeated across reports are suffixed with ``#<report index>``.
    """
    entries: list[tuple[str, MethodResult]] = []
    raw_names = [m for r in reports for m in r.methods]
    for i, r in enumerate(reports):
        for m in sorted(r.methods):
            label = m if raw_names.count(m) == 1 else f"{m}#{i}"
            entries.append((label, r.methods[m]))
    if not entries:
        return []
    qids = sorted(entries[0][1].per_query)
    for label, res in entries:
        if sorted(res.per_query) != qids:
            raise ValueError(f"{label}: query set differs from {entries[0][0]}")
    pairs = list(itertools.combinations(entries, 2))
    if not pairs:
        return []
    p_values = []
    stats = []
    for (la, ra), (lb, rb) in pairs:
        a = [ra.per_query[q][metric] for q in qids]
        b = [rb.per_query[q][metric] for q in qids]
        p_values.append(paired_bootstrap(a, b, B, seed))
        stats.append((la, lb, mean(a), mean(b)))
    adjusted = bonferroni(p_values, len(pairs))
    return [
        SignificanceRow(la, lb, metric, ma, mb, ma - mb, p, adj, significant(adj, alpha))
        for (la, lb, ma, mb), p, adj in zip(stats, p_values, adjusted)
    ]


# ---------------------------------------------------------------------------
# end-to-end generation


@dataclass
class GenerationRecord:
    query_id: str
    subset: str
    context_ids: list[str]
    answer: str
    gold_answer: float
    number_match: int
    token_f1: float
    rouge_l: float

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


def build_context(docs: Sequence[str]) -> str:
    """Number each document with a ``Document <i>:`` header line; blank lines between."""
    return "\n\n".join(f"Document {i}:\n{text}" for i, text in enumerate(docs, start=1))


def answer_questions(
    cfg: ExperimentConfig,
    retriever: Retriever | None,
    completion: CompletionProvider,
    queries: Iterable[Query],
    corpus: Corpus,
    top_k: int | None = None,
    oracle: bool = False,
    prompts: PromptLibrary = PromptLibrary(),
) -> list[GenerationRecord]:
    """Answer each query from its top-``top_k`` retrieved documents (or the gold one in oracle mode)."""
    top_k = top_k or cfg.generation.top_k
    if retriever is None and not oracle:
        raise ValueError("a retriever is required unless oracle=True")

    def one(q: Query) -> GenerationRecord:
        if oracle:
            ids = [q.gold_doc_id]
        else:
            ids = retriever.retrieve(q.text, top_k).doc_ids  # type: ignore[union-attr]
        context = build_context([corpus[d].text for d in ids])
        prompt = render(prompts.generation, context=context, question=q.text)
        answer = completion.complete(prompt, cfg.generation.temperature, cfg.generation.max_tokens).strip()
        gold_text = format_gold(q.gold_answer)
        return GenerationRecord(
            q.query_id,
            q.subset.value,
            ids,
            answer,
            q.gold_answer,
            number_match(answer, q.gold_answer, cfg.number_match),
            token_f1(answer, gold_text),
            rouge_l(answer, gold_text),
        )

    records = _parallel_map(one, list(queries), cfg.workers)
    return sorted(records, key=lambda r: r.query_id)


def summarize_generation(records: Sequence[GenerationRecord]) -> dict[str, float]:
    return {
        "n": len(records),
        "number_match": mean([r.number_match for r in records]),
        "token_f1": mean([r.token_f1 for r in records]),
        "rouge_l": mean([r.rouge_l for r in records]),
    }


def ledger_totals(ledger: CallLedger) -> dict[str, int]:
    return {kind: ledger.count(kind) for kind in ("embed", "complete", "rerank")}
