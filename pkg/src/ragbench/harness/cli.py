"""Command-line entry point: ``ragbench <subcommand> [--config PATH] [--seed N] [--offline]``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from ..corpus import corpus_stats, load_corpus, load_queries, save_corpus, save_queries, write_jsonl
from ..eval import write_metric_dump
from ..lexical import build_lexical_index
from ..strategies import contextualize_corpus
from .config import ExperimentConfig, load_config
from .failures import categorize_failures, category_histogram, sample_failures
from .reports import (
    generation_csv,
    significance_csv,
    summary_table,
    sweep_csv,
    write_run_outputs,
)
from .runner import RunReport, answer_questions, compare_methods, run_experiment, summarize_generation
from .sweep import AXES, sweep
from .workbench import Workbench

log = logging.getLogger("ragbench")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="YAML experiment config")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 42)")
    p.add_argument("--offline", action="store_true", help="mock providers only; refuse network use")
    p.add_argument("--documents", help="document JSONL (overrides paths.documents)")
    p.add_argument("--queries", help="query JSONL (overrides paths.queries)")
    p.add_argument("--cache", help="embedding cache file (overrides paths.cache)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ragbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="validate data and print corpus statistics")
    p.add_argument("--out", help="directory for normalized documents.jsonl / queries.jsonl")

    p = sub.add_parser("contextualize", parents=[common], help="prepend generated summaries to documents")
    p.add_argument("--out", required=True, help="output document JSONL")

    p = sub.add_parser("embed", parents=[common], help="fill the embedding cache for documents and queries")
    p.add_argument("--contextual-documents", help="also embed this contextualized document JSONL")

    p = sub.add_parser("index", parents=[common], help="build and dump the BM25 index")
    p.add_argument("--out", required=True, help="index dump path")

    p = sub.add_parser("run", parents=[common], help="run retrieval methods and write reports")
    p.add_argument("--methods", help="comma-separated methods (default: config method)")
    p.add_argument("--metric", default="recall@5", help="metric for the significance table")
    p.add_argument("--contextual-documents", help="precomputed contextualized document JSONL")
    p.add_argument("--out", help="output directory (default: paths.output_dir)")

    p = sub.add_parser("generate", parents=[common], help="answer questions from retrieved context")
    p.add_argument("--method", help="retrieval method, or 'oracle' for gold context")
    p.add_argument("--contextual-documents", help="precomputed contextualized document JSONL")
    p.add_argument("--out", required=True, help="generation records JSONL")

    p = sub.add_parser("eval", parents=[common], help="regenerate summaries from stored results")
    p.add_argument("--report", help="report.json from 'run'")
    p.add_argument("--dump", help="write per-query metric records (JSONL) for --report")
    p.add_argument("--generations", help="generation records JSONL from 'generate'")

    p = sub.add_parser("compare", parents=[common], help="pairwise significance between reports")
    p.add_argument("reports", nargs="+", help="report.json files")
    p.add_argument("--metric", default="recall@5")
    p.add_argument("--out", help="significance CSV path (default: stdout)")

    p = sub.add_parser("sweep", parents=[common], help="ablation sweep over one parameter")
    p.add_argument("--axis", required=True, help=f"one of {', '.join(AXES)}")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--method", help="method to sweep (default: config method)")
    p.add_argument("--out", help="output CSV (default: stdout)")

    p = sub.add_parser("failures", parents=[common], help="sample and categorize retrieval failures")
    p.add_argument("--report", required=True, help="report.json holding the method's rankings")
    p.add_argument("--method", default="hybrid_rrf")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--categorize", action="store_true", help="label each case with the completion provider")
    p.add_argument("--out", help="failure cases JSONL (default: stdout)")
    return parser


def _config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if args.offline:
        cfg = cfg.replace(providers=dataclasses.replace(cfg.providers, offline=True))
    paths = cfg.paths
    overrides = {
        k: getattr(args, k) for k in ("documents", "queries", "cache") if getattr(args, k, None)
    }
    if overrides:
        cfg = cfg.replace(paths=dataclasses.replace(paths, **overrides))
    return cfg


def _data(cfg: ExperimentConfig, need_queries: bool = True):
    if not cfg.paths.documents:
        raise SystemExit("no documents: pass --documents or set paths.documents")
    corpus = load_corpus(cfg.paths.documents)
    queries = None
    if need_queries:
        if not cfg.paths.queries:
            raise SystemExit("no queries: pass --queries or set paths.queries")
        queries = load_queries(cfg.paths.queries, corpus)
    return corpus, queries


def _workbench(cfg, corpus, queries, contextual_path: str | None = None) -> Workbench:
    wb = Workbench(cfg, corpus, queries)
    if contextual_path:
        wb.use_contextual_corpus(load_corpus(contextual_path))
    return wb


def _save_cache(wb: Workbench) -> None:
    if wb.providers.cache.path is not None:
        wb.providers.cache.save()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_ingest(args, cfg):
    corpus, queries = _data(cfg, need_queries=bool(cfg.paths.queries))
    stats = corpus_stats(corpus)
    info = {"documents": stats.count, "mean_tokens": stats.mean_tokens, "per_subset": stats.per_subset}
    if queries is not None:
        info["queries"] = len(queries)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        save_corpus(corpus, out / "documents.jsonl")
        if queries is not None:
            save_queries(queries, out / "queries.jsonl")
    print(json.dumps(info, indent=2, sort_keys=True))


def cmd_contextualize(args, cfg):
    corpus, queries = _data(cfg, need_queries=False)
    wb = Workbench(cfg, corpus, queries)
    ctx = contextualize_corpus(corpus, wb._completion(), cfg.strategy, wb.prompts, workers=cfg.workers)
    save_corpus(ctx, args.out)
    print(json.dumps(wb.providers.ledger.summary(), indent=2))


def cmd_embed(args, cfg):
    corpus, queries = _data(cfg, need_queries=bool(cfg.paths.queries))
    wb = _workbench(cfg, corpus, queries, args.contextual_documents)
    wb.vector_index()
    if args.contextual_documents:
        wb.vector_index(contextual=True)
    if queries is not None:
        from ..providers import cached_embed

        cached_embed(wb.providers.embedding, wb.providers.cache, [q.text for q in queries])
    _save_cache(wb)
    print(json.dumps({"cache_entries": len(wb.providers.cache), "calls": wb.providers.ledger.summary()}, indent=2))


def cmd_index(args, cfg):
    corpus, _ = _data(cfg, need_queries=False)
    index = build_lexical_index(corpus, cfg.tokenizer)
    index.save(args.out)
    print(json.dumps({"documents": index.N, "terms": len(index.postings), "avgdl": index.avgdl}, indent=2))


def cmd_run(args, cfg):
    corpus, queries = _data(cfg)
    wb = _workbench(cfg, corpus, queries, args.contextual_documents)
    methods = args.methods.split(",") if args.methods else [cfg.method]
    report = run_experiment(cfg, corpus, queries, wb, methods, args.metric)
    _save_cache(wb)
    files = write_run_outputs(report, args.out or cfg.paths.output_dir)
    sys.stdout.write(summary_table(report))
    log.info("wrote %s", ", ".join(str(p) for p in files.values()))


def cmd_generate(args, cfg):
    corpus, queries = _data(cfg)
    wb = _workbench(cfg, corpus, queries, args.contextual_documents)
    method = args.method or cfg.method
    oracle = method == "oracle"
    retriever = None if oracle else wb.retriever(method)
    records = answer_questions(cfg, retriever, wb._completion(), queries, corpus, oracle=oracle, prompts=wb.prompts)
    write_jsonl(args.out, (r.to_dict() for r in records))
    _save_cache(wb)
    print(json.dumps({"method": method, **summarize_generation(records)}, indent=2))


def cmd_eval(args, cfg):
    if not args.report and not args.generations:
        raise SystemExit("pass --report and/or --generations")
    if args.report:
        report = RunReport.load(args.report)
        sys.stdout.write(summary_table(report))
        if args.dump:
            for name, res in sorted(report.methods.items()):
                path = Path(args.dump)
                if len(report.methods) > 1:
                    path = path.with_name(f"{path.stem}-{name}{path.suffix}")
                write_metric_dump(res.report, path)
    if args.generations:
        from .runner import GenerationRecord

        with open(args.generations, encoding="utf-8") as fh:
            records = [GenerationRecord(**json.loads(line)) for line in fh if line.strip()]
        sys.stdout.write(generation_csv(records) if args.verbose else "")
        print(json.dumps(summarize_generation(records), indent=2))


def cmd_compare(args, cfg):
    reports = [RunReport.load(p) for p in args.reports]
    rows = compare_methods(reports, args.metric, cfg.bootstrap.B, cfg.seed, cfg.bootstrap.alpha)
    _emit(significance_csv(rows), args.out)


def cmd_sweep(args, cfg):
    corpus, queries = _data(cfg)
    wb = Workbench(cfg, corpus, queries)
    values = [float(v) for v in args.values.split(",")]
    result = sweep(cfg, args.axis, values, wb, args.method)
    _save_cache(wb)
    _emit(sweep_csv(result), args.out)


def cmd_failures(args, cfg):
    report = RunReport.load(args.report)
    corpus, queries = _data(cfg)
    cases = sample_failures(report[args.method], queries, args.n, cfg.seed)
    if args.categorize:
        wb = Workbench(cfg, corpus, queries)
        cases = categorize_failures(wb._completion(), cases, queries, corpus)
        log.info("categories: %s", category_histogram(cases))
    text = "".join(json.dumps(c.to_dict(), sort_keys=True) + "\n" for c in cases)
    _emit(text, args.out)


COMMANDS = {
    "ingest": cmd_ingest,
    "contextualize": cmd_contextualize,
    "embed": cmd_embed,
    "index": cmd_index,
    "run": cmd_run,
    "generate": cmd_generate,
    "eval": cmd_eval,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "failures": cmd_failures,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = _config(args)
    COMMANDS[args.command](args, cfg)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
