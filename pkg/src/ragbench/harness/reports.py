"""Human-readable tables and plot-ready CSV files."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence

from .runner import GenerationRecord, RunReport, SignificanceRow
from .sweep import SweepResult

SUMMARY_METRICS = ("recall@1", "recall@3", "recall@5", "recall@10", "mrr@3", "ndcg@10", "map")


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def summary_table(report: RunReport, metrics: Sequence[str] = SUMMARY_METRICS) -> str:
    """Fixed-width table of aggregate metrics (3 decimals), then per-subset recall@5."""
    metrics = [m for m in metrics if all(m in r.aggregates for r in report.methods.values())]
    width = max([len("method")] + [len(m) for m in report.methods])
    lines = ["  ".join(["method".ljust(width)] + [m.rjust(9) for m in metrics])]
    for name in sorted(report.methods):
        agg = report.methods[name].aggregates
        lines.append("  ".join([name.ljust(width)] + [f"{agg[m]:9.3f}" for m in metrics]))
    subset_metric = "recall@5" if "recall@5" in metrics else (metrics[0] if metrics else None)
    if subset_metric:
        lines.append("")
        lines.append(f"per-subset {subset_metric}")
        for name in sorted(report.methods):
            parts = [
                f"{s}={row[subset_metric]:.3f} (n={int(row['n'])})"
                for s, row in report.methods[name].per_subset().items()
            ]
            lines.append(f"  {name.ljust(width)}  " + "  ".join(parts))
    if report.significance:
        lines.append("")
        lines.append("pairwise significance (paired bootstrap, Bonferroni)")
        for r in report.significance:
            flag = "*" if r.significant else " "
            lines.append(
                f"  {r.method_a} vs {r.method_b}: delta={r.delta:+.3f} p_adj={r.p_adjusted:.4f} {flag}"
            )
    return "\n".join(lines) + "\n"


def per_query_csv(report: RunReport) -> str:
    rows = []
    header = None
    for name in sorted(report.methods):
        res = report.methods[name]
        metrics = res.report.metrics
        header = header or ["method", "query_id", "subset", *metrics]
        for qid in sorted(res.per_query):
            rows.append([name, qid, res.subsets[qid], *[repr(res.per_query[qid][m]) for m in metrics]])
    return _csv(header or ["method", "query_id", "subset"], rows)


def significance_csv(rows: Sequence[SignificanceRow]) -> str:
    header = ["method_a", "method_b", "metric", "mean_a", "mean_b", "delta", "p_value", "p_adjusted", "significant"]
    return _csv(header, [[getattr(r, h) for h in header] for r in rows])


def recall_curve_csv(report: RunReport) -> str:
    rows = []
    for name in sorted(report.methods):
        res = report.methods[name]
        agg = res.aggregates
        for k in res.cutoffs:
            rows.append([name, k, repr(agg[f"recall@{k}"])])
    return _csv(["method", "k", "recall"], rows)


def sweep_csv(result: SweepResult, metrics: Sequence[str] | None = None) -> str:
    rows = result.rows(metrics)
    if not rows:
        return ""
    header = list(rows[0])
    return _csv(header, [[r[h] for h in header] for r in rows])


def generation_csv(records: Sequence[GenerationRecord]) -> str:
    header = ["query_id", "subset", "number_match", "token_f1", "rouge_l", "answer"]
    return _csv(header, [[getattr(r, h) for h in header] for r in records])


def write_run_outputs(report: RunReport, out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "report": out / "report.json",
        "summary": out / "summary.txt",
        "per_query": out / "per_query.csv",
        "recall_curve": out / "recall_curve.csv",
    }
    report.save(files["report"])
    files["summary"].write_text(summary_table(report), encoding="utf-8")
    files["per_query"].write_text(per_query_csv(report), encoding="utf-8")
    files["recall_curve"].write_text(recall_curve_csv(report), encoding="utf-8")
    if report.significance:
        files["significance"] = out / "significance.csv"
        files["significance"].write_text(significance_csv(report.significance), encoding="utf-8")
    return files
