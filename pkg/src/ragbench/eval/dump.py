"""Line-delimited per-query metric dumps: one ``{query_id, metric, value}`` object per line."""

from __future__ import annotations

import json
from pathlib import Path

from .retrieval import MetricReport


def dump_lines(report: MetricReport) -> list[str]:
    lines = []
    for qid in report.query_ids:
        row = report.per_query[qid]
        for metric in report.metrics:
            lines.append(json.dumps({"query_id": qid, "metric": metric, "value": row[metric]}, sort_keys=True))
    return lines


def write_metric_dump(report: MetricReport, path: str | Path) -> None:
    Path(path).write_text("".join(line + "\n" for line in dump_lines(report)), encoding="utf-8")


def read_metric_dump(path: str | Path) -> MetricReport:
    per_query: dict[str, dict[str, float]] = {}
    metrics: dict[str, None] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            per_query.setdefault(rec["query_id"], {})[rec["metric"]] = float(rec["value"])
            metrics[rec["metric"]] = None
    cutoffs = sorted({int(m.split("@")[1]) for m in metrics if "@" in m})
    return MetricReport(per_query, tuple(cutoffs), list(metrics))
