"""One-parameter ablation sweeps over a shared workbench."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

from .config import ConfigError, ExperimentConfig
from .runner import RunReport, run_method
from .workbench import Workbench

AXES = ("alpha", "rrf_k", "rerank_pool", "rerank_top_n")


def apply_axis(cfg: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    if axis == "alpha":
        return cfg.replace(convex=dataclasses.replace(cfg.convex, alpha=float(value)))
    if axis == "rrf_k":
        return cfg.replace(rrf=dataclasses.replace(cfg.rrf, k_rrf=float(value)))
    if axis == "rerank_pool":
        return cfg.replace(strategy=dataclasses.replace(cfg.strategy, rerank_pool=int(value)))
    if axis == "rerank_top_n":
        return cfg.replace(strategy=dataclasses.replace(cfg.strategy, rerank_top_n=int(value)))
    raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {', '.join(AXES)}")


@dataclass
class SweepResult:
    axis: str
    values: list[float]
    reports: list[RunReport]

    def rows(self, metrics: Sequence[str] | None = None) -> list[dict]:
        out = []
        for value, report in zip(self.values, self.reports):
            for method, res in sorted(report.methods.items()):
                agg = res.aggregates
                row = {"axis": self.axis, "value": value, "method": method}
                row.update({m: agg[m] for m in (metrics or list(agg))})
                out.append(row)
        return out


def sweep(
    cfg: ExperimentConfig,
    axis: str,
    values: Sequence[float],
    workbench: Workbench,
    method: str | None = None,
) -> SweepResult:
    """Run ``method`` (default ``cfg.method``) once per axis value; indexes and caches are shared."""
    if axis not in AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {', '.join(AXES)}")
    method = method or cfg.method
    reports = []
    for value in values:
        run_cfg = apply_axis(cfg, axis, value).replace(method=method)
        res = run_method(workbench, method, run_cfg)
        reports.append(RunReport({method: res}, run_cfg.to_dict()))
    return SweepResult(axis, list(values), reports)
