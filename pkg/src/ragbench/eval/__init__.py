from .dump import read_metric_dump, write_metric_dump
from .generation import (
    NumberMatchConfig,
    extract_number,
    format_gold,
    lcs_length,
    number_match,
    rouge_l,
    token_f1,
)
from .retrieval import (
    DEFAULT_CUTOFFS,
    MetricReport,
    average_precision,
    evaluate_rankings,
    gold_rank,
    mean,
    metric_names,
    mrr_at_k,
    ndcg_at_k,
    query_metrics,
    recall_at_k,
)
from .stats import bonferroni, paired_bootstrap, significant

# BERTScore needs a neural scoring model and is deliberately not provided.
UNIMPLEMENTED_METRICS = ("bertscore",)

__all__ = [
    "DEFAULT_CUTOFFS",
    "MetricReport",
    "NumberMatchConfig",
    "UNIMPLEMENTED_METRICS",
    "average_precision",
    "bonferroni",
    "evaluate_rankings",
    "extract_number",
    "format_gold",
    "gold_rank",
    "lcs_length",
    "mean",
    "metric_names",
    "mrr_at_k",
    "ndcg_at_k",
    "number_match",
    "paired_bootstrap",
    "query_metrics",
    "read_metric_dump",
    "recall_at_k",
    "rouge_l",
    "significant",
    "token_f1",
    "write_metric_dump",
]
