"""Sample the queries a method misses at depth 5 and label each with a cause.

    python3 demos/06_failure_analysis.py
"""

from ragbench.harness import (
    ExperimentConfig,
    Workbench,
    categorize_failures,
    category_histogram,
    run_method,
    sample_failures,
)
from ragbench.synthetic import synthetic_benchmark

bench = synthetic_benchmark(seed=42)
cfg = ExperimentConfig(seed=42)
wb = Workbench(cfg, bench.corpus, bench.queries)

result = run_method(wb, "dense")
cases = sample_failures(result, bench.queries, n=100, seed=cfg.seed)
print(f"dense misses {len(cases)} of {len(bench.queries)} queries at depth 5")
labelled = categorize_failures(wb._completion(), cases, bench.queries, bench.corpus)
for case in labelled[:5]:
    print(f"  {case.query_id}: gold {case.gold_doc_id} -> {case.category}")
print(category_histogram(labelled))
