"""Full benchmark run: all methods, pairwise significance, and the report files.

    python3 demos/03_benchmark_run.py [output-dir]
"""

import sys

from ragbench.harness import METHODS, ExperimentConfig, Workbench, run_experiment
from ragbench.harness.config import BootstrapConfig
from ragbench.harness.reports import summary_table, write_run_outputs
from ragbench.synthetic import synthetic_benchmark

out_dir = sys.argv[1] if len(sys.argv) > 1 else "demo-out/run"
bench = synthetic_benchmark(seed=42)
cfg = ExperimentConfig(seed=42, bootstrap=BootstrapConfig(B=10_000))
methods = ["bm25", "dense", "hybrid_rrf", "hybrid_rerank"]

report = run_experiment(cfg, bench.corpus, bench.queries, Workbench(cfg, bench.corpus, bench.queries), methods, "recall@5")
print(summary_table(report))
for name, path in write_run_outputs(report, out_dir).items():
    print(f"{name:13} {path}")
print("available methods:", ", ".join(METHODS))
