"""Each advanced strategy on the synthetic corpus, with the provider calls it cost.

Uses the offline mocks: a hash embedder, a scripted completion model and an
oracle reranker, so the numbers are deterministic.

    python3 demos/02_strategies.py
"""

from ragbench.harness import ExperimentConfig, Workbench, run_method
from ragbench.synthetic import synthetic_benchmark

bench = synthetic_benchmark(n_docs=200, n_queries=50, seed=42)
cfg = ExperimentConfig(seed=42)

print(f"{'method':18} {'R@5':>5} {'MRR@3':>6}  calls")
for method in ("hyde", "multi_query", "contextual_dense", "contextual_hybrid", "crag", "hybrid_rerank"):
    wb = Workbench(cfg, bench.corpus, bench.queries)  # fresh workbench: calls are per method
    res = run_method(wb, method, cfg)
    calls = ", ".join(f"{k.split(':')[0]}={v['calls']}" for k, v in sorted(res.calls.items()))
    extra = f"  correction rate {res.extras['crag_correction_rate']:.2f}" if res.extras else ""
    print(f"{method:18} {res.aggregates['recall@5']:5.2f} {res.aggregates['mrr@3']:6.3f}  {calls}{extra}")
