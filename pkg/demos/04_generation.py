"""End-to-end answering and Number Match: oracle context versus retrieved context.

    python3 demos/04_generation.py
"""

from ragbench.eval import number_match
from ragbench.harness import ExperimentConfig, Workbench, answer_questions, summarize_generation
from ragbench.synthetic import synthetic_benchmark

for answer, gold in [("12.4", 12.5), ("41%", 0.41), ("$3.2 billion", 3.2e9), ("UNANSWERABLE", 5)]:
    print(f"NM({answer!r}, {gold}) = {number_match(answer, gold)}")

bench = synthetic_benchmark(seed=42)
cfg = ExperimentConfig(seed=42)
wb = Workbench(cfg, bench.corpus, bench.queries)
completion = wb._completion()

rows = {"oracle": answer_questions(cfg, None, completion, bench.queries, bench.corpus, oracle=True)}
for method in ("bm25", "dense", "hybrid_rrf"):
    rows[method] = answer_questions(cfg, wb.retriever(method), completion, bench.queries, bench.corpus)
print()
for name, records in rows.items():
    s = summarize_generation(records)
    print(f"{name:11} NM={s['number_match']:.2f}  token-F1={s['token_f1']:.2f}  ROUGE-L={s['rouge_l']:.2f}")
