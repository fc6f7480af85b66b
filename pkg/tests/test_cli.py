import json

import pytest

from ragbench.corpus import load_corpus, save_corpus, save_queries
from ragbench.harness.cli import main
from ragbench.harness.runner import RunReport


@pytest.fixture
def data(tmp_path, bench):
    docs, qs = tmp_path / "documents.jsonl", tmp_path / "queries.jsonl"
    save_corpus(bench.corpus, docs)
    save_queries(bench.queries, qs)
    return ["--offline", "--documents", str(docs), "--queries", str(qs)]


def test_ingest(data, tmp_path, capsys):
    assert main(["ingest", *data, "--out", str(tmp_path / "norm")]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["documents"] == 200 and info["queries"] == 50
    assert (tmp_path / "norm" / "documents.jsonl").exists()


def test_index_and_embed(data, tmp_path, capsys):
    main(["index", *data, "--out", str(tmp_path / "bm25.json")])
    assert json.loads(capsys.readouterr().out)["documents"] == 200
    cache = str(tmp_path / "emb.cache")
    main(["embed", *data, "--cache", cache])
    first = json.loads(capsys.readouterr().out)
    assert first["cache_entries"] == 250
    main(["embed", *data, "--cache", cache])
    again = json.loads(capsys.readouterr().out)
    assert again["calls"] == {}  # every vector came from the cache file


def test_run_eval_compare_failures(data, tmp_path, capsys):
    out = tmp_path / "run"
    main(["run", *data, "--methods", "bm25,dense,hybrid_rrf", "--out", str(out)])
    assert "hybrid_rrf" in capsys.readouterr().out
    report = out / "report.json"
    assert set(RunReport.load(report).methods) == {"bm25", "dense", "hybrid_rrf"}
    assert (out / "significance.csv").exists()

    main(["eval", *data, "--report", str(report), "--dump", str(tmp_path / "dump.jsonl")])
    assert (tmp_path / "dump-bm25.jsonl").exists()
    capsys.readouterr()

    main(["compare", *data, str(report), "--out", str(tmp_path / "sig.csv")])
    assert (tmp_path / "sig.csv").read_text().count("\n") == 4

    main(["failures", *data, "--report", str(report), "--method", "bm25", "--categorize", "--out", str(tmp_path / "f.jsonl")])
    cases = [json.loads(line) for line in (tmp_path / "f.jsonl").read_text().splitlines()]
    assert len(cases) == 25 and all(c["category"] != "uncategorized" for c in cases)


def test_generate_and_eval(data, tmp_path, capsys):
    gen = tmp_path / "gen.jsonl"
    main(["generate", *data, "--method", "oracle", "--out", str(gen)])
    assert json.loads(capsys.readouterr().out)["number_match"] == 1.0
    main(["eval", *data, "--generations", str(gen)])
    assert json.loads(capsys.readouterr().out)["n"] == 50


def test_contextualize_then_run(data, tmp_path, capsys):
    ctx = tmp_path / "ctx.jsonl"
    main(["contextualize", *data, "--out", str(ctx)])
    assert load_corpus(ctx).contextualized
    capsys.readouterr()
    main(["run", *data, "--methods", "contextual_hybrid", "--contextual-documents", str(ctx), "--out", str(tmp_path / "r")])
    calls = RunReport.load(tmp_path / "r" / "report.json")["contextual_hybrid"].calls
    assert not any(k.startswith("complete") for k in calls)


def test_sweep(data, tmp_path):
    main(["sweep", *data, "--axis", "rrf_k", "--values", "1,60", "--method", "hybrid_rrf", "--out", str(tmp_path / "s.csv")])
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0].startswith("axis,value,method") and len(lines) == 3


def test_bad_arguments(data, tmp_path):
    with pytest.raises(SystemExit):
        main(["nonsense"])
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("method: bm26\n")
    with pytest.raises(ValueError, match="bm26"):
        main(["run", "--config", str(cfg), *data])
