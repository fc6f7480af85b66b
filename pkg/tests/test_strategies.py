import pytest

from ragbench.corpus import Corpus, Document, Subset
from ragbench.fusion import RrfConfig, rrf_fuse
from ragbench.lexical import build_lexical_index
from ragbench.providers import (
    HashEmbedder,
    OracleReranker,
    ProviderBundle,
    RetryError,
    ScriptedCompletion,
    cached_embed,
)
from ragbench.strategies import (
    AlreadyContextualizedError,
    Bm25Retriever,
    CragTrace,
    DenseRetriever,
    HybridCcRetriever,
    HybridRrfRetriever,
    RelevanceLabel,
    StrategyConfig,
    contextualize_corpus,
    crag_retrieve,
    hyde_retrieve,
    multi_query_retrieve,
    parse_label,
    parse_variants,
    two_stage_retrieve,
)
from ragbench.fusion import ConvexConfig
from ragbench.vector import build_vector_index, vector_search


def bundle(rules=(), gold=None):
    return ProviderBundle.wrap(HashEmbedder(64), ScriptedCompletion(list(rules)), OracleReranker(gold or {}))


def dense_for(corpus, p):
    vecs = cached_embed(p.embedding, p.cache, [d.text for d in corpus])
    return DenseRetriever(build_vector_index(zip(corpus.doc_ids, vecs)), p.embedding, p.cache)


def hybrid_for(corpus, p):
    return HybridRrfRetriever(Bm25Retriever(build_lexical_index(corpus)), dense_for(corpus, p))


def test_strategy_config_validation():
    with pytest.raises(ValueError):
        StrategyConfig(multi_query_n=0)
    with pytest.raises(ValueError):
        StrategyConfig(crag_rewrite_temperature=-0.1)
    cfg = StrategyConfig()
    assert (cfg.rerank_pool, cfg.rerank_top_n, cfg.crag_top_k, cfg.hyde_max_tokens) == (50, 10, 5, 150)


# HyDE -------------------------------------------------------------------------------


def test_hyde_identical_passage_hits_document(toy_corpus):
    p = bundle([(r"Passage:", toy_corpus["d3"].text)])
    dense = dense_for(toy_corpus, p)
    r = hyde_retrieve("buybacks?", p.completion, p.embedding, p.cache, dense.index, k=3)
    assert r.doc_ids[0] == "d3"
    assert r.scores[0] == pytest.approx(1.0, abs=1e-6)


def test_hyde_empty_generation_falls_back_to_query(toy_corpus):
    p = bundle([(r"Passage:", "   ")])
    dense = dense_for(toy_corpus, p)
    q = "net income 2019"
    got = hyde_retrieve(q, p.completion, p.embedding, p.cache, dense.index, k=5)
    assert got.doc_ids == dense.retrieve(q, 5).doc_ids


def test_hyde_equals_manual_composition(toy_corpus):
    passage = "Revenue totals were reported in a table"
    p = bundle([(r"Passage:", passage)])
    dense = dense_for(toy_corpus, p)
    got = hyde_retrieve("anything", p.completion, p.embedding, p.cache, dense.index, k=4)
    manual = vector_search(dense.index, HashEmbedder(64).embed([passage])[0], 4)
    assert got.entries == manual.entries
    # the raw query itself was never embedded
    assert p.cache.get(__import__("ragbench").providers.cache_key("mock-hash-embed", "anything")) is None


def test_hyde_completion_failure_propagates(toy_corpus):
    p = bundle([])
    dense = dense_for(toy_corpus, p)
    with pytest.raises(RetryError):
        hyde_retrieve("q", p.completion, p.embedding, p.cache, dense.index, k=2)


# multi-query -----------------------------------------------------------------------


def test_parse_variants():
    text = "Here you go:\n1. first\n2. second\n  3. third\n10. too long\n4. fourth"
    assert parse_variants(text, 3) == ["first", "second", "third"]
    assert parse_variants("no numbers", 3) == []


def test_multi_query_identical_variants_keep_order(toy_corpus):
    q = "net income 2019"
    p = bundle([(r"Alternative queries:", f"1. {q}\n2. {q}\n3. {q}")])
    dense = dense_for(toy_corpus, p)
    assert multi_query_retrieve(q, p.completion, dense, k=5).doc_ids == dense.retrieve(q, 5).doc_ids


def test_multi_query_prose_degrades_to_original(toy_corpus):
    q = "share repurchases"
    p = bundle([(r"Alternative queries:", "I cannot think of any variants.")])
    dense = dense_for(toy_corpus, p)
    assert multi_query_retrieve(q, p.completion, dense, k=3).entries == dense.retrieve(q, 3).entries


def test_multi_query_equals_independent_fusion(toy_corpus):
    q = "revenue"
    variants = ["total revenue 2019", "dividends per share", "operating expenses"]
    p = bundle([(r"Alternative queries:", "\n".join(f"{i}. {v}" for i, v in enumerate(variants, 1)))])
    dense = dense_for(toy_corpus, p)
    before = p.ledger.count("complete")
    got = multi_query_retrieve(q, p.completion, dense, k=4)
    assert p.ledger.count("complete") - before == 1
    lists = [dense.retrieve(x, 4).doc_ids for x in [q, *variants]]
    scores = {}
    for ids in lists:
        for rank, d in enumerate(ids, 1):
            scores[d] = scores.get(d, 0.0) + 1 / (60 + rank)
    want = sorted(scores.items(), key=lambda e: (-e[1], e[0]))[:4]
    assert got.doc_ids == [d for d, _ in want]


# contextual --------------------------------------------------------------------------


def test_contextualize_prefix_and_guard(toy_corpus):
    p = bundle([(r"<document>", "ACME 2019 annual report.")])
    ctx = contextualize_corpus(toy_corpus, p.completion)
    assert ctx.doc_ids == toy_corpus.doc_ids and len(ctx) == len(toy_corpus)
    for before, after in zip(toy_corpus, ctx):
        assert after.text == "ACME 2019 annual report.\n\n" + before.text
    assert p.ledger.count("complete") == len(toy_corpus)
    with pytest.raises(AlreadyContextualizedError):
        contextualize_corpus(ctx, p.completion)


def test_contextual_df_counts_summaries(toy_corpus):
    def summary(m, prompt):
        return "zzsummary" if "2019" in m.group(0) else "other"

    p = bundle([(r"<document>\n.*\n</document>", summary)])
    ctx = contextualize_corpus(toy_corpus, p.completion, workers=3)
    expected = sum("2019" in d.text for d in toy_corpus)
    assert build_lexical_index(ctx).df("zzsummary") == expected
    assert build_lexical_index(toy_corpus).df("zzsummary") == 0


def test_contextualize_is_all_or_nothing(toy_corpus):
    p = bundle([(r"Net income", "ok")])  # other documents match no rule
    with pytest.raises(RetryError):
        contextualize_corpus(toy_corpus, p.completion)


# CRAG --------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, label",
    [
        ("RELEVANT", RelevanceLabel.RELEVANT),
        ("The document is IRRELEVANT.", RelevanceLabel.IRRELEVANT),
        ("maybe relevant?", RelevanceLabel.AMBIGUOUS),
        ("AMBIGUOUS or RELEVANT", RelevanceLabel.AMBIGUOUS),
        ("", RelevanceLabel.AMBIGUOUS),
    ],
)
def test_parse_label(text, label):
    assert parse_label(text) is label


def test_crag_all_relevant_takes_round_one(toy_corpus):
    p = bundle([(r"Classification:", "RELEVANT")])
    hybrid = hybrid_for(toy_corpus, p)
    trace: list[CragTrace] = []
    got = crag_retrieve("net income 2019", hybrid, p.completion, toy_corpus, trace=trace, k=5)
    assert p.ledger.count("complete") == 5
    assert got.doc_ids == hybrid.retrieve("net income 2019", 5).doc_ids
    assert not trace[0].corrected and trace[0].chosen_round == 1


def test_crag_rewrite_recovers_gold(toy_corpus):
    def grade(m, prompt):
        return "RELEVANT" if "repurchased" in m.group(2) and "buyback" in m.group(1) else "IRRELEVANT"

    rules = [
        (r"Question: (.*)\nDocument: (.*)\n\nRespond", grade),
        (r"Rewritten question:", "share buyback repurchased shares worth"),
    ]
    p = bundle(rules)
    hybrid = hybrid_for(toy_corpus, p)
    trace: list[CragTrace] = []
    got = crag_retrieve("dividends paid", hybrid, p.completion, toy_corpus, trace=trace, k=3)
    assert trace[0].corrected and trace[0].chosen_round == 2
    assert got.doc_ids[0] == "d3"
    assert p.ledger.count("complete") == 5 + 1 + 5
    rewrite_calls = [c for c in p.completion.inner.calls if "Rewritten question:" in c[0]]
    assert rewrite_calls[0][1] == 0.5


def test_crag_ambiguous_counts_toward_rewrite_and_tie_keeps_round_one(toy_corpus):
    p = bundle([(r"Classification:", "maybe relevant?"), (r"Rewritten question:", "revenue")])
    hybrid = hybrid_for(toy_corpus, p)
    trace: list[CragTrace] = []
    got = crag_retrieve("net income", hybrid, p.completion, toy_corpus, trace=trace, k=5)
    assert trace[0].corrected and trace[0].chosen_round == 1
    assert got.doc_ids == hybrid.retrieve("net income", 5).doc_ids


def test_crag_empty_rewrite_returns_round_one(toy_corpus):
    p = bundle([(r"Classification:", "IRRELEVANT"), (r"Rewritten question:", "")])
    hybrid = hybrid_for(toy_corpus, p)
    got = crag_retrieve("net income", hybrid, p.completion, toy_corpus, k=2)
    assert got.doc_ids == hybrid.retrieve("net income", 2).doc_ids
    assert p.ledger.count("complete") == 6


# two-stage ----------------------------------------------------------------------------


def test_two_stage_gold_in_pool_goes_first(toy_corpus):
    q = "net income 2019"
    p = bundle(gold={q: "d4"})
    hybrid = hybrid_for(toy_corpus, p)
    assert "d4" in hybrid.retrieve(q, 5).doc_ids
    got = two_stage_retrieve(q, hybrid, p.rerank, toy_corpus, StrategyConfig(rerank_pool=5, rerank_top_n=3))
    assert got.doc_ids[0] == "d4" and len(got) == 3
    assert set(got.doc_ids) <= set(hybrid.retrieve(q, 5).doc_ids)


def test_two_stage_cannot_recover_missing_gold():
    docs = [Document(f"d{i}", f"common filler {i}", Subset.FINQA) for i in range(30)]
    docs.append(Document("gold", "entirely unrelated vocabulary", Subset.FINQA))
    corpus = Corpus(docs)
    q = "common filler"
    p = bundle(gold={q: "gold"})
    first = Bm25Retriever(build_lexical_index(corpus))
    got = two_stage_retrieve(q, first, p.rerank, corpus, StrategyConfig(rerank_pool=20, rerank_top_n=10))
    assert "gold" not in got.doc_ids
    assert p.ledger.summary()["rerank:mock-oracle-rerank"]["items"] == 20


def test_hybrid_cc_empty_sparse(toy_corpus):
    p = bundle()
    sparse = Bm25Retriever(build_lexical_index(toy_corpus))
    dense = dense_for(toy_corpus, p)
    assert len(HybridCcRetriever(sparse, dense, ConvexConfig(0.0)).retrieve("qqqq", 3)) == 0
    assert len(HybridCcRetriever(sparse, dense, ConvexConfig(0.5)).retrieve("qqqq", 3)) == 3


def test_hybrid_rrf_matches_manual(toy_corpus):
    p = bundle()
    hybrid = hybrid_for(toy_corpus, p)
    q = "revenue 2019"
    lists = [hybrid.sparse.retrieve(q, 5), hybrid.dense.retrieve(q, 5)]
    assert hybrid.retrieve(q, 5).entries == rrf_fuse(lists, RrfConfig(), 5).entries
