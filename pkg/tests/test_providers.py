import json
import struct
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragbench.providers import (
    CallLedger,
    DimensionMismatchError,
    EmbeddingCache,
    HashEmbedder,
    ManagedCompletion,
    ManagedEmbedding,
    ManagedRerank,
    OfflineViolationError,
    OracleReranker,
    PermanentProviderError,
    ProviderError,
    RateLimiter,
    RequestPolicy,
    RetryError,
    ScriptedCompletion,
    ScriptError,
    cache_key,
    cached_embed,
    hash_embedder,
    with_retry,
)
from ragbench.providers import http


class CountingEmbedder:
    model_id = "count"

    def __init__(self, dimension=8, bad_dim=None):
        self.dimension = dimension
        self.bad_dim = bad_dim
        self.batches = []

    def embed(self, texts):
        self.batches.append(list(texts))
        dim = self.bad_dim or self.dimension
        return [np.full(dim, float(len(t)), dtype=np.float64) for t in texts]


# with_retry --------------------------------------------------------------------


def flaky(failures, exc=ProviderError):
    calls = []

    def action():
        calls.append(1)
        if len(calls) <= failures:
            raise exc("boom")
        return "ok"

    return action, calls


def test_retry_succeeds_on_third_attempt():
    action, calls = flaky(2)
    sleeps = []
    assert with_retry(RequestPolicy(3, 1.0, 2.0), action, sleep=sleeps.append) == "ok"
    assert len(calls) == 3
    assert sleeps == [1.0, 2.0]


def test_retry_gives_up_after_max_attempts():
    action, calls = flaky(10)
    with pytest.raises(RetryError) as err:
        with_retry(RequestPolicy(3), action, sleep=lambda s: None)
    assert len(calls) == 3
    assert err.value.attempts == 3
    assert isinstance(err.value.last_error, ProviderError)


def test_permanent_errors_are_not_retried():
    action, calls = flaky(10, PermanentProviderError)
    with pytest.raises(RetryError):
        with_retry(RequestPolicy(5), action, sleep=lambda s: None)
    assert len(calls) == 1


def test_policy_validation():
    with pytest.raises(ValueError):
        RequestPolicy(max_attempts=0)


# rate limiting ------------------------------------------------------------------


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now

    def sleep(self, s):
        self.now += s


@settings(max_examples=25)
@given(st.integers(1, 10), st.integers(1, 40), st.lists(st.floats(0, 20), max_size=40))
def test_no_window_exceeds_budget(n, calls, gaps):
    clock = FakeClock()
    limiter = RateLimiter(n, clock=clock, sleep=clock.sleep)
    times = []
    for i in range(calls):
        times.append(limiter.acquire())
        clock.now += gaps[i] if i < len(gaps) else 0.0
    for t in times:
        assert sum(1 for u in times if t <= u < t + 60.0) <= n


def test_n_plus_one_calls_spaced_a_minute():
    clock = FakeClock()
    limiter = RateLimiter(5, clock=clock, sleep=clock.sleep)
    times = [limiter.acquire() for _ in range(6)]
    assert times[:5] == [0.0] * 5
    assert times[5] == pytest.approx(60.0)


# cache ---------------------------------------------------------------------------


def test_cached_embed_hits_skip_provider():
    p, cache = CountingEmbedder(), EmbeddingCache()
    first = cached_embed(p, cache, ["a", "bb", "ccc"])
    assert len(first) == 3 and all(v.shape == (8,) for v in first)
    assert len(p.batches) == 1
    second = cached_embed(p, cache, ["a", "bb", "ccc"])
    assert len(p.batches) == 1
    for x, y in zip(first, second):
        assert x.tobytes() == y.tobytes()


def test_cached_embed_dedupes_and_batches():
    p, cache = CountingEmbedder(), EmbeddingCache()
    out = cached_embed(p, cache, ["x", "y", "x", "z"], batch_size=2)
    assert [b for b in p.batches] == [["x", "y"], ["z"]]
    assert [float(v[0]) for v in out] == [1.0, 1.0, 1.0, 1.0]


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        cached_embed(CountingEmbedder(8, bad_dim=7), EmbeddingCache(), ["a"])


def test_non_finite_vector_rejected():
    class Bad(CountingEmbedder):
        def embed(self, texts):
            return [np.full(8, np.nan) for _ in texts]

    with pytest.raises(PermanentProviderError):
        cached_embed(Bad(), EmbeddingCache(), ["a"])


def test_empty_text_rejected():
    with pytest.raises(ValueError):
        cached_embed(CountingEmbedder(), EmbeddingCache(), [""])


def test_cache_key_is_model_scoped():
    assert len(cache_key("m", "t")) == 32
    assert cache_key("m1", "t") != cache_key("m2", "t")
    assert cache_key("ab", "c") != cache_key("a", "bc")


def test_cache_file_format(tmp_path):
    cache = EmbeddingCache()
    key = cache_key("m", "hello")
    cache.put(key, np.array([1.5, -2.0, 0.25]))
    path = cache.save(tmp_path / "c.bin")
    data = path.read_bytes()
    assert data[:8] == b"RAGEMB1\x01"
    assert data[8:40] == key
    assert struct.unpack("<I", data[40:44]) == (3,)
    assert struct.unpack("<3f", data[44:56]) == (1.5, -2.0, 0.25)
    assert len(data) == 56


def test_cache_round_trip(tmp_path):
    p, cache = CountingEmbedder(5), EmbeddingCache(tmp_path / "c.bin")
    texts = [f"text {i}" for i in range(20)]
    original = cached_embed(p, cache, texts)
    cache.save()
    again = EmbeddingCache.load(tmp_path / "c.bin")
    assert sorted(again.keys()) == sorted(cache.keys())
    for key in cache.keys():
        assert again.get(key).tobytes() == cache.get(key).tobytes()
    p2 = CountingEmbedder(5)
    reloaded = cached_embed(p2, again, texts)
    assert p2.batches == []
    assert all(a.tobytes() == b.tobytes() for a, b in zip(original, reloaded))


def test_cache_rejects_bad_files(tmp_path):
    (tmp_path / "bad").write_bytes(b"NOTACACHE")
    with pytest.raises(ValueError):
        EmbeddingCache(tmp_path / "bad")
    (tmp_path / "trunc").write_bytes(b"RAGEMB1\x01" + b"\x00" * 10)
    with pytest.raises(ValueError):
        EmbeddingCache(tmp_path / "trunc")


# mocks -----------------------------------------------------------------------------


@given(st.text(max_size=60))
def test_hash_embedder_unit_and_deterministic(text):
    v = hash_embedder(text)
    assert abs(np.linalg.norm(v) - 1.0) <= 1e-9
    assert np.array_equal(v, hash_embedder(text))
    assert float(np.dot(v, hash_embedder(text))) == pytest.approx(1.0)


def test_hash_embedder_seed_and_similarity():
    a = hash_embedder("operating income increased", seed=0)
    assert not np.array_equal(a, hash_embedder("operating income increased", seed=1))
    near = hash_embedder("operating incomes increase")
    far = hash_embedder("zebra xylophone quartz")
    assert np.dot(a, near) > np.dot(a, far)


def test_scripted_completion_first_match_and_error():
    c = ScriptedCompletion([(r"foo", "one"), (r"f(o+)", lambda m, p: m.group(1)), (r"bar", "two")])
    assert c.complete("xfoo") == "one"
    assert c.complete("bar") == "two"
    with pytest.raises(ScriptError):
        c.complete("nothing")
    assert len(c.calls) == 3


def test_oracle_reranker_puts_gold_first():
    r = OracleReranker({"q": "g"})
    out = r.rerank("q", [("a", ""), ("b", ""), ("g", "")], 2)
    assert out[0] == ("g", 1.0)
    assert out[1][0] == "a" and out[1][1] < 1.0
    assert len(out) == 2


# managed wrappers and ledger --------------------------------------------------------


def test_ledger_records_every_attempt():
    ledger = CallLedger()

    class Flaky:
        model_id = "flaky"
        n = 0

        def complete(self, prompt, temperature, max_tokens):
            self.n += 1
            if self.n < 3:
                raise ProviderError("transient")
            return "fine"

    m = ManagedCompletion(Flaky(), ledger, RequestPolicy(3, 0.0), sleep=lambda s: None)
    assert m.complete("hi", 0.0, 5) == "fine"
    assert ledger.summary() == {"complete:flaky": {"calls": 3, "failed": 2, "items": 3, "chars": 6}}
    assert ledger.count("complete") == 1
    assert ledger.count("complete", ok=None) == 3


def test_managed_completion_rejects_missing_text():
    class Silent:
        model_id = "silent"

        def complete(self, prompt, temperature, max_tokens):
            return None

    with pytest.raises(PermanentProviderError):
        ManagedCompletion(Silent()).complete("x")


def test_managed_rerank_validates_contract():
    class Short:
        model_id = "short"

        def rerank(self, query, documents, top_n):
            return [(documents[0][0], 1.0)]

    with pytest.raises(PermanentProviderError):
        ManagedRerank(Short()).rerank("q", [("a", "x"), ("b", "y")], 2)
    ok = ManagedRerank(OracleReranker({"q": "b"})).rerank("q", [("a", "x"), ("b", "y")], 5)
    assert [d for d, _ in ok] == ["b", "a"]


def test_managed_embedding_counts_items():
    ledger = CallLedger()
    m = ManagedEmbedding(HashEmbedder(16), ledger)
    cached_embed(m, EmbeddingCache(), ["a b", "c", "a b"])
    assert ledger.summary()["embed:mock-hash-embed"] == {"calls": 1, "failed": 0, "items": 2, "chars": 4}


def test_ledger_concurrent_appends():
    ledger = CallLedger()
    threads = [threading.Thread(target=lambda: [ledger.record("k", "m", 1, 1) for _ in range(500)]) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert ledger.count("k") == 4000


# HTTP clients -------------------------------------------------------------------------


class _Handler(BaseHTTPRequestHandler):
    seen: list = []

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        _Handler.seen.append((self.path, body, self.headers.get("Authorization")))
        if self.path.endswith("/embeddings"):
            out = {"data": [{"index": i, "embedding": [float(i), 1.0]} for i in range(len(body["input"]))][::-1]}
        elif self.path.endswith("/chat/completions"):
            out = {"choices": [{"message": {"content": "42"}}]}
        elif self.path.endswith("/rerank"):
            out = {"results": [{"index": i, "relevance_score": 0.1 * i} for i in range(len(body["documents"]))]}
        else:
            self.send_response(503)
            self.end_headers()
            return
        data = json.dumps(out).encode()
        self.send_response(200)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def server():
    srv = HTTPServer(("127.0.0.1", 0), _Handler)
    t = threading.Thread(target=srv.serve_forever, daemon=True)
    t.start()
    http.set_offline(False)
    yield f"http://127.0.0.1:{srv.server_port}"
    srv.shutdown()
    http.set_offline(False)


def test_http_clients_speak_the_wire_format(server):
    _Handler.seen.clear()
    emb = http.OpenAIEmbeddings("m", 2, server, "secret")
    vecs = emb.embed(["a", "b"])
    assert [list(v) for v in vecs] == [[0.0, 1.0], [1.0, 1.0]]
    assert http.OpenAIChat("c", server, "secret").complete("q", 0.0, 8) == "42"
    ranked = http.CohereRerank("r", server, "secret").rerank("q", [("x", "t1"), ("y", "t2")], 2)
    assert ranked == [("y", pytest.approx(0.1)), ("x", 0.0)]
    paths = [p for p, _, _ in _Handler.seen]
    assert paths == ["/embeddings", "/chat/completions", "/rerank"]
    assert _Handler.seen[1][1]["temperature"] == 0.0 and _Handler.seen[1][1]["max_tokens"] == 8
    assert all(auth == "Bearer secret" for _, _, auth in _Handler.seen)


def test_http_5xx_is_retryable(server):
    with pytest.raises(ProviderError) as err:
        http.post_json(f"{server}/unknown", "k", {})
    assert err.value.retryable


def test_offline_mode_refuses_network(server):
    http.set_offline(True)
    with pytest.raises(OfflineViolationError):
        http.OpenAIChat("c", server, "k").complete("q")


def test_missing_credentials(monkeypatch):
    for var in http.ENV_VARS["llm"]:
        monkeypatch.delenv(var, raising=False)
    with pytest.raises(PermanentProviderError, match="RAGBENCH_LLM_KEY"):
        http.OpenAIChat("c")
