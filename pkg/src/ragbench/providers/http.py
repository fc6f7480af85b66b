"""Plain JSON-over-HTTP clients for OpenAI-compatible and Cohere-style endpoints.

Endpoints and keys come from the environment:

    RAGBENCH_EMBED_ENDPOINT / RAGBENCH_EMBED_KEY
    RAGBENCH_LLM_ENDPOINT / RAGBENCH_LLM_KEY
    RAGBENCH_RERANK_ENDPOINT / RAGBENCH_RERANK_KEY
"""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .base import OfflineViolationError, PermanentProviderError, ProviderError

ENV_VARS = {
    "embed": ("RAGBENCH_EMBED_ENDPOINT", "RAGBENCH_EMBED_KEY"),
    "llm": ("RAGBENCH_LLM_ENDPOINT", "RAGBENCH_LLM_KEY"),
    "rerank": ("RAGBENCH_RERANK_ENDPOINT", "RAGBENCH_RERANK_KEY"),
}

_offline = False


def set_offline(flag: bool) -> None:
    """Globally forbid (or allow) network calls from the clients below."""
    global _offline
    _offline = flag


def credentials(service: str) -> tuple[str, str]:
    endpoint_var, key_var = ENV_VARS[service]
    endpoint, key = os.environ.get(endpoint_var), os.environ.get(key_var)
    if not endpoint or not key:
        raise PermanentProviderError(f"set {endpoint_var} and {key_var} for the {service} service")
    return endpoint.rstrip("/"), key


def post_json(url: str, key: str, payload: dict[str, Any], timeout: float = 60.0) -> Any:
    if _offline:
        raise OfflineViolationError(f"network call to {url} refused in offline mode")
    req = urllib.request.Request(
        url,
        data=json.dumps(payload).encode("utf-8"),
        headers={
            "Content-Type": "application/json",
            "Authorization": f"Bearer {key}",
            "api-key": key,
        },
        method="POST",
    )
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as exc:
        err = ProviderError if exc.code == 429 or exc.code >= 500 else PermanentProviderError
        raise err(f"HTTP {exc.code} from {url}") from None
    except (urllib.error.URLError, TimeoutError) as exc:
        raise ProviderError(f"request to {url} failed: {exc}") from None


@dataclass
class OpenAIEmbeddings:
    model_id: str = "text-embedding-3-large"
    dimension: int = 3072
    endpoint: str = ""
    key: str = field(default="", repr=False)

    def __post_init__(self) -> None:
        if not self.endpoint or not self.key:
            self.endpoint, self.key = credentials("embed")

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        body = post_json(f"{self.endpoint}/embeddings", self.key, {"model": self.model_id, "input": list(texts)})
        rows = sorted(body["data"], key=lambda r: r["index"])
        return [np.asarray(r["embedding"], dtype=np.float32) for r in rows]


@dataclass
class OpenAIChat:
    model_id: str = "gpt-4.1-mini"
    endpoint: str = ""
    key: str = field(default="", repr=False)

    def __post_init__(self) -> None:
        if not self.endpoint or not self.key:
            self.endpoint, self.key = credentials("llm")

    def complete(self, prompt: str, temperature: float = 0.0, max_tokens: int = 256) -> str:
        body = post_json(
            f"{self.endpoint}/chat/completions",
            self.key,
            {
                "model": self.model_id,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": temperature,
                "max_tokens": max_tokens,
            },
        )
        content = body["choices"][0]["message"].get("content")
        if content is None:
            raise ProviderError(f"{self.model_id} returned an empty message")
        return content


@dataclass
class CohereRerank:
    model_id: str = "Cohere-rerank-v4.0-pro"
    endpoint: str = ""
    key: str = field(default="", repr=False)

    def __post_init__(self) -> None:
        if not self.endpoint or not self.key:
            self.endpoint, self.key = credentials("rerank")

    def rerank(
        self, query: str, documents: Sequence[tuple[str, str]], top_n: int
    ) -> list[tuple[str, float]]:
        body = post_json(
            f"{self.endpoint}/rerank",
            self.key,
            {
                "model": self.model_id,
                "query": query,
                "documents": [text for _, text in documents],
                "top_n": top_n,
            },
        )
        results = sorted(body["results"], key=lambda r: (-r["relevance_score"], r["index"]))
        return [(documents[r["index"]][0], float(r["relevance_score"])) for r in results]
