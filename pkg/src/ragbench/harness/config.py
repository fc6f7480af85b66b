"""Experiment configuration: dataclasses mirrored by a nested YAML document."""

from __future__ import annotations

import dataclasses
import types
import typing
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from ..eval.generation import NumberMatchConfig
from ..fusion import ConvexConfig, RrfConfig
from ..lexical import Bm25Params, TokenizerConfig
from ..strategies.base import StrategyConfig

METHODS = (
    "bm25",
    "dense",
    "hybrid_rrf",
    "hybrid_cc",
    "hybrid_rerank",
    "hyde",
    "multi_query",
    "contextual_dense",
    "contextual_hybrid",
    "crag",
    "oracle",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ServiceConfig:
    model: str = ""
    dimension: int | None = None


@dataclass(frozen=True)
class MockRule:
    pattern: str
    response: str


@dataclass(frozen=True)
class MockConfig:
    dimension: int = 256
    seed: int = 0
    rules: tuple[MockRule, ...] = ()


@dataclass(frozen=True)
class ProviderConfig:
    offline: bool = True
    embedding: ServiceConfig = ServiceConfig("text-embedding-3-large", 3072)
    completion: ServiceConfig = ServiceConfig("gpt-4.1-mini")
    rerank: ServiceConfig = ServiceConfig("Cohere-rerank-v4.0-pro")
    max_attempts: int = 3
    base_delay: float = 1.0
    multiplier: float = 2.0
    rate_limit: float | None = None
    max_in_flight: int = 8
    mock: MockConfig = MockConfig()


@dataclass(frozen=True)
class GenerationConfig:
    top_k: int = 5
    temperature: float = 0.0
    max_tokens: int = 64


@dataclass(frozen=True)
class BootstrapConfig:
    B: int = 10_000
    alpha: float = 0.05


@dataclass(frozen=True)
class Paths:
    documents: str | None = None
    queries: str | None = None
    cache: str | None = None
    output_dir: str = "out"
    prompts_dir: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    method: str = "hybrid_rrf"
    seed: int = 42
    cutoffs: tuple[int, ...] = (1, 3, 5, 10, 20)
    workers: int = 1
    tokenizer: TokenizerConfig = TokenizerConfig()
    bm25: Bm25Params = Bm25Params()
    rrf: RrfConfig = RrfConfig()
    convex: ConvexConfig = ConvexConfig()
    strategy: StrategyConfig = StrategyConfig()
    number_match: NumberMatchConfig = NumberMatchConfig()
    generation: GenerationConfig = GenerationConfig()
    bootstrap: BootstrapConfig = BootstrapConfig()
    providers: ProviderConfig = ProviderConfig()
    paths: Paths = Paths()

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; expected one of {', '.join(METHODS)}")
        if not self.cutoffs or any(k < 1 for k in self.cutoffs):
            raise ConfigError("cutoffs must be positive integers")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def replace(self, **changes: Any) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return _to_plain(self)


def _to_plain(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj):
        return {f.name: _to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    return obj


def _build(tp: Any, data: Any, where: str) -> Any:
    origin = typing.get_origin(tp)
    if dataclasses.is_dataclass(tp):
        if not isinstance(data, dict):
            raise ConfigError(f"{where}: expected a mapping")
        hints = typing.get_type_hints(tp)
        names = {f.name for f in dataclasses.fields(tp) if f.init}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"{where}: unknown key(s) {', '.join(sorted(unknown))}")
        kwargs = {k: _build(hints[k], v, f"{where}.{k}" if where else k) for k, v in data.items()}
        try:
            return tp(**kwargs)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where or 'config'}: {exc}") from exc
    if origin is tuple:
        (inner, *_) = typing.get_args(tp)
        if not isinstance(data, (list, tuple)):
            raise ConfigError(f"{where}: expected a list")
        return tuple(_build(inner, v, f"{where}[{i}]") for i, v in enumerate(data))
    if origin is typing.Union or origin is types.UnionType:
        if data is None:
            return None
        options = [a for a in typing.get_args(tp) if a is not type(None)]
        return _build(options[0], data, where)
    if tp is float and isinstance(data, int) and not isinstance(data, bool):
        return float(data)
    if tp in (int, float, str, bool) and not isinstance(data, tp):
        raise ConfigError(f"{where}: expected {tp.__name__}, got {data!r}")
    return data


def config_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    return _build(ExperimentConfig, data or {}, "")


def load_config(path: str | Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    return config_from_dict(data)


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)
