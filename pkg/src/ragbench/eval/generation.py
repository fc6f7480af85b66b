"""Answer-quality metrics: Number Match, token F1, ROUGE-L."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_SCALES = (0.01, 1.0, 100.0, 1e3, 1e6, 1e9, 1e-3, 1e-6, 1e-9)


@dataclass(frozen=True)
class NumberMatchConfig:
    epsilon: float = 1e-2
    scale_set: tuple[float, ...] = DEFAULT_SCALES

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if 1.0 not in self.scale_set or any(s <= 0 for s in self.scale_set):
            raise ValueError("scale_set must hold positive reals including 1")


_TINY = Fraction(1, 10**12)
_CURRENCY = re.compile(r"[$€£¥₹]")
_NUMBER = re.compile(
    r"(?P<open>\(\s*)?"
    r"(?P<sign>[-+−])?\s*"
    r"(?P<num>\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?|\.\d+)"
    r"(?:\s*%)?"
    r"(?P<close>\s*\))?"
)


def _first_literal(text: str) -> Fraction | None:
    m = _NUMBER.search(_CURRENCY.sub("", text))
    if m is None:
        return None
    value = Fraction(m.group("num").replace(",", ""))
    negative = m.group("sign") in ("-", "−") or (m.group("open") and m.group("close"))
    return -value if negative else value


def extract_number(text: str) -> float | None:
    """First numeric literal in ``text``.

    Currency symbols, thousands separators and percent signs are dropped;
    ``(1,234)`` reads as -1234.
    """
    value = _first_literal(text)
    return None if value is None else float(value)


def number_match(answer_text: str, gold: float, cfg: NumberMatchConfig = NumberMatchConfig()) -> int:
    """1 when the first number in the answer equals ``gold`` up to relative tolerance
    under some scale factor from ``cfg.scale_set``; otherwise 0.

    The comparison runs in exact decimal arithmetic (each float read as its
    shortest decimal form), so answers exactly at the tolerance boundary match.
    """
    if not math.isfinite(gold):
        raise ValueError("gold answer must be finite")
    if "UNANSWERABLE" in answer_text.upper():
        return 0
    pred = _first_literal(answer_text)
    if pred is None:
        return 0
    g = Fraction(repr(float(gold)))
    tol = Fraction(repr(cfg.epsilon)) * max(abs(g), _TINY)
    return int(any(abs(Fraction(repr(float(s))) * pred - g) <= tol for s in cfg.scale_set))


def _tokens(text: str) -> list[str]:
    return text.lower().split()


def token_f1(pred: str, gold: str) -> float:
    p, g = _tokens(pred), _tokens(gold)
    if not p and not g:
        return 1.0
    if not p or not g:
        return 0.0
    overlap = sum((Counter(p) & Counter(g)).values())
    if overlap == 0:
        return 0.0
    precision, recall = overlap / len(p), overlap / len(g)
    return 2 * precision * recall / (precision + recall)


def lcs_length(a: list[str], b: list[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(pred: str, gold: str) -> float:
    """LCS-based F-measure over lower-cased whitespace tokens (beta = 1)."""
    p, g = _tokens(pred), _tokens(gold)
    if not p and not g:
        return 1.0
    if not p or not g:
        return 0.0
    lcs = lcs_length(p, g)
    if lcs == 0:
        return 0.0
    precision, recall = lcs / len(p), lcs / len(g)
    return 2 * precision * recall / (precision + recall)


def format_gold(value: float) -> str:
    """Render a gold number as text for the token-overlap metrics (``12.0`` -> ``12``)."""
    return f"{value:.12g}"
