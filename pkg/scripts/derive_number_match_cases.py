"""Derive pinned Number Match cases with exact rational arithmetic.

This script does not import the package. It parses each answer string with
its own small reader, then decides the match with fractions.Fraction:

    match  iff  exists s in SCALES with |s * pred - gold| <= EPS * max(|gold|, 1e-12)

Run from the repository root to regenerate tests/data/number_match_cases.json:

    python3 scripts/derive_number_match_cases.py
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

EPS = Fraction(1, 100)
SCALES = [Fraction(s) for s in ("0.01", "1", "100", "1000", "1000000", "1000000000", "0.001", "0.000001", "0.000000001")]
TINY = Fraction(1, 10**12)

CASES = [
    # (answer text, gold as decimal string)
    ("12.4", "12.5"),
    ("41%", "0.41"),
    ("UNANSWERABLE", "5"),
    ("$1,234.5 million", "1234.5"),
    ("The answer is 3.2 billion", "3200000000"),
    ("(25)", "-25"),
    ("-7.5%", "-0.075"),
    ("about 0.5", "50"),
    ("12.0", "12.13"),
    ("12.0", "12.2"),
    ("0.99", "1"),
    ("0.98", "1"),
    ("2,500", "2.5"),
    ("2,500", "2.6"),
    ("no numbers here", "3"),
    ("revenue grew 15 percent to 230", "15"),
    ("revenue grew 15 percent to 230", "230"),
    ("4.5e", "4.5"),
    ("£ 8,000,000", "8"),
    ("-3", "3"),
    ("0.0", "0"),
    ("Unanswerable: the value 42 is missing", "42"),
    ("1.01", "1"),
    ("1.0101", "1"),
    ("€0.35", "35"),
]

_NUM = re.compile(r"(\()?\s*([-+])?\s*(\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?|\.\d+)\s*%?\s*(\))?")


def read_first_number(text: str) -> Fraction | None:
    if "UNANSWERABLE" in text.upper():
        return None
    cleaned = re.sub(r"[$€£¥₹]", "", text)
    m = _NUM.search(cleaned)
    if m is None:
        return None
    value = Fraction(m.group(3).replace(",", ""))
    if m.group(2) == "-" or (m.group(1) and m.group(4)):
        value = -value
    return value


def decide(answer: str, gold: str) -> int:
    g = Fraction(gold)
    pred = read_first_number(answer)
    if pred is None:
        return 0
    tol = EPS * max(abs(g), TINY)
    return int(any(abs(s * pred - g) <= tol for s in SCALES))


def main() -> None:
    rows = [{"answer": a, "gold": float(Fraction(g)), "expected": decide(a, g)} for a, g in CASES]
    out = Path(__file__).resolve().parent.parent / "tests" / "data" / "number_match_cases.json"
    out.write_text(json.dumps(rows, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(rows)} cases to {out}")


if __name__ == "__main__":
    main()
