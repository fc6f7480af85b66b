"""Paired bootstrap significance and Bonferroni correction."""

from __future__ import annotations

from typing import Sequence

import numpy as np

DEFAULT_B = 10_000
DEFAULT_ALPHA = 0.05
_CHUNK_CELLS = 4_000_000


def paired_bootstrap(
    a: Sequence[float], b: Sequence[float], B: int = DEFAULT_B, seed: int = 42
) -> float:
    """Two-sided p-value for mean(a) != mean(b) from ``B`` paired resamples.

    Each resample draws query indices with replacement and records
    delta = mean(a - b) over them; p = min(1, 2 * min(P(delta <= 0), P(delta >= 0))).
    Resamples come from ``numpy.random.default_rng(seed)``, one row of n
    indices per replicate, drawn in row order.
    """
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    if a_arr.shape != b_arr.shape or a_arr.ndim != 1:
        raise ValueError(f"score vectors differ in shape: {a_arr.shape} vs {b_arr.shape}")
    n = a_arr.shape[0]
    if n < 2:
        raise ValueError("need at least two paired observations")
    if B < 1:
        raise ValueError("B must be positive")
    diff = a_arr - b_arr
    rng = np.random.default_rng(seed)
    rows = max(1, _CHUNK_CELLS // n)
    le = ge = 0
    done = 0
    while done < B:
        m = min(rows, B - done)
        idx = rng.integers(0, n, size=(m, n))
        deltas = diff[idx].mean(axis=1)
        le += int(np.count_nonzero(deltas <= 0))
        ge += int(np.count_nonzero(deltas >= 0))
        done += m
    return min(1.0, 2.0 * min(le, ge) / B)


def bonferroni(p_values: Sequence[float], m: int | None = None) -> list[float]:
    """Multiply each p-value by the comparison count ``m`` and clip at 1."""
    if not len(p_values):
        raise ValueError("no p-values given")
    m = len(p_values) if m is None else m
    if m < len(p_values):
        raise ValueError("m must be at least the number of p-values")
    return [min(1.0, p * m) for p in p_values]


def significant(adjusted_p: float, alpha: float = DEFAULT_ALPHA) -> bool:
    return adjusted_p < alpha
