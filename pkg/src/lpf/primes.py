"""Bulk prime generation with numpy."""

from __future__ import annotations

import math

import numpy as np


def prime_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def primes_in_range(lo: int, hi: int, base_primes: np.ndarray | None = None) -> np.ndarray:
    """Primes in [lo, hi) by a segmented sieve."""
    lo = max(lo, 2)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    if base_primes is None:
        base_primes = prime_sieve(math.isqrt(hi - 1))
    is_p = np.ones(hi - lo, dtype=bool)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, (lo + p - 1) // p * p)
        is_p[start - lo :: p] = False
    return np.flatnonzero(is_p).astype(np.int64) + lo
