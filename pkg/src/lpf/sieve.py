"""Bulk evaluation of S(n) by a segmented factor-stripping sieve.

For odd primes p, S(p^r) = s(p) = min over l | p-1 of l^{v_l(p-1)}.  For
p = 2 the factor 2^r contributes 2 when r >= 2 and nothing when r = 1.
S(n) is the minimum contribution over p^r || n.

Each segment is processed twice: first to find its primes and their s(p)
(stripping p - 1 by primes up to sqrt(x)), then to strip n itself and
look up s of the single prime cofactor above sqrt(x), if any.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapacityError, InvalidInput
from .mgroup import least_prime_power_part
from .primes import prime_sieve, primes_in_range

DEFAULT_SEGMENT = 1 << 22
MAX_SIEVE_BOUND = 10**9
CACHE_MAGIC = b"LPFSPV01"
_NONE = np.iinfo(np.int64).max


def available_memory() -> int | None:
    """Bytes of free physical memory, or None where the OS does not say."""
    try:
        return os.sysconf("SC_PAGE_SIZE") * os.sysconf("SC_AVPHYS_PAGES")
    except (AttributeError, ValueError, OSError):
        return None


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LPF_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SieveTable:
    """S(n) for 3 <= n <= bound; entries 0, 1, 2 hold 0 (undefined)."""

    bound: int
    s_values: np.ndarray
    primes: np.ndarray
    s_of_prime: np.ndarray

    def __getitem__(self, n: int) -> int:
        if n < 3 or n > self.bound:
            raise InvalidInput(f"S({n}) not in table")
        return int(self.s_values[n])

    def odd_values(self, x: float) -> np.ndarray:
        """S(n) for odd 3 <= n <= x."""
        X = min(int(math.floor(x)), self.bound)
        return self.s_values[3 : X + 1 : 2]

    def A_prime_list(self, q: int, x: float) -> list[int]:
        """1 together with the odd n <= x having S(n) >= q."""
        if x < 1:
            return []
        X = int(math.floor(x))
        if X > self.bound:
            raise CapacityError(f"x = {X} beyond sieve bound {self.bound}")
        odd = np.flatnonzero(self.odd_values(X) >= q) * 2 + 3
        return [1] + odd.tolist()


def _strip_range(lo: int, hi: int, small_primes: np.ndarray, contribution):
    """Strip every small prime out of n in [lo, hi).

    Returns (best, rem): the minimum of contribution(p, e) over the
    small primes p^e || n, and the leftover cofactor (1 or a prime).
    """
    vals = np.arange(lo, hi, dtype=np.int64)
    rem = vals.copy()
    best = np.full(hi - lo, _NONE, dtype=np.int64)
    for p in small_primes.tolist():
        if p * p >= hi:
            break
        idx = np.arange((-lo) % p, hi - lo, p)
        if idx.size == 0:
            continue
        sub = rem[idx] // p
        e = np.ones(idx.size, dtype=np.int64)
        live = np.flatnonzero(sub % p == 0)
        while live.size:
            sub[live] //= p
            e[live] += 1
            live = live[sub[live] % p == 0]
        rem[idx] = sub
        best[idx] = np.minimum(best[idx], contribution(p, e))
    return best, rem


def _strip_values(vals: np.ndarray, small_primes: np.ndarray, contribution):
    """Same as _strip_range for an arbitrary array of values."""
    rem = vals.astype(np.int64).copy()
    best = np.full(vals.size, _NONE, dtype=np.int64)
    top = int(vals.max()) if vals.size else 0
    for p in small_primes.tolist():
        if p * p > top:
            break
        idx = np.flatnonzero(rem % p == 0)
        if idx.size == 0:
            continue
        sub = rem[idx] // p
        e = np.ones(idx.size, dtype=np.int64)
        live = np.flatnonzero(sub % p == 0)
        while live.size:
            sub[live] //= p
            e[live] += 1
            live = live[sub[live] % p == 0]
        rem[idx] = sub
        best[idx] = np.minimum(best[idx], contribution(p, e))
    return best, rem


def _prime_power_contribution(p, e):
    return p ** e


def _S_contribution(s_small: dict[int, int]):
    def contrib(p, e):
        if p == 2:
            return np.where(e >= 2, 2, _NONE)
        return s_small[p]

    return contrib


def _lpp_range(lo: int, hi: int, small_primes: np.ndarray) -> np.ndarray:
    """min over l | m of l^{v_l(m)} for m in [lo, hi), lo >= 2."""
    best, rem = _strip_range(lo, hi, small_primes, _prime_power_contribution)
    big = rem > 1
    best[big] = np.minimum(best[big], rem[big])
    return best


def _small_s(small_primes: np.ndarray) -> dict[int, int]:
    return {p: least_prime_power_part(p - 1) for p in small_primes.tolist() if p > 2}


def _segments(lo: int, hi: int, size: int):
    while lo < hi:
        yield lo, min(hi, lo + size)
        lo += size


def _phase_one(seg, small_primes):
    """Odd primes in [lo, hi) and their s(p)."""
    lo, hi = seg
    ps = primes_in_range(max(lo, 3), hi, small_primes)
    if ps.size == 0:
        return ps, ps
    m_lo = int(ps[0]) - 1
    lpp = _lpp_range(m_lo, int(ps[-1]), small_primes)
    return ps, lpp[ps - 1 - m_lo]


def _phase_two(seg, small_primes, s_small, primes, s_of_prime, out):
    lo, hi = seg
    lo3 = max(lo, 3)
    if lo3 >= hi:
        return
    best, rem = _strip_range(lo3, hi, small_primes, _S_contribution(s_small))
    big = np.flatnonzero(rem > 2)
    if big.size:
        pos = np.searchsorted(primes, rem[big])
        best[big] = np.minimum(best[big], s_of_prime[pos])
    out[lo3:hi] = best


def sieve_least_primary(
    x: int,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int | None = None,
    cache_dir: str | os.PathLike | None = None,
) -> SieveTable:
    """S(n) for every 3 <= n <= x."""
    x = int(x)
    if x < 3:
        raise InvalidInput("sieve bound must be at least 3")
    if x > MAX_SIEVE_BOUND:
        raise CapacityError(f"sieve bound {x} exceeds {MAX_SIEVE_BOUND}")
    need = 8 * (x + 1) + 24 * min(x + 1, segment_size)
    free = available_memory()
    if free is not None and need > free:
        raise CapacityError(f"sieve to {x} needs about {need >> 20} MiB, {free >> 20} MiB free")
    threads = threads or thread_count()
    small = prime_sieve(math.isqrt(x) + 1)
    segs = list(_segments(0, x + 1, segment_size))

    cached = None
    if cache_dir is not None:
        path = cache_path(cache_dir, x)
        if path.exists():
            cached = read_sp_cache(path)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        if cached is None:
            parts = list(pool.map(lambda s: _phase_one(s, small), segs))
            primes = np.concatenate([p for p, _ in parts])
            s_of_prime = np.concatenate([s for _, s in parts])
            if cache_dir is not None:
                write_sp_cache(cache_path(cache_dir, x), primes, s_of_prime)
        else:
            primes, s_of_prime = cached
        s_small = _small_s(small)
        try:
            out = np.zeros(x + 1, dtype=np.int64)
        except MemoryError as exc:
            raise CapacityError(f"cannot allocate the S table for x = {x}") from exc
        list(pool.map(lambda s: _phase_two(s, small, s_small, primes, s_of_prime, out), segs))
    return SieveTable(x, out, primes, s_of_prime)


def least_primary_bulk(ns) -> np.ndarray:
    """S(n) for an arbitrary array of n >= 3, using the same stripping rule."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        return ns
    if ns.min() < 3:
        raise InvalidInput("S(n) is undefined for n < 3")
    small = prime_sieve(math.isqrt(int(ns.max())) + 1)
    best, rem = _strip_values(ns, small, _S_contribution(_small_s(small)))
    big = np.flatnonzero(rem > 2)
    for i in big.tolist():
        best[i] = min(best[i], least_prime_power_part(int(rem[i]) - 1))
    return best


# ---------------------------------------------------------------- disk cache


def cache_path(cache_dir, bound: int) -> Path:
    return Path(cache_dir) / f"lpf_sp_{int(bound)}.bin"


def write_sp_cache(path, primes: np.ndarray, s_of_prime: np.ndarray) -> None:
    """Magic header then little-endian int64 pairs (p, s(p))."""
    pairs = np.empty((primes.size, 2), dtype="<i8")
    pairs[:, 0] = primes
    pairs[:, 1] = s_of_prime
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(pairs.tobytes())
    os.replace(tmp, path)


def read_sp_cache(path) -> tuple[np.ndarray, np.ndarray]:
    raw = Path(path).read_bytes()
    if raw[:8] != CACHE_MAGIC:
        raise InvalidInput(f"{path}: bad cache header")
    body = raw[8:]
    if len(body) % 16:
        raise InvalidInput(f"{path}: truncated cache")
    pairs = np.frombuffer(body, dtype="<i8").reshape(-1, 2).astype(np.int64)
    return pairs[:, 0].copy(), pairs[:, 1].copy()
