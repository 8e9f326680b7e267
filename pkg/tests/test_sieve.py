from __future__ import annotations

import numpy as np
import pytest

from lpf.errors import CapacityError, InvalidInput
from lpf.mgroup import least_primary_factor
from lpf.sieve import (
    cache_path,
    least_primary_bulk,
    read_sp_cache,
    sieve_least_primary,
    thread_count,
    write_sp_cache,
)


def test_small_table():
    t = sieve_least_primary(30)
    assert [t[n] for n in range(3, 31)] == [least_primary_factor(n).value for n in range(3, 31)]
    with pytest.raises(InvalidInput):
        t[2]
    with pytest.raises(InvalidInput):
        t[31]


def test_matches_group_structure(table_1e5):
    want = np.array([least_primary_factor(n).value for n in range(3, 10**5 + 1)])
    assert np.array_equal(table_1e5.s_values[3:], want)


@pytest.mark.parametrize("segment, threads", [(1000, 1), (4097, 3), (1 << 16, 2)])
def test_segmentation_and_threads_do_not_matter(table_1e5, segment, threads):
    t = sieve_least_primary(10**5, segment_size=segment, threads=threads)
    assert np.array_equal(t.s_values, table_1e5.s_values)


def test_thread_env(monkeypatch):
    monkeypatch.setenv("LPF_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("LPF_THREADS", "junk")
    assert thread_count() == 1


def test_bounds():
    with pytest.raises(InvalidInput):
        sieve_least_primary(2)
    with pytest.raises(CapacityError):
        sieve_least_primary(10**9 + 1)


def test_bulk_random():
    rng = np.random.default_rng(12345)
    ns = rng.integers(3, 10**9, size=300)
    ns = np.concatenate([ns, [3, 4, 8, 9, 17, 2**30, 3**18, 999999937]])
    got = least_primary_bulk(ns)
    assert got.tolist() == [least_primary_factor(int(n)).value for n in ns]
    with pytest.raises(InvalidInput):
        least_primary_bulk([2, 5])


def test_A_prime_list(table_1e5):
    assert table_1e5.A_prime_list(3, 30) == [1, 5, 13, 17, 25, 29]
    assert table_1e5.A_prime_list(3, 0) == []
    with pytest.raises(CapacityError):
        table_1e5.A_prime_list(3, 10**6)


def test_cache_roundtrip(tmp_path, table_1e5):
    t = sieve_least_primary(10**5, cache_dir=tmp_path)
    path = cache_path(tmp_path, 10**5)
    assert path.exists() and path.read_bytes()[:8] == b"LPFSPV01"
    ps, ss = read_sp_cache(path)
    assert np.array_equal(ps, t.primes) and np.array_equal(ss, t.s_of_prime)
    again = sieve_least_primary(10**5, cache_dir=tmp_path)
    assert np.array_equal(again.s_values, table_1e5.s_values)


def test_cache_rejects_garbage(tmp_path):
    bad = tmp_path / "x.bin"
    bad.write_bytes(b"NOTMAGIC" + b"\0" * 16)
    with pytest.raises(InvalidInput):
        read_sp_cache(bad)
    write_sp_cache(bad, np.array([3, 5]), np.array([2, 4]))
    bad.write_bytes(bad.read_bytes()[:-3])
    with pytest.raises(InvalidInput):
        read_sp_cache(bad)


def test_memory_preflight(monkeypatch):
    import lpf.sieve as sv

    monkeypatch.setattr(sv, "available_memory", lambda: 1000)
    with pytest.raises(CapacityError):
        sieve_least_primary(10**4)


def test_tiny_tables():
    assert sieve_least_primary(3)[3] == 2
    t = sieve_least_primary(30)
    assert (t[13], t[26], t[5], t[17]) == (3, 3, 4, 16)
    assert all(sieve_least_primary(10)[n] == 2 for n in (3, 4, 6, 7, 8, 9))
