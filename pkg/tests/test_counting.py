from __future__ import annotations

import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpf.constants import constant_report
from lpf.counting import (
    asymptotic_A_prime,
    asymptotic_E,
    count_A,
    count_A_prime,
    count_E,
    count_record,
    enumerate_N_B,
)
from lpf.errors import InvalidInput, UnsupportedQ
from lpf.mgroup import factorize, least_primary_factor, next_prime_power
from lpf.residues import ResidueClassSet, residue_set_B

QS = (3, 4, 5, 7, 8, 9)


def S_list(x):
    return {n: least_primary_factor(n).value for n in range(3, x + 1)}


@pytest.mark.parametrize("q, x, n", [(3, 100, 15), (3, 4, 1), (3, 0.5, 0), (3, 1, 1), (4, 1e2, 11)])
def test_count_A_prime_examples(q, x, n):
    for mode in ("sieve", "predicate", "oracle"):
        assert count_A_prime(q, x, mode=mode) == n


def test_count_A_examples():
    assert count_A(3, 10) == 4
    assert count_A(3, 2) == 2
    S = S_list(100)
    assert count_A(4, 100) == 2 + sum(1 for s in S.values() if s >= 4)


def test_count_E_examples():
    assert count_E(3, 30) == 2
    assert count_E(3, 12) == 0
    # 28 integers in [3, 30]; S >= 3 for 5, 10, 13, 17, 25, 26, 29
    assert count_E(2, 30) == 21
    assert count_E(5, 2) == 0


def test_counts_match_definition():
    x = 3000
    S = S_list(x)
    for q in (2,) + QS:
        assert count_E(q, x) == sum(1 for s in S.values() if s == q)
    for q in QS:
        assert count_A(q, x) == 2 + sum(1 for s in S.values() if s >= q)
        assert count_A_prime(q, x) == 1 + sum(1 for n, s in S.items() if n % 2 and s >= q)


@pytest.mark.parametrize("q", QS)
def test_modes_agree(q):
    for x in (1, 2, 7, 100, 999.5, 4000):
        vals = {m: count_A_prime(q, x, mode=m) for m in ("sieve", "predicate", "oracle")}
        assert len(set(vals.values())) == 1, vals


def test_unknown_mode():
    with pytest.raises(InvalidInput):
        count_A_prime(3, 10, mode="guess")


def test_rejects_non_prime_power():
    with pytest.raises(InvalidInput):
        count_E(6, 100)
    with pytest.raises(InvalidInput):
        count_A_prime(2, 100)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=20000), st.sampled_from(QS))
def test_identities(x, q):
    assert count_A(q, x) == count_A_prime(q, x) + count_A_prime(q, x / 2)
    assert count_E(q, x) == count_A(q, x) - count_A(next_prime_power(q), x)
    assert count_E(q, x) >= 0


def test_enumerate_examples():
    assert enumerate_N_B(residue_set_B(3), 30) == [1, 5, 13, 17, 25, 29]
    assert enumerate_N_B(residue_set_B(4), 1) == [1]
    assert enumerate_N_B(residue_set_B(4), 0.5) == []
    # 17, 53 and 89 are 17 mod 36, and 85 = 5 * 17
    assert enumerate_N_B(residue_set_B(4), 100) == [1, 5, 17, 25, 29, 37, 41, 53, 73, 85, 89]


def test_enumerate_against_factorization_filter():
    for q in QS:
        B = residue_set_B(q)
        want = [1] + [n for n in range(2, 5001) if all(p in B for p, _ in factorize(n))]
        assert enumerate_N_B(B, 5000) == want


def test_enumerate_custom_set():
    B = ResidueClassSet(3, (1,))
    assert enumerate_N_B(B, 50) == [1, 7, 13, 19, 31, 37, 43, 49]


def test_asymptotic_at_e():
    # log x = 1, so the main terms reduce to their constants times e
    x = math.e
    C3 = constant_report(3).C.midpoint
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert asymptotic_E(3, x) == pytest.approx(C3 * x, rel=1e-15)
        assert asymptotic_A_prime(3, x) == pytest.approx(2 / 3 * C3 * x, rel=1e-15)
        with pytest.raises(InvalidInput):
            asymptotic_E(3, 2.5)


def test_asymptotic_examples():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert asymptotic_E(3, 1e6) == pytest.approx(0.490694e6 / math.log(1e6) ** 0.5, rel=2e-6)
        assert asymptotic_E(5, 1e6) == pytest.approx(0.2095134e6 / math.log(1e6) ** (5 / 6), rel=2e-6)
        assert asymptotic_E(2, 1e6) == pytest.approx(1e6 - asymptotic_E(3, 1e6))


def test_asymptotic_A_prime_q4_uses_pipeline():
    rep = constant_report(4)
    x = 1e7
    expected = rep.C.midpoint * 2 / 3 * x / math.log(x) ** (2 / 3)
    assert asymptotic_A_prime(4, x) == pytest.approx(expected, rel=1e-15)
    # the same value assembled from the reported sub-factors
    G_over_gamma = 3 ** (-1 / 3) * rep.L_product * rep.A_product_root.midpoint / math.gamma(1 / 3)
    assert asymptotic_A_prime(4, x) == pytest.approx(G_over_gamma * x / math.log(x) ** (2 / 3), rel=1e-13)


def test_warning_when_q_large():
    with pytest.warns(UserWarning):
        asymptotic_E(3, 100)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        asymptotic_E(2, 1e6)


def test_unsupported_q():
    with pytest.raises(UnsupportedQ):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            asymptotic_E(13, 1e6)
    with pytest.raises(UnsupportedQ):
        asymptotic_A_prime(2, 1e6)


def test_count_record():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rec = count_record(3, 1000)
        assert rec.count_E == count_E(3, 1000)
        assert rec.ratio_E == pytest.approx(rec.count_E / rec.main_term_E)
        zero = count_record(3, 0)
        assert (zero.count_A, zero.count_E, zero.main_term_E, zero.ratio_E) == (0, 0, None, None)
        big = count_record(13, 100)
        assert big.main_term_E is None and big.count_E == count_E(13, 100)


def test_count_A_nonincreasing_in_q():
    for x in (10, 1000, 20000):
        vals = [count_A(q, x) for q in QS + (11, 13, 16)]
        assert vals == sorted(vals, reverse=True)
