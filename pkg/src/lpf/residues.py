"""Residue-class description of the condition S(m) >= q.

For a prime power q every odd prime p dividing m must avoid certain
classes modulo l^{m(l,q)+1} for each prime l < q.  Combining those local
conditions by CRT gives a set of reduced classes B_q modulo Q_q; the
integers all of whose prime factors lie in B_q are exactly the odd m
with S(m) >= q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CapacityError, InvalidInput
from .mgroup import PrimePower, factorize, is_prime, m_exponent, next_prime_power

MAX_MODULUS = 2**32
PHI_CAP = 200_000

RationalNumber = Fraction


@dataclass(frozen=True)
class ResidueClassSet:
    modulus: int
    classes: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for b in self.classes:
            if not (prev < b < self.modulus or (self.modulus == 1 and b == 0)):
                raise InvalidInput("classes must be strictly increasing residues")
            if math.gcd(b, self.modulus) != 1:
                raise InvalidInput(f"{b} is not a unit mod {self.modulus}")
            prev = b

    def __contains__(self, n: int) -> bool:
        return n % self.modulus in self._lookup

    @property
    def _lookup(self) -> frozenset:
        # cached on first use; frozen dataclass so go through __dict__
        s = self.__dict__.get("_set")
        if s is None:
            s = frozenset(self.classes)
            object.__setattr__(self, "_set", s)
        return s

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)


@dataclass(frozen=True)
class LocalClassData:
    ell: int
    m: int
    full_group: ResidueClassSet
    subgroup_H: ResidueClassSet
    singleton_I: ResidueClassSet
    B_local: ResidueClassSet

    @property
    def modulus(self) -> int:
        return self.ell ** (self.m + 1)


def _as_q(q) -> int:
    q = int(q)
    PrimePower.from_int(q)
    if q < 3:
        raise InvalidInput("residue machinery needs q >= 3")
    return q


def primes_below(q: int) -> list[int]:
    return [ell for ell in range(2, int(q)) if is_prime(ell)]


@lru_cache(maxsize=None)
def modulus_Q(q: PrimePower | int) -> int:
    """Q_q = prod over primes l < q of l^{m(l,q)+1}."""
    q = _as_q(q)
    Q = 1
    for ell in primes_below(q):
        Q *= ell ** (m_exponent(ell, q) + 1)
        if Q > MAX_MODULUS:
            raise CapacityError(f"Q_{q} exceeds {MAX_MODULUS}")
    return Q


def phi_Q(q: PrimePower | int) -> int:
    q = _as_q(q)
    out = 1
    for ell in primes_below(q):
        out *= (ell - 1) * ell ** m_exponent(ell, q)
    return out


def check_supported(q: PrimePower | int, phi_cap: int = PHI_CAP) -> int:
    """Raise CapacityError unless the class machinery can enumerate M_{Q_q}."""
    modulus_Q(q)
    if phi_Q(q) > phi_cap:
        raise CapacityError(f"phi(Q_{int(q)}) = {phi_Q(q)} exceeds cap {phi_cap}")
    return int(q)


def local_class_data(ell: int, q: PrimePower | int) -> LocalClassData:
    q = _as_q(q)
    m = m_exponent(ell, q)
    mod = ell ** (m + 1)
    units = tuple(b for b in range(1, mod) if b % ell)
    H = tuple(b for b in units if b % ell == 1)
    B = tuple(b for b in units if b % ell != 1 or b == 1)
    return LocalClassData(
        ell=ell,
        m=m,
        full_group=ResidueClassSet(mod, units),
        subgroup_H=ResidueClassSet(mod, H),
        singleton_I=ResidueClassSet(mod, (1,)),
        B_local=ResidueClassSet(mod, B),
    )


def crt_pair(a: int, m: int, b: int, n: int) -> int:
    """x mod m*n with x = a (mod m), x = b (mod n), gcd(m, n) = 1."""
    return (a + m * ((b - a) * pow(m, -1, n) % n)) % (m * n)


@lru_cache(maxsize=None)
def residue_set_B(q: PrimePower | int) -> ResidueClassSet:
    """B_q: product over l < q of the local class sets, glued by CRT."""
    check_supported(q)
    q = int(q)
    acc_mod, acc = 1, [0]
    for ell in primes_below(q):
        loc = local_class_data(ell, q)
        acc = [crt_pair(a, acc_mod, b, loc.modulus) for a, b in itertools.product(acc, loc.B_local)]
        acc_mod *= loc.modulus
    return ResidueClassSet(acc_mod, tuple(sorted(acc)))


def class_count_B(q: PrimePower | int) -> int:
    q = _as_q(q)
    return math.prod((ell - 2) * ell ** m_exponent(ell, q) + 1 for ell in primes_below(q))


@lru_cache(maxsize=None)
def beta(q: PrimePower | int) -> Fraction:
    """beta_q = B_q / phi(Q_q), exactly."""
    q = _as_q(q)
    out = Fraction(1)
    for ell in primes_below(q):
        m = m_exponent(ell, q)
        out *= Fraction(ell - 2, ell - 1) + Fraction(1, ell**m * (ell - 1))
    return out


def beta_next(q: PrimePower | int) -> Fraction:
    return beta(next_prime_power(q))


def _odd_prime_ok(p: int, q: int) -> bool:
    for ell in primes_below(q):
        if (p - 1) % ell == 0 and (p - 1) % ell ** (m_exponent(ell, q) + 1) != 0:
            return False
    return True


def satisfies_S_at_least(m: int, q: PrimePower | int) -> bool:
    """True iff S(m) >= q, decided from the factorization of m alone.

    m = 1, 2 count as satisfying every threshold (their groups are trivial).
    """
    q = _as_q(q)
    if m < 1:
        raise InvalidInput("m must be positive")
    if m <= 2:
        return True
    if m % 4 == 0:
        return False
    for p, _ in factorize(m):
        if p == 2:
            continue
        if p <= q or not _odd_prime_ok(p, q):
            return False
    return True


def S_is_not_two(n: int) -> bool:
    """S(n) != 2 test for n >= 3: 4 does not divide n and odd primes are 1 mod 4."""
    if n % 4 == 0:
        return False
    return all(p == 2 or p % 4 == 1 for p, _ in factorize(n))
