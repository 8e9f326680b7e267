"""Structure of the multiplicative group M_n = (Z/nZ)^x.

Factorization, the primary decomposition of M_n, the least primary
factor S(n), and small prime-power helpers used everywhere else.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache, total_ordering

from .errors import CapacityError, InvalidInput, TrivialGroupError, UndefinedS

DEFAULT_FACTOR_BOUND = 2**63 - 1

_TRIAL_LIMIT = 1000
_SMALL_PRIMES = [p for p in range(2, _TRIAL_LIMIT) if all(p % d for d in range(2, math.isqrt(p) + 1))]
# Deterministic for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@total_ordering
@dataclass(frozen=True)
class PrimePower:
    base: int
    exponent: int = 1

    def __post_init__(self):
        if self.exponent < 1 or not is_prime(self.base):
            raise InvalidInput(f"{self.base}^{self.exponent} is not a prime power")

    @property
    def value(self) -> int:
        return self.base**self.exponent

    @classmethod
    def from_int(cls, q: int) -> PrimePower:
        """Parse an integer q >= 2 into (base, exponent)."""
        q = int(q)
        if q < 2:
            raise InvalidInput(f"{q} is not a prime power")
        fac = factorize(q)
        if len(fac.factors) != 1:
            raise InvalidInput(f"{q} is not a prime power")
        (p, e), = fac.factors
        return cls(p, e)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __lt__(self, other):
        if isinstance(other, PrimePower):
            return (self.value, self.base) < (other.value, other.base)
        return NotImplemented

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


@dataclass(frozen=True)
class PrimaryDecomposition:
    components: tuple[PrimePower, ...]

    @property
    def values(self) -> list[int]:
        return [c.value for c in self.components]

    def order(self) -> int:
        return math.prod(self.values)

    def __len__(self) -> int:
        return len(self.components)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (trial division for tiny n)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    if n < 101 * 101:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split_large(r, out, rng)
        _split_large(r, out, rng)
        return
    d = _pollard_brent(n, rng)
    _split_large(d, out, rng)
    _split_large(n // d, out, rng)


@lru_cache(maxsize=1 << 16)
def factorize(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> Factorization:
    """Exact factorization of n, primes ascending.

    Trial division by primes below 1000, then Miller-Rabin and
    Pollard-Brent on whatever cofactor remains.
    """
    n = int(n)
    if n < 1:
        raise InvalidInput(f"cannot factor {n}")
    if n > bound:
        raise CapacityError(f"{n} exceeds the factorization bound {bound}")
    found: dict[int, int] = {}
    m = n
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m < _TRIAL_LIMIT**2:
            found[m] = found.get(m, 0) + 1
        else:
            # seeded so results never depend on global RNG state
            _split_large(m, found, random.Random(m))
    return Factorization(n, tuple(sorted(found.items())))


def p_adic_valuation(n: int, p: int) -> int:
    if n < 1:
        raise InvalidInput("valuation needs n >= 1")
    if p < 2:
        raise InvalidInput(f"{p} is not prime")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def is_prime_power(n: int) -> bool:
    return n >= 2 and len(factorize(n).factors) == 1


def _cyclic_components(order: int) -> list[PrimePower]:
    """Primary components of the cyclic group of the given order."""
    return [PrimePower(p, e) for p, e in factorize(order)]


def prime_power_unit_group(p: int, r: int) -> list[PrimePower]:
    """Primary components of M_{p^r}."""
    if p == 2:
        if r == 1:
            return []
        if r == 2:
            return [PrimePower(2, 1)]
        return [PrimePower(2, 1), PrimePower(2, r - 2)]
    comps = _cyclic_components(p - 1)
    if r >= 2:
        comps.append(PrimePower(p, r - 1))
    return comps


def primary_decomposition(n: int) -> PrimaryDecomposition:
    if n in (1, 2):
        raise TrivialGroupError(f"M_{n} is trivial")
    if n < 1:
        raise InvalidInput(f"no multiplicative group for n = {n}")
    comps: list[PrimePower] = []
    for p, r in factorize(n):
        comps.extend(prime_power_unit_group(p, r))
    return PrimaryDecomposition(tuple(sorted(comps)))


def least_primary_factor(n: int) -> PrimePower:
    """S(n): the smallest prime power in the primary decomposition of M_n."""
    if n in (1, 2):
        raise UndefinedS(f"S({n}) is undefined: M_{n} is trivial")
    return primary_decomposition(n).components[0]


def least_prime_power_part(m: int) -> int:
    """min of l^{v_l(m)} over primes l | m; this is S(p) when m = p - 1."""
    if m < 2:
        raise InvalidInput("need m >= 2")
    return min(p**e for p, e in factorize(m))


def next_prime_power(q: PrimePower | int) -> PrimePower:
    """q+: the least prime power strictly greater than q."""
    v = int(q) + 1
    while not is_prime_power(v):
        v += 1
    return PrimePower.from_int(v)


def prime_powers_up_to(limit: int, start: int = 2) -> list[PrimePower]:
    return [PrimePower.from_int(v) for v in range(max(start, 2), limit + 1) if is_prime_power(v)]


def m_exponent(ell: int, q: PrimePower | int) -> int:
    """Largest m with ell^m < q, by integer comparison only."""
    q = int(q)
    if ell >= q:
        raise InvalidInput(f"m({ell},{q}) needs ell < q")
    if not is_prime(ell):
        raise InvalidInput(f"{ell} is not prime")
    m, power = 0, 1
    while power * ell < q:
        power *= ell
        m += 1
    return m
