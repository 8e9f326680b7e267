"""Dirichlet characters with exact root-of-unity values.

A character mod Q is stored as an exponent vector on a fixed generator
basis of M_Q (one cyclic factor per odd prime power, and -1, 5 for the
2-part).  Values are integers k mod N meaning e^{2 pi i k / N}, where N
is the exponent of M_Q; floats only appear in Gauss sums and L(1, chi).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, InvalidInput
from .mgroup import factorize, m_exponent
from .residues import PHI_CAP, ResidueClassSet, local_class_data


@dataclass(frozen=True)
class RootOfUnity:
    """e^{2 pi i k / N}, stored reduced with 0 <= k < N."""

    k: int
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise InvalidInput("root of unity needs N >= 1")
        k = self.k % self.N
        g = math.gcd(k, self.N)
        object.__setattr__(self, "k", k // g)
        object.__setattr__(self, "N", self.N // g)

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        N = self.N * other.N // math.gcd(self.N, other.N)
        return RootOfUnity(self.k * (N // self.N) + other.k * (N // other.N), N)

    def __pow__(self, e: int) -> RootOfUnity:
        return RootOfUnity(self.k * e, self.N)

    def conjugate(self) -> RootOfUnity:
        return RootOfUnity(-self.k, self.N)

    @property
    def order(self) -> int:
        return self.N

    def __complex__(self) -> complex:
        return _unit_complex(self.k, self.N)


def _unit_complex(k: int, N: int) -> complex:
    k %= N
    # exact values on the axes keep the real characters real
    if 4 * k % N == 0:
        return (1, 1j, -1, -1j)[4 * k // N]
    return cmath.exp(2j * math.pi * k / N)


def primitive_root(p: int, k: int) -> int:
    """Smallest primitive root modulo the odd prime power p^k."""
    mod = p**k
    phi = p ** (k - 1) * (p - 1)
    divisors = [r for r, _ in factorize(phi)]
    for g in range(2, mod):
        if g % p and all(pow(g, phi // r, mod) != 1 for r in divisors):
            return g
    raise InvalidInput(f"no primitive root mod {mod}")


class CharacterGroup:
    """The dual group of M_Q with a fixed generator basis."""

    def __init__(self, Q: int, phi_cap: int = PHI_CAP):
        if Q < 1:
            raise InvalidInput("modulus must be positive")
        self.modulus = Q
        self.prime_powers = list(factorize(Q)) if Q > 1 else []
        gens, orders, owner = [], [], []
        for p, k in self.prime_powers:
            pk = p**k
            rest = Q // pk
            if p == 2:
                local = [] if k == 1 else [(pk - 1, 2)] if k == 2 else [(pk - 1, 2), (5, 2 ** (k - 2))]
            else:
                local = [(primitive_root(p, k), (p - 1) * p ** (k - 1))]
            for g, n in local:
                gens.append(_crt(g, pk, 1, rest))
                orders.append(n)
                owner.append(p)
        self.generators = tuple(gens)
        self.orders = tuple(orders)
        self.owner = tuple(owner)
        self.order = math.prod(orders)
        if self.order > phi_cap:
            raise CapacityError(f"phi({Q}) = {self.order} exceeds cap {phi_cap}")
        self.exponent = math.lcm(*orders) if orders else 1
        self._dlog = self._build_dlog()

    def _build_dlog(self) -> np.ndarray:
        Q = self.modulus
        r = len(self.generators)
        table = np.full((Q, r), -1, dtype=np.int64)
        vals = np.array([1 % Q], dtype=np.int64)
        coords = np.zeros((1, r), dtype=np.int64)
        for j, (g, n) in enumerate(zip(self.generators, self.orders)):
            pw = np.array([pow(g, e, Q) for e in range(n)], dtype=np.int64)
            vals = (vals[:, None] * pw[None, :] % Q).ravel()
            coords = np.repeat(coords, n, axis=0)
            coords[:, j] = np.tile(np.arange(n), len(coords) // n)
        table[vals] = coords
        return table

    def units(self) -> np.ndarray:
        return np.flatnonzero(self._dlog[:, 0] >= 0) if self._dlog.shape[1] else np.array([1 % self.modulus])

    def dlog(self, a: int) -> tuple[int, ...] | None:
        row = self._dlog[a % self.modulus]
        if len(row) and row[0] < 0:
            return None
        return tuple(int(v) for v in row)

    def character(self, exponents) -> DirichletCharacter:
        return DirichletCharacter(self, tuple(int(c) % n for c, n in zip(exponents, self.orders)))

    def principal(self) -> DirichletCharacter:
        return self.character([0] * len(self.orders))

    def characters(self) -> list[DirichletCharacter]:
        return [self.character(e) for e in itertools.product(*(range(n) for n in self.orders))]

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.characters())

    def component_slice(self, ell: int) -> list[int]:
        return [j for j, p in enumerate(self.owner) if p == ell]


@lru_cache(maxsize=64)
def _group(Q: int) -> CharacterGroup:
    return CharacterGroup(Q)


def character_group(Q: int) -> CharacterGroup:
    if Q < 3:
        raise InvalidInput(f"character group needs modulus >= 3, got {Q}")
    return _group(Q)


def _crt(a: int, m: int, b: int, n: int) -> int:
    if n == 1:
        return a % m
    return (a + m * ((b - a) * pow(m, -1, n) % n)) % (m * n)


class DirichletCharacter:
    __slots__ = ("group", "exponents", "_weights")

    def __init__(self, group: CharacterGroup, exponents: tuple[int, ...]):
        self.group = group
        self.exponents = exponents
        N = group.exponent
        self._weights = np.array([c * (N // n) for c, n in zip(exponents, group.orders)], dtype=np.int64)

    @property
    def modulus(self) -> int:
        return self.group.modulus

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, {list(self.exponents)})"

    def log_value(self, a: int) -> int | None:
        """k with chi(a) = e^{2 pi i k/N}, N the group exponent; None off units."""
        row = self.group._dlog[a % self.modulus]
        if (row[0] < 0) if len(row) else math.gcd(a, self.modulus) != 1:
            return None
        return int(row @ self._weights) % self.group.exponent

    def value(self, a: int) -> RootOfUnity | None:
        k = self.log_value(a)
        return None if k is None else RootOfUnity(k, self.group.exponent)

    def __call__(self, a: int) -> complex:
        k = self.log_value(a)
        return 0j if k is None else _unit_complex(k, self.group.exponent)

    def log_table(self) -> np.ndarray:
        """k(a) for every a mod Q; -1 on non-units."""
        t = self.group._dlog @ self._weights % self.group.exponent
        if self.group._dlog.shape[1]:
            t[self.group._dlog[:, 0] < 0] = -1
        return t

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        if other.modulus != self.modulus:
            raise InvalidInput("characters have different moduli")
        return self.group.character([a + b for a, b in zip(self.exponents, other.exponents)])

    def __pow__(self, e: int) -> DirichletCharacter:
        return self.group.character([a * e for a in self.exponents])

    def conj(self) -> DirichletCharacter:
        return self ** -1

    @property
    def order(self) -> int:
        return math.lcm(1, *(n // math.gcd(c, n) for c, n in zip(self.exponents, self.group.orders)))

    def is_principal(self) -> bool:
        return not any(self.exponents)

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        if self.modulus <= 2:
            return 1
        return 1 if self.log_value(self.modulus - 1) == 0 else -1


def restriction_component(chi: DirichletCharacter, ell: int) -> DirichletCharacter:
    """The factor chi_ell mod ell^k of chi = prod chi_l, with ell^k || Q."""
    Q = chi.modulus
    k = next((e for p, e in chi.group.prime_powers if p == ell), 0)
    if not k:
        raise InvalidInput(f"{ell} does not divide {Q}")
    idx = chi.group.component_slice(ell)
    sub = _group(ell**k)
    return sub.character([chi.exponents[j] for j in idx])


def _component_conductor(p: int, k: int, exps: list[int], orders: list[int]) -> int:
    if p != 2:
        (c,), (n,) = exps, orders
        o = n // math.gcd(c, n)
        if o == 1:
            return 1
        j = 0
        while o % p == 0:
            o //= p
            j += 1
        return p ** (j + 1)
    if k == 1:
        return 1
    if k == 2:
        return 4 if exps[0] else 1
    a, b = exps
    o = orders[1] // math.gcd(b, orders[1])
    if o > 1:
        return 4 * o
    return 4 if a else 1


def conductor(chi: DirichletCharacter) -> int:
    g = chi.group
    out = 1
    for p, k in g.prime_powers:
        idx = g.component_slice(p)
        out *= _component_conductor(p, k, [chi.exponents[j] for j in idx], [g.orders[j] for j in idx])
    return out


def conductor_and_primitive(chi: DirichletCharacter) -> tuple[int, DirichletCharacter]:
    """(q*, chi*) with chi* primitive mod q* inducing chi."""
    f = conductor(chi)
    target = _group(f)
    Q = chi.modulus
    exps = []
    for g, n in zip(target.generators, target.orders):
        a = g
        while math.gcd(a, Q) != 1:
            a += f
        k = chi.log_value(a)
        N = chi.group.exponent
        # chi(a) has order dividing n, so k * n / N is an integer
        exps.append(k * n // N)
    star = target.character(exps)
    return f, star


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor(chi) == chi.modulus


def _fsum_complex(terms) -> complex:
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def gauss_sum(chi: DirichletCharacter) -> complex:
    q = chi.modulus
    if q == 1 or not is_primitive(chi):
        raise InvalidInput("Gauss sum needs a primitive character of modulus > 1")
    N = chi.group.exponent
    terms = []
    for a in range(1, q):
        k = chi.log_value(a)
        if k is None:
            continue
        # angle 2 pi (k/N + a/q) as one reduced fraction
        L = N * q // math.gcd(N, q)
        terms.append(_unit_complex(k * (L // N) + a * (L // q), L))
    return _fsum_complex(terms)


def L1(chi: DirichletCharacter) -> complex:
    """L(1, chi) for nonprincipal chi via finite closed forms."""
    if chi.is_principal():
        raise InvalidInput("L(s, chi_0) has a pole at s = 1")
    f, star = conductor_and_primitive(chi)
    tau = gauss_sum(star)
    bar = star.conj()
    if star.parity() == -1:
        s = _fsum_complex(bar(k) * k for k in range(1, f) if math.gcd(k, f) == 1)
        val = 1j * math.pi * tau / f**2 * s
    else:
        s = _fsum_complex(bar(k) * math.log(math.sin(k * math.pi / f)) for k in range(1, f) if math.gcd(k, f) == 1)
        val = -tau / f * s
    for p, _ in factorize(chi.modulus):
        val *= 1 - star(p) / p
    return val


def char_sum_over_B(chi_ell: DirichletCharacter, ell: int, q) -> int:
    """Sum of chi_ell over the local class set B_{ell,q}, in closed form."""
    m = m_exponent(ell, q)
    if chi_ell.modulus != ell ** (m + 1):
        raise InvalidInput(f"character must have modulus {ell ** (m + 1)}")
    total = 1
    if chi_ell.is_principal():
        total += ell**m * (ell - 1)
    if (ell - 1) % chi_ell.order == 0:
        total -= ell**m
    return total


def char_sum_over_B_bruteforce(chi: DirichletCharacter, B: ResidueClassSet) -> complex:
    if chi.modulus != B.modulus:
        raise InvalidInput("character and class set have different moduli")
    return _fsum_complex(chi(b) for b in B)


def local_class_set(ell: int, q) -> ResidueClassSet:
    return local_class_data(ell, q).B_local


def subgroup(group: CharacterGroup, predicate) -> list[DirichletCharacter]:
    return [chi for chi in group.characters() if predicate(chi)]


def image_size(H: list[DirichletCharacter], p: int) -> tuple[int, int]:
    """(k, #H/k) where k = #{chi(p) : chi in H}."""
    if not H:
        raise InvalidInput("empty character set")
    Q = H[0].modulus
    if math.gcd(p, Q) != 1:
        raise InvalidInput(f"{p} is not coprime to {Q}")
    members = set(H)
    if len(H) > 1 and (H[0] * H[-1]) not in members:
        raise InvalidInput("character set is not closed under multiplication")
    N = H[0].group.exponent
    vals = {chi.log_value(p) for chi in H}
    k = len(vals)
    if len(H) % k:
        raise InvalidInput("image size does not divide #H; not a subgroup")
    return k, len(H) // k
