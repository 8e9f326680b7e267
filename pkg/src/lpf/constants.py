"""Numerical evaluation of G_{B_q}(1) and the leading constants C_q.

The Euler product A_{B_q}(s) is regrouped so that the factor for a prime
p depends only on p mod Q_q and has the shape prod (1 - p^{-ks})^e with
every k >= 2.  At s = 1 it converges absolutely; truncating at P leaves
a tail controlled through pi(x) < 1.25506 x / log x.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import (
    DirichletCharacter,
    L1,
    _group,
    char_sum_over_B,
    character_group,
    image_size,
    restriction_component,
    subgroup,
)
from .errors import CapacityError, InvalidInput
from .mgroup import euler_phi, factorize, m_exponent
from .primes import prime_sieve, primes_in_range
from .residues import (
    PHI_CAP,
    beta,
    check_supported,
    class_count_B,
    modulus_Q,
    phi_Q,
    primes_below,
    residue_set_B,
)

DEFAULT_PRIME_BOUND = 10**7
MAX_PRIME_BOUND = 10**9
ROSSER_SCHOENFELD = 1.25506
# relative accuracy budget for the finitely computed factors (Gamma, L(1, chi))
SIDE_FACTOR_ERROR = 1e-12

_BLOCK = 1 << 23


@dataclass(frozen=True)
class EulerProductEstimate:
    """A positive value known to lie in [mid e^-b, mid e^b]."""

    midpoint: float
    log_error_bound: float
    prime_bound: int

    @property
    def lo(self) -> float:
        return self.midpoint * math.exp(-self.log_error_bound)

    @property
    def hi(self) -> float:
        return self.midpoint * math.exp(self.log_error_bound)

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def within(self, other: EulerProductEstimate) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def scaled(self, factor: float, extra_log_error: float = 0.0) -> EulerProductEstimate:
        return EulerProductEstimate(self.midpoint * factor, self.log_error_bound + extra_log_error, self.prime_bound)


@dataclass(frozen=True)
class LocalFactorShape:
    """prod over (k, e) of (1 - p^{-ks})^e for primes p = residue mod Q."""

    residue: int
    modulus: int
    terms: tuple[tuple[int, int], ...]

    def log_value(self, p: float, s: float = 1.0) -> float:
        return math.fsum(e * math.log1p(-(p ** (-k * s))) for k, e in self.terms)


def gamma_function(x: float) -> float:
    if not x > 0:
        raise InvalidInput(f"Gamma is only provided for x > 0, got {x}")
    return math.gamma(x)


def truncation_error_bound(P: int) -> float:
    """Bound for sum over p > P of p^-2 / 2 from pi(x) < 1.25506 x / log x."""
    if P < 100:
        raise InvalidInput("prime bound must be at least 100")
    return ROSSER_SCHOENFELD / (P * math.log(P))


# ---------------------------------------------------------------- class shapes


def class_weight(chi: DirichletCharacter, q: int) -> int:
    """w(chi) = sum of conj(chi) over B_q, as the product of local closed forms."""
    w = 1
    for ell in primes_below(q):
        w *= char_sum_over_B(restriction_component(chi, ell).conj(), ell, q)
    return w


def _local_options(ell: int, q: int):
    """(coefficient, subgroup of chars mod ell^{m+1}) for the three local terms."""
    m = m_exponent(ell, q)
    G = _group(ell ** (m + 1))
    chars = G.characters()
    return G.modulus, [
        (ell**m * (ell - 1), [G.principal()]),
        (-(ell**m), [c for c in chars if (ell - 1) % c.order == 0]),
        (1, chars),
    ]


@lru_cache(maxsize=16)
def _shape_arrays(q: int) -> dict[int, np.ndarray]:
    """k -> integer exponent array indexed by residue mod Q (zero off units)."""
    check_supported(q)
    Q = modulus_Q(q)
    phi = phi_Q(q)
    units = np.array([r for r in range(Q) if math.gcd(r, Q) == 1], dtype=np.int64)
    locals_ = []
    for ell in primes_below(q):
        mod, options = _local_options(ell, q)
        opts = []
        for coef, H in options:
            kt = np.zeros(mod, dtype=np.int64)
            for r in range(mod):
                if r % ell:
                    kt[r] = image_size(H, r)[0]
            opts.append((coef, len(H), kt))
        locals_.append((mod, opts))
    acc: dict[int, np.ndarray] = {}
    for combo in itertools.product(*(opts for _, opts in locals_)):
        coef = math.prod(c for c, _, _ in combo)
        if coef == 0:
            continue
        size = math.prod(h for _, h, _ in combo)
        k = np.ones(len(units), dtype=np.int64)
        for (mod, _), (_, _, kt) in zip(locals_, combo):
            k = np.lcm(k, kt[units % mod])
        expo = coef * size // k
        for kv in np.unique(k):
            sel = k == kv
            arr = acc.setdefault(int(kv), np.zeros(Q, dtype=np.int64))
            arr[units[sel]] += expo[sel]
    B = residue_set_B(q)
    arr = acc.setdefault(1, np.zeros(Q, dtype=np.int64))
    arr[list(B.classes)] -= phi
    out = {k: a for k, a in sorted(acc.items()) if a.any()}
    if 1 in out:
        raise CapacityError(f"class factors for q={q} keep a p^-s term; product would diverge")
    return out


def residue_class_factor(q, r: int) -> LocalFactorShape:
    q = int(q)
    Q = modulus_Q(q)
    if math.gcd(r, Q) != 1:
        raise InvalidInput(f"{r} is not a unit mod {Q}")
    arrays = _shape_arrays(q)
    r %= Q
    terms = tuple((k, int(a[r])) for k, a in arrays.items() if a[r])
    return LocalFactorShape(r, Q, terms)


def class_factor_table(q) -> list[LocalFactorShape]:
    Q = modulus_Q(q)
    return [residue_class_factor(q, r) for r in range(1, Q) if math.gcd(r, Q) == 1]


# ---------------------------------------------------------------- Euler products


def _prime_blocks(P: int, exclude: int = 1):
    """Ascending blocks of primes <= P not dividing `exclude`."""
    if P > MAX_PRIME_BOUND:
        raise CapacityError(f"prime bound {P} exceeds {MAX_PRIME_BOUND}")
    base = prime_sieve(math.isqrt(P) + 1)
    lo = 2
    while lo <= P:
        hi = min(P + 1, lo + _BLOCK)
        ps = primes_in_range(lo, hi, base)
        if exclude > 1:
            ps = ps[exclude % ps != 0]
        yield ps
        lo = hi


def _log_product(P: int, exclude: int, modulus: int, arrays: dict[int, np.ndarray], scale: float) -> float:
    """sum over primes p <= P, p not dividing `exclude`, of
    scale * sum_k arrays[k][p mod modulus] * log(1 - p^-k)."""
    partial = []
    for ps in _prime_blocks(P, exclude):
        idx = ps % modulus
        pf = ps.astype(np.float64)
        for k, a in arrays.items():
            c = a[idx]
            nz = c != 0
            if nz.any():
                terms = c[nz] * scale * np.log1p(-(pf[nz] ** -k))
                partial.append(math.fsum(terms))
    return math.fsum(partial)


def _tail_weight(P: int, arrays: dict[int, np.ndarray], scale: float) -> float:
    """Largest per-prime |log factor| / p^-2 over all classes, valid for p > P."""
    pos = np.zeros_like(next(iter(arrays.values())), dtype=np.float64)
    neg = np.zeros_like(pos)
    for k, a in arrays.items():
        w = np.abs(a) * abs(scale) * float(P) ** (2 - k)
        pos += np.where(a * scale < 0, w, 0.0)  # exponent < 0 gives log > 0
        neg += np.where(a * scale > 0, w, 0.0)
    # |log(1 - t)| <= t / (1 - t) and t <= P^-2
    return float(np.maximum(pos, neg).max()) / (1.0 - float(P) ** -2)


def tail_bound_for(P: int, weight: float) -> float:
    return truncation_error_bound(P) * weight / 0.5


def euler_product_A(q, P: int = DEFAULT_PRIME_BOUND) -> EulerProductEstimate:
    """A_{B_q}(1)^{1/phi(Q_q)} truncated at primes <= P."""
    q = check_supported(q)
    P = int(P)
    if P < 100:
        raise InvalidInput("prime bound must be at least 100")
    Q, phi = modulus_Q(q), phi_Q(q)
    arrays = _shape_arrays(q)
    logv = _log_product(P, Q, Q, arrays, 1.0 / phi)
    bound = tail_bound_for(P, _tail_weight(P, arrays, 1.0 / phi))
    return EulerProductEstimate(math.exp(logv), bound, P)


# groups larger than this take the batched transform route in L_product
_SCALAR_L_LIMIT = 2000


def _weight_grid(q: int, G) -> np.ndarray:
    """w(chi) for every chi mod Q_q, on the exponent grid of G."""
    w = np.ones(G.orders, dtype=np.int64)
    for ell in primes_below(q):
        if ell == 2:
            continue  # the local sum is identically 1
        m = m_exponent(ell, q)
        (j,) = G.component_slice(ell)
        n = G.orders[j]
        c = np.arange(n)
        order = n // np.gcd(c, n)
        local = 1 + np.where(c == 0, ell**m * (ell - 1), 0) - np.where((ell - 1) % order == 0, ell**m, 0)
        shape = [1] * len(G.orders)
        shape[j] = n
        w = w * local.reshape(shape)
    return w


def L1_grid(Q: int) -> np.ndarray:
    """L(1, chi) for every chi mod Q on the exponent grid (principal entry is nan).

    Uses L(1, chi) = -(1/Q) sum_a chi(a) digamma(a/Q), which holds for every
    nonprincipal chi, evaluated for all chi at once by an FFT over the
    generator coordinates of M_Q.
    """
    from scipy.special import digamma

    G = character_group(Q)
    units = G.units()
    coords = G._dlog[units]
    F = np.zeros(G.orders, dtype=np.float64)
    F[tuple(coords.T)] = digamma(units / Q)
    L = -(G.order / Q) * np.fft.ifftn(F)
    L[(0,) * len(G.orders)] = np.nan
    return L


@lru_cache(maxsize=32)
def L_product(q) -> float:
    """prod over nonprincipal chi mod Q_q of L(1, chi)^{w(chi)/phi(Q_q)}.

    w(chi) is a real integer with w(conj chi) = w(chi), so pairing chi with
    its conjugate leaves |L(1, chi)|^{2w}; real chi have L(1, chi) > 0.
    """
    q = check_supported(q)
    G = character_group(modulus_Q(q))
    phi = G.order
    if phi > _SCALAR_L_LIMIT:
        w = _weight_grid(q, G)
        L = L1_grid(G.modulus)
        mask = w != 0
        mask[(0,) * len(G.orders)] = False
        return math.exp(math.fsum((w[mask] * np.log(np.abs(L[mask]))).tolist()) / phi)
    seen = set()
    logs = []
    for chi in G.characters():
        if chi.is_principal() or chi in seen:
            continue
        w = class_weight(chi, q)
        bar = chi.conj()
        seen.update((chi, bar))
        if w == 0:
            continue
        L = L1(chi)
        if bar == chi:
            if L.real <= 0 or abs(L.imag) > 1e-12 * abs(L):
                raise ArithmeticError(f"L(1, real chi) = {L} is not a positive real")
            logs.append(w * math.log(L.real) / phi)
        else:
            logs.append(2 * w * math.log(abs(L)) / phi)
    return math.exp(math.fsum(logs))


def local_prefactor(q) -> float:
    """prod over p | Q_q of (1 - 1/p)^{B_q / phi(Q_q)}."""
    q = int(q)
    b = beta(q)
    return math.exp(math.fsum(float(b) * math.log1p(-1.0 / p) for p, _ in factorize(modulus_Q(q))))


def G_value(q, P: int = DEFAULT_PRIME_BOUND) -> EulerProductEstimate:
    q = check_supported(q)
    A = euler_product_A(q, P)
    return A.scaled(local_prefactor(q) * L_product(q), 2 * SIDE_FACTOR_ERROR)


def gamma_prefactor(q) -> float:
    """3 / (2 Gamma(beta_q)) times the local prefactor."""
    return 3.0 / (2.0 * gamma_function(float(beta(q)))) * local_prefactor(q)


def leading_constant_C(q, P: int = DEFAULT_PRIME_BOUND) -> EulerProductEstimate:
    G = G_value(q, P)
    return G.scaled(3.0 / (2.0 * gamma_function(float(beta(q)))), SIDE_FACTOR_ERROR)


@dataclass(frozen=True)
class ConstantReport:
    q: int
    P: int
    C: EulerProductEstimate
    gamma_prefactor: float
    L_product: float
    A_product_root: EulerProductEstimate
    beta: Fraction
    tail_bound: float
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "P": self.P,
            "C_mid": self.C.midpoint,
            "C_lo": self.C.lo,
            "C_hi": self.C.hi,
            "gamma_prefactor": self.gamma_prefactor,
            "L_product": self.L_product,
            "A_product_root": self.A_product_root.midpoint,
            "beta_num": self.beta.numerator,
            "beta_den": self.beta.denominator,
            "tail_bound": self.tail_bound,
        }


@lru_cache(maxsize=32)
def constant_report(q, P: int = DEFAULT_PRIME_BOUND) -> ConstantReport:
    q = check_supported(q)
    A = euler_product_A(q, P)
    C = leading_constant_C(q, P)
    return ConstantReport(
        q=q,
        P=int(P),
        C=C,
        gamma_prefactor=gamma_prefactor(q),
        L_product=L_product(q),
        A_product_root=A,
        beta=beta(q),
        tail_bound=A.log_error_bound,
    )


def closed_form_C3(P: int = DEFAULT_PRIME_BOUND) -> EulerProductEstimate:
    """3/(4 sqrt 2) * prod over p = 3 mod 4 of (1 - p^-2)^{1/2}."""
    arr = np.zeros(4, dtype=np.int64)
    arr[3] = 1
    arrays = {2: arr}
    logv = _log_product(P, 2, 4, arrays, 0.5)
    bound = tail_bound_for(P, _tail_weight(P, arrays, 0.5))
    return EulerProductEstimate(3 / (4 * math.sqrt(2)) * math.exp(logv), bound, P)


# ---------------------------------------------------------------- Landau-type g_q


def multiplicative_order(a: int, n: int) -> int:
    phi = euler_phi(n)
    o = phi
    for p, _ in factorize(phi):
        while o % p == 0 and pow(a, o // p, n) == 1:
            o //= p
    return o


def landau_g(modulus: int, P: int = DEFAULT_PRIME_BOUND) -> EulerProductEstimate:
    """g_q for the count of n <= x whose prime factors are all 1 mod q."""
    q = int(modulus)
    if q < 4 or q % 2:
        raise InvalidInput("landau_g needs an even modulus q >= 4")
    G = character_group(q)
    phi = G.order
    if phi > PHI_CAP:
        raise CapacityError(f"phi({q}) exceeds cap {PHI_CAP}")
    seen = set()
    logs = []
    for chi in G.characters():
        if chi.is_principal() or chi in seen:
            continue
        bar = chi.conj()
        seen.update((chi, bar))
        L = L1(chi)
        logs.append(math.log(L.real) if bar == chi else 2 * math.log(abs(L)))
    log_L = math.fsum(logs)
    front = math.exp((math.log(phi / q) + log_L) / phi) / gamma_function(1.0 / phi)
    arrays: dict[int, np.ndarray] = {}
    for r in range(2, q):
        if math.gcd(r, q) == 1:
            o = multiplicative_order(r, q)
            arrays.setdefault(o, np.zeros(q, dtype=np.int64))[r] = 1
    # exponent 1/ord(p) is not an integer, so scale per k
    logv = math.fsum(_log_product(P, q, q, {k: a}, 1.0 / k) for k, a in arrays.items())
    weight = max(_tail_weight(P, {k: a}, 1.0 / k) for k, a in arrays.items())
    return EulerProductEstimate(front * math.exp(logv), tail_bound_for(P, weight) + SIDE_FACTOR_ERROR, int(P))
