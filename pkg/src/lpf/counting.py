"""Counting #A'_q(x), #A_q(x), #E_q(x) and their asymptotic main terms.

Convention: n = 1 and n = 2 (trivial groups) belong to every A_q and to
no E_q.  Then #A_q(x) = #A'_q(x) + #A'_q(x/2) and
#E_q(x) = #A_q(x) - #A_{q+}(x) hold exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

from .errors import CapacityError, InvalidInput, UnsupportedQ
from .mgroup import PrimePower, next_prime_power
from .primes import prime_sieve
from .residues import ResidueClassSet, beta, residue_set_B, satisfies_S_at_least
from .sieve import SieveTable, sieve_least_primary

CONVENTION_FLAG = "n=1,2 in A_q: true"
MODES = ("sieve", "predicate", "oracle")


@dataclass(frozen=True)
class CountRecord:
    q: int
    x: float
    count_A: int
    count_A_prime: int
    count_E: int
    main_term_A_prime: float | None
    main_term_E: float | None

    @property
    def ratio_E(self) -> float | None:
        if not self.main_term_E:
            return None
        return self.count_E / self.main_term_E

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ratio_E"] = self.ratio_E
        return d


def _floor(x: float) -> int:
    return int(math.floor(x)) if x >= 0 else -1


def _check_q(q) -> int:
    q = int(q)
    PrimePower.from_int(q)
    return q


def enumerate_N_B(B: ResidueClassSet, x: float) -> list[int]:
    """Every n <= x all of whose prime factors lie in B, ascending; includes 1."""
    X = _floor(x)
    if X < 1:
        return []
    ps = [p for p in prime_sieve(X).tolist() if p in B]
    out = [1]
    # depth-first over nondecreasing prime sequences
    stack = [(1, 0)]
    while stack:
        n, start = stack.pop()
        for i in range(start, len(ps)):
            m = n * ps[i]
            if m > X:
                break
            out.append(m)
            stack.append((m, i))
    out.sort()
    return out


def _table_for(x: float, table: SieveTable | None) -> SieveTable | None:
    X = _floor(x)
    if X < 3:
        return table
    if table is None:
        return sieve_least_primary(X)
    if X > table.bound:
        raise CapacityError(f"x = {X} beyond sieve bound {table.bound}")
    return table


def count_A_prime(q, x: float, table: SieveTable | None = None, mode: str = "sieve") -> int:
    """#{odd n <= x : S(n) >= q}, counting n = 1."""
    q = _check_q(q)
    if q < 3:
        raise InvalidInput("A'_q is defined for q >= 3")
    X = _floor(x)
    if X < 1:
        return 0
    if mode == "oracle":
        return len(enumerate_N_B(residue_set_B(q), X))
    if mode == "predicate":
        return sum(1 for n in range(1, X + 1, 2) if satisfies_S_at_least(n, q))
    if mode != "sieve":
        raise InvalidInput(f"unknown mode {mode!r}")
    if X < 3:
        return 1
    t = _table_for(X, table)
    return 1 + int((t.odd_values(X) >= q).sum())


def count_A(q, x: float, table: SieveTable | None = None, mode: str = "sieve") -> int:
    """#A_q(x) = #A'_q(x) + #A'_q(x/2)."""
    return count_A_prime(q, x, table, mode) + count_A_prime(q, x / 2, table, mode)


def count_E(q, x: float, table: SieveTable | None = None, mode: str = "sieve") -> int:
    """#{3 <= n <= x : S(n) = q}."""
    q = _check_q(q)
    X = _floor(x)
    if X < 3:
        return 0
    if q == 2:
        # A_3 already holds 1 and 2, which are not in E_2 either
        return X - count_A(3, X, table, mode)
    return count_A(q, X, table, mode) - count_A(next_prime_power(q), X, table, mode)


def count_record(
    q, x: float, table: SieveTable | None = None, mode: str = "sieve", with_main_terms: bool = True
) -> CountRecord:
    """Counts for one (q, x); for q = 2 the A columns refer to q = 3."""
    q = _check_q(q)
    cA = count_A(max(q, 3), x, table, mode)
    cAp = count_A_prime(max(q, 3), x, table, mode)
    cE = count_E(q, x, table, mode)
    mA = mE = None
    if with_main_terms and x >= math.e:
        try:
            mE = asymptotic_E(q, x)
            if q >= 3:
                mA = asymptotic_A_prime(q, x)
        except UnsupportedQ:
            pass
    return CountRecord(q, x, cA, cAp, cE, mA, mE)


# ---------------------------------------------------------------- main terms


def _constants(q: int, constants):
    from .constants import constant_report

    if constants is not None:
        return constants
    try:
        return constant_report(q)
    except (CapacityError, InvalidInput) as exc:
        raise UnsupportedQ(f"no constants pipeline for q = {q}: {exc}") from exc


def asymptotic_A_prime(q, x: float, constants=None) -> float:
    """(G_{B_q}(1) / Gamma(beta_q)) x / (log x)^{1 - beta_q}."""
    q = _check_q(q)
    if x < math.e:
        raise InvalidInput("main terms need log x >= 1")
    if q < 3:
        raise UnsupportedQ("A'_q main term needs q >= 3")
    rep = _constants(q, constants)
    b = float(beta(q))
    return (2.0 / 3.0) * rep.C.midpoint * x / math.log(x) ** (1 - b)


def _main_term_E(q: int, x: float, constants) -> float:
    rep = _constants(q, constants)
    return rep.C.midpoint * x / math.log(x) ** (1 - float(beta(q)))


def asymptotic_E(q, x: float, constants=None) -> float:
    """C_q x / (log x)^{1 - beta_q}; for q = 2, x minus the q = 3 main term."""
    q = _check_q(q)
    if x < math.e:
        raise InvalidInput("main terms need log x >= 1")
    if q > math.log(x) ** (1 / 3):
        warnings.warn(f"q = {q} exceeds (log x)^(1/3) = {math.log(x) ** (1 / 3):.3f}", stacklevel=2)
    if q == 2:
        return x - _main_term_E(3, x, constants)
    return _main_term_E(q, x, constants)
