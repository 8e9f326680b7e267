"""Least primary factors of (Z/nZ)^x and the counting constants C_q."""

from __future__ import annotations

from .counting import (
    CountRecord,
    asymptotic_A_prime,
    asymptotic_E,
    count_A,
    count_A_prime,
    count_E,
    enumerate_N_B,
)
from .errors import CapacityError, InvalidInput, LPFError, TrivialGroupError, UndefinedS, UnsupportedQ
from .mgroup import (
    PrimePower,
    factorize,
    least_primary_factor,
    m_exponent,
    next_prime_power,
    primary_decomposition,
)
from .residues import beta, modulus_Q, residue_set_B, satisfies_S_at_least
from .sieve import sieve_least_primary

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CountRecord",
    "InvalidInput",
    "LPFError",
    "PrimePower",
    "TrivialGroupError",
    "UndefinedS",
    "UnsupportedQ",
    "asymptotic_A_prime",
    "asymptotic_E",
    "beta",
    "count_A",
    "count_A_prime",
    "count_E",
    "enumerate_N_B",
    "factorize",
    "least_primary_factor",
    "m_exponent",
    "modulus_Q",
    "next_prime_power",
    "primary_decomposition",
    "residue_set_B",
    "satisfies_S_at_least",
    "sieve_least_primary",
]
