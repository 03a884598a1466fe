"""The twist family y^2 = x(x - a^2 n)(x + b^2 n) with a^2 + b^2 = 2c^2."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, List, Tuple

import pandas as pd
from sympy import factorint, isprime

from arith import as_factored, jacobi
from utils import require

logger = logging.getLogger(__name__)


def _primes_of(m: int) -> Tuple[int, ...]:
    return tuple(sorted(factorint(m))) if m > 1 else ()


@dataclass(frozen=True)
class TwistTriple:
    a: int
    b: int
    c: int
    aprimes: Tuple[int, ...] = field(default=(), compare=False)
    bprimes: Tuple[int, ...] = field(default=(), compare=False)
    cprimes: Tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def create(cls, a: int, b: int, c: int) -> "TwistTriple":
        a, b, c = abs(int(a)), abs(int(b)), abs(int(c))
        require(a > 0 and b > 0 and c > 0, f"({a}, {b}, {c}) must be positive")
        require(a * a + b * b == 2 * c * c, f"{a}^2 + {b}^2 != 2*{c}^2")
        require(gcd(a, b) == 1, f"({a}, {b}, {c}) is not primitive")
        require(a % 2 == 1 and b % 2 == 1 and c % 2 == 1, f"({a}, {b}, {c}) must be odd")
        return cls(a, b, c, _primes_of(a), _primes_of(b), _primes_of(c))

    # parameters of the curve y^2 = x(x - A n)(x + B n), A + B = 2C
    @property
    def A(self) -> int:
        return self.a * self.a

    @property
    def B(self) -> int:
        return self.b * self.b

    @property
    def C(self) -> int:
        return self.c * self.c

    @property
    def abc(self) -> int:
        return self.a * self.b * self.c

    @property
    def qprimes(self) -> Tuple[int, ...]:
        """Primes of a, then of b, then of c"""
        return self.aprimes + self.bprimes + self.cprimes

    @property
    def kprime(self) -> int:
        return len(self.qprimes)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c}"


def triple_from_k(k: int) -> TwistTriple:
    return TwistTriple.create(abs(4 * k * k - 4 * k - 1), abs(4 * k * k + 4 * k - 1), 4 * k * k + 1)


@lru_cache(maxsize=256)
def base_selmer_dim(t: TwistTriple) -> int:
    """Dimension of Sel_2 of y^2 = x(x - a^2)(x + b^2), torsion included"""
    from f2linalg import kernel_basis
    from selmer import build_M1

    return 2 + len(kernel_basis(build_M1(t)))


def _check_prime(p: int, t: TwistTriple) -> None:
    require(isprime(p) and p % 2 == 1, f"{p} is not an odd prime")
    require(t.abc % p != 0, f"{p} divides abc = {t.abc}")


def _residue_mod_abc(p: int, t: TwistTriple) -> bool:
    return all(jacobi(p, q) == 1 for q in t.qprimes)


def admissible_t1(p: int, t: TwistTriple) -> bool:
    """p = ±1 mod 8 and a square modulo every prime of abc"""
    _check_prime(p, t)
    return p % 8 in (1, 7) and _residue_mod_abc(p, t)


def admissible_t2(p: int, t: TwistTriple) -> bool:
    """p a square modulo 4q for every prime q of abc"""
    _check_prime(p, t)
    return p % 4 == 1 and _residue_mod_abc(p, t)


def admissible_n(n, t: TwistTriple, theorem: int) -> bool:
    require(theorem in (1, 2), f"theorem must be 1 or 2, got {theorem}")
    n = as_factored(n)
    if n.value % 8 != 1 or gcd(n.value, 2 * t.abc) != 1:
        return False
    check = admissible_t1 if theorem == 1 else admissible_t2
    return all(check(p, t) for p in n.primes)


def satisfies_residue_condition(n, t: TwistTriple) -> bool:
    """Every prime of n is a square modulo every prime of abc"""
    n = as_factored(n)
    return gcd(n.value, 2 * t.abc) == 1 and all(_residue_mod_abc(p, t) for p in n.primes)


def survey_triples(kmax: int, kmin: int = 0) -> pd.DataFrame:
    """Base-curve Selmer dimension for the triples of k in [kmin, kmax]"""
    records: List[Dict] = []
    for k in range(kmin, kmax + 1):
        t = triple_from_k(k)
        dim = base_selmer_dim(t)
        logger.debug("k = %d: (%s) has base Selmer dimension %d", k, t, dim)
        records.append({
            'k': k,
            'a': t.a,
            'b': t.b,
            'c': t.c,
            'abc_primes': " ".join(str(q) for q in t.qprimes),
            'kprime': t.kprime,
            'base_selmer_dim': dim,
            'usable': dim == 2
        })
    return pd.DataFrame(records)
