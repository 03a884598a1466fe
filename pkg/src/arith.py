"""Exact integer and Gaussian-integer arithmetic with the residue symbols.

Covers the Jacobi symbol and its additive form, the Hilbert symbol at every
place of Q, primary factorisation in Z[i], and the quadratic and quartic
residue symbols attached to primary Gaussian integers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple, Union

from sympy import factorint, isprime, jacobi_symbol, multiplicity
from sympy.ntheory import sqrt_mod

from utils import ContractViolation, ensure, require

logger = logging.getLogger(__name__)

INFINITY = float("inf")

Rational = Union[int, Fraction]


# ----------------------------------------------------------------------------
# rational integers

def vp(m: int, p: int) -> int:
    """p-adic valuation of a nonzero integer"""
    require(m != 0, "valuation of zero")
    return int(multiplicity(p, abs(m)))


def odd_part(m: int) -> int:
    return m >> vp(m, 2) if m > 0 else -((-m) >> vp(m, 2))


def squarefree_part(m: int) -> int:
    """Signed square-free kernel: m = squarefree_part(m) * s**2"""
    require(m != 0, "square-free part of zero")
    core = -1 if m < 0 else 1
    for p, e in factorint(abs(m)).items():
        if e % 2:
            core *= p
    return core


@dataclass(frozen=True)
class FactoredSquarefree:
    value: int
    primes: Tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.primes)

    def __int__(self) -> int:
        return self.value


@lru_cache(maxsize=65536)
def factor_squarefree(n: int) -> FactoredSquarefree:
    require(isinstance(n, int) and n >= 1, f"n must be a positive integer, got {n!r}")
    factors = factorint(n)
    require(all(e == 1 for e in factors.values()), f"n = {n} is not square-free")
    return FactoredSquarefree(n, tuple(sorted(factors)))


def as_factored(n: Union[int, FactoredSquarefree]) -> FactoredSquarefree:
    return n if isinstance(n, FactoredSquarefree) else factor_squarefree(int(n))


def jacobi(m: int, d: int) -> int:
    require(d >= 1 and d % 2 == 1, f"Jacobi symbol needs a positive odd modulus, got {d}")
    if d == 1:
        return 1
    return int(jacobi_symbol(m % d, d))


def additive_jacobi(m: int, d: int) -> int:
    """[m/d]: 1 when the Jacobi symbol is -1, else 0"""
    value = jacobi(m, d)
    if value == 0:
        raise ContractViolation(f"[{m}/{d}] undefined: gcd({m}, {d}) > 1")
    return 1 if value == -1 else 0


def _integer_class(x: Rational) -> int:
    if isinstance(x, Fraction):
        return x.numerator * x.denominator
    return int(x)


def hilbert(a: Rational, b: Rational, place) -> int:
    """Hilbert symbol (a, b) at a prime or at INFINITY"""
    a, b = _integer_class(a), _integer_class(b)
    require(a != 0 and b != 0, "Hilbert symbol of zero")
    if place == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    require(isprime(p), f"place {place} is neither a prime nor infinity")
    alpha, beta = vp(a, p), vp(b, p)
    u, v = a // p**alpha, b // p**beta
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        left = jacobi(u, p) if beta % 2 else 1
        right = jacobi(v, p) if alpha % 2 else 1
        return sign * left * right

    def eps(x: int) -> int:
        return ((x - 1) // 2) % 2

    def omega(x: int) -> int:
        return ((x * x - 1) // 8) % 2

    exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
    return -1 if exponent % 2 else 1


# ----------------------------------------------------------------------------
# Gaussian integers

def _nearest(num: int, den: int) -> int:
    return (2 * num + den) // (2 * den)


@dataclass(frozen=True)
class GaussInt:
    re: int
    im: int = 0

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def __add__(self, other) -> "GaussInt":
        other = gauss(other)
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other) -> "GaussInt":
        other = gauss(other)
        return GaussInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other) -> "GaussInt":
        other = gauss(other)
        return GaussInt(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __divmod__(self, other) -> Tuple["GaussInt", "GaussInt"]:
        other = gauss(other)
        den = other.norm()
        require(den != 0, "division by zero in Z[i]")
        z = self * other.conjugate()
        q = GaussInt(_nearest(z.re, den), _nearest(z.im, den))
        return q, self - q * other

    def __mod__(self, other) -> "GaussInt":
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        return not (gauss(other) % self)

    def exact_div(self, other) -> "GaussInt":
        q, r = divmod(self, other)
        require(not r, f"{other} does not divide {self}")
        return q

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i"


def gauss(x) -> GaussInt:
    if isinstance(x, GaussInt):
        return x
    if isinstance(x, complex):
        return GaussInt(int(x.real), int(x.imag))
    return GaussInt(int(x), 0)


ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS = (ONE, I, GaussInt(-1, 0), GaussInt(0, -1))

# QuarticValue: one of 0, +1, -1, +i, -i, carried as a GaussInt
QuarticValue = GaussInt
ZERO = GaussInt(0, 0)


def ggcd(a: GaussInt, b: GaussInt) -> GaussInt:
    while b:
        a, b = b, a % b
    return a


def pow_mod(base: GaussInt, exponent: int, modulus: GaussInt) -> GaussInt:
    result = ONE % modulus
    base = base % modulus
    while exponent:
        if exponent & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        exponent >>= 1
    return result


def is_primary(z: GaussInt) -> bool:
    """z is congruent to 1 modulo 2+2i"""
    return z.im % 2 == 0 and (z.re + z.im) % 4 == 1


def primary_associate(z: GaussInt) -> Tuple[GaussInt, GaussInt]:
    """(unit, primary) with z = unit * primary"""
    require(z.norm() % 2 == 1, f"{z} is not coprime to 1+i")
    for u in UNITS:
        candidate = u * z
        if is_primary(candidate):
            # u * z = candidate, so z = u^-1 * candidate and u^-1 = conj(u)
            return u.conjugate(), candidate
    raise AssertionError(f"no primary associate of {z}")


@lru_cache(maxsize=8192)
def gaussian_primes_above(p: int) -> Tuple[GaussInt, ...]:
    """Primary primes above an odd rational prime; split primes list im > 0 first"""
    require(isprime(p) and p % 2 == 1, f"{p} is not an odd prime")
    if p % 4 == 3:
        return (GaussInt(-p, 0),)
    x = int(sqrt_mod(p - 1, p))
    pi = primary_associate(ggcd(GaussInt(p, 0), GaussInt(x, 1)))[1]
    ensure(pi.norm() == p, f"bad split of {p}")
    logger.debug("%d splits as (%s)(%s)", p, pi, pi.conjugate())
    first, second = (pi, pi.conjugate()) if pi.im > 0 else (pi.conjugate(), pi)
    return first, second


def primary_factorization(theta: GaussInt) -> Tuple[GaussInt, List[GaussInt]]:
    """theta = unit * product of primary primes"""
    theta = gauss(theta)
    require(bool(theta), "cannot factor zero")
    require(theta.norm() % 2 == 1, f"{theta} is divisible by 1+i")
    factors: List[GaussInt] = []
    rest = theta
    for p, e in sorted(factorint(theta.norm()).items()):
        if p % 4 == 3:
            factors.extend([GaussInt(-p, 0)] * (e // 2))
            rest = rest.exact_div(GaussInt(p ** (e // 2), 0))
            continue
        for pi in gaussian_primes_above(p):
            while pi.divides(rest):
                factors.append(pi)
                rest = rest.exact_div(pi)
    ensure(rest.is_unit(), f"factorisation of {theta} left {rest}")
    product = ONE
    for f in factors:
        product = product * f
    unit = theta.exact_div(product)
    return unit, factors


def _prime_factors_of_modulus(lam: GaussInt) -> List[GaussInt]:
    unit, factors = primary_factorization(lam)
    require(unit == ONE, f"{lam} is not primary")
    return factors


def _match_unit(residue: GaussInt, pi: GaussInt) -> GaussInt:
    for u in UNITS:
        if pi.divides(residue - u):
            return u
    raise AssertionError(f"{residue} is not a unit modulo {pi}")


def legendre_gauss(alpha, lam) -> int:
    """Quadratic residue symbol (alpha/lam) over Z[i] for primary lam"""
    alpha = gauss(alpha)
    value = 1
    for pi in _prime_factors_of_modulus(gauss(lam)):
        if pi.divides(alpha):
            return 0
        u = _match_unit(pow_mod(alpha, (pi.norm() - 1) // 2, pi), pi)
        ensure(u.im == 0, f"Euler criterion gave {u} modulo {pi}")
        value *= u.re
    return value


def quartic_symbol(alpha, lam) -> QuarticValue:
    """Quartic residue symbol (alpha/lam)_4 for primary lam, one of 0, ±1, ±i"""
    alpha = gauss(alpha)
    value = ONE
    for pi in _prime_factors_of_modulus(gauss(lam)):
        if pi.divides(alpha):
            return ZERO
        value = value * _match_unit(pow_mod(alpha, (pi.norm() - 1) // 4, pi), pi)
    return value


def rational_quartic(q: int, d: int) -> int:
    """(q/d)_4 for d whose primes are 1 mod 4 with q a square modulo each of them"""
    require(d >= 1, f"(q/d)_4 needs d >= 1, got {d}")
    value = 1
    factors: Dict[int, int] = factorint(d)
    for p, e in factors.items():
        require(p % 4 == 1, f"({q}/{d})_4 undefined: {p} is not 1 mod 4")
        require(jacobi(q, p) == 1, f"({q}/{d})_4 undefined: {q} is not a square mod {p}")
        symbol = quartic_symbol(GaussInt(q, 0), gaussian_primes_above(p)[0])
        ensure(symbol.im == 0, f"({q}/{p})_4 = {symbol} is not real")
        value *= symbol.re ** e
    return value
