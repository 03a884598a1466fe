"""2-Selmer groups of the twists y^2 = x(x - A n)(x + B n), A + B = 2C.

A class in Sel_2 is a triple (d1, d2, d3) of square classes with square
product; modulo the image of rational 2-torsion every class has a
representative with d1, d2 positive divisors of n*abc. The matrix M_n turns
membership into a kernel computation. Two local tests are kept side by side:
the closed case tables, and an independent oracle that builds the local
Kummer image from sampled points.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from sympy import divisors

from arith import (INFINITY, FactoredSquarefree, additive_jacobi, as_factored,
                   jacobi, squarefree_part, vp)
from config import config
from f2linalg import BitMatrix, kernel_basis, span
from family import TwistTriple, satisfies_residue_condition
from genus import symbol_diagonal, symbol_matrix
from utils import ContractViolation, require

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class SelmerElement:
    d1: int
    d2: int
    d3: int

    def __post_init__(self):
        require(all(d != 0 for d in self), f"{tuple(self)} has a zero entry")
        require(squarefree_part(self.d1 * self.d2 * self.d3) == 1,
                f"{tuple(self)}: d1*d2*d3 is not a square")

    @classmethod
    def from_pair(cls, d1: int, d2: int) -> "SelmerElement":
        d1, d2 = squarefree_part(d1), squarefree_part(d2)
        return cls(d1, d2, squarefree_part(d1 * d2))

    def __iter__(self):
        return iter((self.d1, self.d2, self.d3))

    def __mul__(self, other: "SelmerElement") -> "SelmerElement":
        return SelmerElement.from_pair(self.d1 * other.d1, self.d2 * other.d2)

    def __str__(self) -> str:
        return f"({self.d1}, {self.d2}, {self.d3})"


IDENTITY = SelmerElement(1, 1, 1)


def _odd_squarefree(n) -> FactoredSquarefree:
    n = as_factored(n)
    require(n.value % 2 == 1, f"n = {n.value} must be odd")
    return n


def torsion_images(t: TwistTriple, n) -> List[SelmerElement]:
    """Images of O, (An, 0), (-Bn, 0), (0, 0)"""
    nv = as_factored(n).value
    A, B, C = t.A, t.B, t.C
    return [
        IDENTITY,
        SelmerElement.from_pair(2 * A * C, 2 * C * nv),
        SelmerElement.from_pair(-2 * C * nv, 2 * B * C),
        SelmerElement.from_pair(-A * nv, B * nv),
    ]


def _is_canonical(lam: SelmerElement, t: TwistTriple, n: FactoredSquarefree) -> bool:
    m = n.value * t.abc
    return lam.d1 > 0 and lam.d2 > 0 and m % lam.d1 == 0 and m % lam.d2 == 0


def canonical_form(lam: SelmerElement, t: TwistTriple, n) -> SelmerElement:
    """Representative modulo 2-torsion with d1, d2 positive divisors of n*abc"""
    n = _odd_squarefree(n)
    for torsion in torsion_images(t, n):
        candidate = lam * torsion
        if _is_canonical(candidate, t, n):
            return candidate
    raise ContractViolation(f"{lam} has no representative dividing n*abc = {n.value * t.abc}")


# ----------------------------------------------------------------------------
# matrices

def _residue_block(rows: Sequence[int], cols: Sequence[int]) -> BitMatrix:
    """f_ij = [cols_j / rows_i], zero where the primes coincide"""
    return BitMatrix.from_rows([[0 if q == p else additive_jacobi(q, p) for q in cols] for p in rows],
                               cols=len(cols))


def build_M1(t: TwistTriple) -> BitMatrix:
    """Matrix whose kernel is the pure 2-Selmer group of the base curve.

    Columns: z over the primes of a, z over the primes of c, w over the
    primes of b, w over the primes of c.
    """
    qa, qb, qc = t.aprimes, t.bprimes, t.cprimes
    ka, kb, kc = len(qa), len(qb), len(qc)
    Z = BitMatrix.zeros
    delta_prime = BitMatrix.diagonal([additive_jacobi(-1, q) for q in qb])
    delta = BitMatrix.identity(kc)
    return BitMatrix.block([
        [Z(ka, ka), Z(ka, kc), _residue_block(qa, qb), _residue_block(qa, qc)],
        [_residue_block(qb, qa), _residue_block(qb, qc), Z(kb, kb), Z(kb, kc)],
        [_residue_block(qc, qa), Z(kc, kc), _residue_block(qc, qb), Z(kc, kc)],
        [Z(kb, ka), Z(kb, kc), delta_prime, Z(kb, kc)],
        [Z(kc, ka), delta, Z(kc, kb), delta],
    ]) if (ka + kb + kc) else BitMatrix.zeros(0, 0)


def monsky_matrix(n) -> BitMatrix:
    """[[A + D_-2, D_2], [D_2, A + D_2]]"""
    n = _odd_squarefree(n)
    A = symbol_matrix(n)
    D2 = symbol_diagonal(2, n)
    Dm2 = symbol_diagonal(-2, n)
    return BitMatrix.block([[A + Dm2, D2], [D2, A + D2]]) if n.k else BitMatrix.zeros(0, 0)


def _require_matrix_regime(t: TwistTriple, n: FactoredSquarefree) -> None:
    require(gcd(n.value, 2 * t.abc) == 1, f"n = {n.value} must be coprime to 2abc = {2 * t.abc}")
    require(satisfies_residue_condition(n, t),
            f"every prime of n = {n.value} must be a square modulo every prime of abc = {t.abc}")


def build_Mn(t: TwistTriple, n) -> BitMatrix:
    n = _odd_squarefree(n)
    _require_matrix_regime(t, n)
    k = n.k
    M1 = build_M1(t)
    qa, qb, qc = t.aprimes, t.bprimes, t.cprimes
    p = n.primes
    Z = BitMatrix.zeros
    G1, G2, G3 = _residue_block(p, qa), _residue_block(p, qb), _residue_block(p, qc)
    calG = BitMatrix.block([
        [G1, G3, Z(k, len(qb)), Z(k, len(qc))],
        [Z(k, len(qa)), Z(k, len(qc)), G2, G3],
    ]) if k else Z(0, M1.cols)
    top = monsky_matrix(n).hstack(calG)
    bottom = Z(M1.rows, 2 * k).hstack(M1)
    return top.vstack(bottom)


def decode_vector(v: Sequence[int], t: TwistTriple, n) -> SelmerElement:
    """(x, y, z, w) -> canonical (d1, d2, d3)"""
    n = as_factored(n)
    k = n.k
    bits = [int(b) for b in v]
    x, y = bits[:k], bits[k:2 * k]
    rest = bits[2 * k:]
    ka, kb, kc = len(t.aprimes), len(t.bprimes), len(t.cprimes)
    z_a, z_c = rest[:ka], rest[ka:ka + kc]
    w_b, w_c = rest[ka + kc:ka + kc + kb], rest[ka + kc + kb:]
    d1 = _product(n.primes, x) * _product(t.aprimes, z_a) * _product(t.cprimes, z_c)
    d2 = _product(n.primes, y) * _product(t.bprimes, w_b) * _product(t.cprimes, w_c)
    return SelmerElement.from_pair(d1, d2)


def _product(primes: Iterable[int], bits: Iterable[int]) -> int:
    out = 1
    for p, b in zip(primes, bits):
        if b:
            out *= p
    return out


def selmer_group(t: TwistTriple, n) -> List[SelmerElement]:
    """Pure 2-Selmer group as canonical representatives, via ker M_n"""
    M = build_Mn(t, n)
    vectors = span(kernel_basis(M), M.cols)
    return sorted(decode_vector(v, t, n) for v in vectors)


def s2(t: TwistTriple, n) -> int:
    return len(kernel_basis(build_Mn(t, n)))


def full_selmer_dim(t: TwistTriple, n) -> int:
    return s2(t, n) + 2


# ----------------------------------------------------------------------------
# local solvability from the case tables

def _in_table_regime(lam: SelmerElement, t: TwistTriple, n: FactoredSquarefree) -> bool:
    return (n.value % 2 == 1 and gcd(n.value, t.abc) == 1
            and satisfies_residue_condition(n, t) and _is_canonical(lam, t, n))


def _table_at_n_prime(lam: SelmerElement, t: TwistTriple, nv: int, p: int) -> bool:
    d1, d2, _ = lam
    A, B, C = t.A, t.B, t.C
    N = nv * A * B * C
    leg = lambda m: jacobi(m, p)
    # (N/d / p) for p | d, computed on N*d / p^2
    quot = lambda d: jacobi((N // p) * (d // p), p)
    p1, p2 = d1 % p == 0, d2 % p == 0
    if not p1 and not p2:
        return leg(d1) == 1 and leg(d2) == 1
    if not p1 and p2:
        return leg(d1) == leg(2 * A * C) and quot(d2) == leg(2 * A * B)
    if p1 and not p2:
        return quot(d1) == leg(-2 * A * B) and leg(d2) == leg(2 * B * C)
    return quot(d1) == leg(-B * C) and quot(d2) == leg(A * C)


def _table_at_abc_prime(lam: SelmerElement, t: TwistTriple, nv: int, p: int) -> bool:
    d1, d2, d3 = lam
    A, B, C = t.A, t.B, t.C
    leg = lambda m: jacobi(m, p)
    # a non-split node at p puts every unit class in the image
    if A % p == 0:
        if d2 % p == 0:
            return False
        if d1 % p:
            return leg(d2) == 1 or leg(B * nv) == -1
        if vp(A, p) == 1:
            return leg(B * nv * d2) == 1
        return leg(d2) == 1 and leg(B * nv) == 1
    if B % p == 0:
        if d1 % p == 0:
            return False
        if d2 % p:
            return leg(d1) == 1 or leg(-A * nv) == -1
        if vp(B, p) == 1:
            return leg(-A * nv * d1) == 1
        return leg(-A * nv) == 1 and leg(d1) == 1
    if d3 % p == 0:
        return False
    if (d1 * d2) % p:
        return leg(d3) == 1 or leg(A * nv) == -1
    if vp(C, p) == 1:
        return leg(A * nv * d3) == 1
    return leg(A * nv) == 1 and leg(d3) == 1


def local_solvable_lemma(lam: SelmerElement, t: TwistTriple, n, place) -> bool:
    """D_lam(Q_v) is non-empty, decided by the closed case tables"""
    n = as_factored(n)
    d1, d2, d3 = lam
    if place == INFINITY:
        return d2 > 0
    p = int(place)
    if p == 2 and d1 % 2 != d2 % 2:
        return False
    if not _in_table_regime(lam, t, n) or (p == 2 and d1 % 2 == 0):
        logger.debug("routing %s at %s to the local image oracle", lam, place)
        return local_solvable_bruteforce(lam, t, n, place)
    nv = n.value
    if p == 2:
        return (((d1 - d3) % 4 == 0 and (d1 - d2) % 8 == 0)
                or ((d1 + t.A * nv) % 4 == 0 and (d1 - d2 + 2 * t.C * nv) % 8 == 0))
    if nv % p == 0:
        return _table_at_n_prime(lam, t, nv, p)
    if t.abc % p == 0:
        return _table_at_abc_prime(lam, t, nv, p)
    return (d1 * d2 * d3) % p != 0


# ----------------------------------------------------------------------------
# local solvability from the local Kummer image

def _split_unit(x: Fraction, p: int) -> Tuple[int, int]:
    num, den = x.numerator, x.denominator
    a, b = vp(num, p), vp(den, p)
    return a - b, (num // p ** a) * (den // p ** b)


def square_class(x, p: int) -> Tuple[int, ...]:
    """Coordinates of x in Q_p^x / squares over GF(2)"""
    v, u = _split_unit(Fraction(x), p)
    if p == 2:
        return (v % 2, 1 if u % 4 == 3 else 0, 1 if u % 8 in (3, 5) else 0)
    return (v % 2, additive_jacobi(u, p))


def is_local_square(x, p: int) -> bool:
    v, u = _split_unit(Fraction(x), p)
    if v % 2:
        return False
    return u % 8 == 1 if p == 2 else jacobi(u, p) == 1


def _kummer_vector(first, second, p: int) -> Tuple[int, ...]:
    return square_class(first, p) + square_class(second, p)


def _sample_units(p: int) -> List[int]:
    if p == 2:
        top = 64
    elif p < 50:
        top = p * p
    else:
        top = 4 * p
    return [u for u in range(1, top) if u % p]


@lru_cache(maxsize=4096)
def local_image(A: int, B: int, C: int, nv: int, p: int, precision: int) -> FrozenSet[Tuple[int, ...]]:
    """Image of E(Q_p) in (Q_p^x / squares)^2 through (x - An, x + Bn)"""
    An, Bn = A * nv, B * nv
    target = 3 if p == 2 else 2
    span_set: Set[Tuple[int, ...]] = set()

    def add(vector: Tuple[int, ...]) -> None:
        if vector not in span_set:
            span_set.update(span([vector] + list(span_set), len(vector)))

    width = 6 if p == 2 else 4
    span_set.add(tuple([0] * width))
    add(_kummer_vector(2 * A * C, 2 * C * nv, p))
    add(_kummer_vector(-2 * C * nv, 2 * B * C, p))
    add(_kummer_vector(-An, Bn, p))
    full = 2 ** target
    if len(span_set) >= full:
        return frozenset(span_set)

    depth = 2 * vp(2 * nv * A * B * C, p) + precision
    if p == 2:
        depth = max(depth, config.LOCAL_PRECISION_2ADIC)
    units = _sample_units(p)
    for j in range(-depth, depth + 1):
        step = Fraction(p) ** j
        for root in (0, An, -Bn):
            for u in units:
                for sign in (1, -1):
                    x = root + sign * u * step
                    fx = x * (x - An) * (x + Bn)
                    if fx == 0 or not is_local_square(fx, p):
                        continue
                    add(_kummer_vector(x - An, x + Bn, p))
                    if len(span_set) >= full:
                        return frozenset(span_set)
    logger.warning("local image at p=%d for n=%d reached only %d of %d classes",
                   p, nv, len(span_set), full)
    return frozenset(span_set)


def local_solvable_bruteforce(lam: SelmerElement, t: TwistTriple, n, place,
                              precision: Optional[int] = None) -> bool:
    """D_lam(Q_v) is non-empty iff lam lies in the image of E(Q_v).

    The image is not found by searching primitive points of the quartic
    system modulo p^m. It is spanned by the 2-torsion images and the Kummer
    classes of x-coordinates sampled around each root, at valuations down to
    the working precision; a warning is logged if the span stays short.
    """
    nv = as_factored(n).value
    d1, d2, _ = lam
    if place == INFINITY:
        An, Bn = t.A * nv, t.B * nv
        signs = lambda first, second: (1 if first < 0 else 0, 1 if second < 0 else 0)
        # one real point on each component: x > An and -Bn < x < 0
        points = [Fraction(An + 1), Fraction(-Bn, 2)]
        image = span([signs(2 * t.A * t.C, 2 * t.C * nv), signs(-2 * t.C * nv, 2 * t.B * t.C), signs(-An, Bn)]
                     + [signs(x - An, x + Bn) for x in points], 2)
        return signs(d1, d2) in image
    p = int(place)
    image = local_image(t.A, t.B, t.C, nv, p, config.LOCAL_PRECISION if precision is None else precision)
    return _kummer_vector(d1, d2, p) in image


def selmer_places(t: TwistTriple, n) -> List:
    primes = set(as_factored(n).primes) | set(t.qprimes) | {2}
    return sorted(primes) + [INFINITY]


def selmer_bruteforce(t: TwistTriple, n) -> List[SelmerElement]:
    """Canonical classes that are locally solvable at every bad place"""
    n = _odd_squarefree(n)
    require(gcd(n.value, 2 * t.abc) == 1, f"n = {n.value} must be coprime to 2abc")
    radical = n.value
    for q in t.qprimes:
        radical *= q
    places = selmer_places(t, n)
    found = []
    for d1, d2 in product(divisors(radical), repeat=2):
        lam = SelmerElement.from_pair(d1, d2)
        if all(local_solvable_bruteforce(lam, t, n, place) for place in places):
            found.append(lam)
    return sorted(found)
