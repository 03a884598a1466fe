"""Gauss genus theory for Q(sqrt(-n)), n odd square-free with n = 1 mod 4.

The 4-rank comes from the Rédei matrix, the 8-rank from one norm equation
and one more linear system over GF(2). Reduced binary quadratic forms give an
independent class-group oracle.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import chain
from math import gcd, isqrt
from typing import Dict, Iterator, List, Optional, Tuple

from sympy import divisors, mod_inverse

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex
from sympy.ntheory import sqrt_mod

from arith import (INFINITY, FactoredSquarefree, additive_jacobi, as_factored,
                   hilbert, odd_part, rational_quartic, vp)
from config import config
from f2linalg import BitMatrix, kernel_basis, rank, solve
from utils import ContractViolation, SearchExhausted, ensure, require

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormSolution:
    d: int
    dprime: int
    r: int
    alpha: int
    beta: int
    gamma: int

    def check(self) -> bool:
        return (self.d * self.alpha ** 2 + self.dprime * self.beta ** 2 == 2 ** self.r * self.gamma ** 2
                and gcd(gcd(self.alpha, self.beta), self.gamma) == 1)


@dataclass
class GenusReport:
    n: FactoredSquarefree
    h2: int
    h4: int
    h8: Optional[int]
    d0: Optional[int]
    oracle: Optional[Tuple[int, int, int]] = None
    witness: Optional[NormSolution] = field(default=None, repr=False)

    @property
    def oracle_agrees(self) -> Optional[bool]:
        if self.oracle is None:
            return None
        return self.oracle == (self.h2, self.h4, self.h8)

    def to_dict(self) -> Dict:
        return {
            "n": self.n.value,
            "h2": self.h2,
            "h4": self.h4,
            "h8": self.h8,
            "d0": self.d0,
            "oracle_agrees": self.oracle_agrees if self.oracle is not None else "skipped",
        }


# ----------------------------------------------------------------------------
# symbol matrices

def symbol_matrix(n) -> BitMatrix:
    """A with a_ij = [p_j/p_i] off the diagonal and zero row sums"""
    primes = as_factored(n).primes
    k = len(primes)
    rows = [[0] * k for _ in range(k)]
    for i, p in enumerate(primes):
        for j, q in enumerate(primes):
            if i != j:
                rows[i][j] = additive_jacobi(q, p)
        rows[i][i] = sum(rows[i]) % 2
    return BitMatrix.from_rows(rows, cols=0)


def symbol_diagonal(u: int, n) -> BitMatrix:
    """D_u = diag([u/p_1], ..., [u/p_k])"""
    return BitMatrix.diagonal([additive_jacobi(u, p) for p in as_factored(n).primes])


def symbol_column(u: int, n) -> List[int]:
    return [additive_jacobi(u, p) for p in as_factored(n).primes]


def _require_genus_input(n: FactoredSquarefree) -> None:
    require(n.value > 1, "genus theory needs n > 1")
    require(n.value % 2 == 1, f"n = {n.value} must be odd")
    require(n.value % 4 == 1,
            f"n = {n.value} is 3 mod 4: this Rédei matrix is only set up for n = 1 mod 4, "
            "where -4n is a field discriminant; use classgroup_oracle for other odd n")


def redei_matrix(n) -> BitMatrix:
    """Rédei matrix of discriminant -4n: k rows, one column per odd prime then one for 2"""
    n = as_factored(n)
    _require_genus_input(n)
    D = -4 * n.value
    primes = n.primes
    rows = []
    for i, p in enumerate(primes):
        p_star = p if p % 4 == 1 else -p
        row = []
        for j, q in enumerate(primes):
            row.append(additive_jacobi(D // p_star, p) if i == j else additive_jacobi(q, p))
        row.append(additive_jacobi(2, p))
        rows.append(row)
    return BitMatrix.from_rows(rows)


def h2(n) -> int:
    return as_factored(n).k


def h4(n) -> int:
    n = as_factored(n)
    return n.k - rank(redei_matrix(n))


def _divisor_of(vector, n: FactoredSquarefree) -> int:
    d = 1
    for bit, p in zip(list(vector), list(n.primes) + [2]):
        if bit:
            d *= p
    return d


def sqf_product(d1: int, d2: int) -> int:
    """d1 * d2 / gcd(d1, d2)**2"""
    g = gcd(d1, d2)
    return (d1 // g) * (d2 // g)


def distinguished_divisor(n) -> int:
    """Divisor d0 of 2n standing for the non-trivial class of 2A ∩ A[2]"""
    n = as_factored(n)
    require(h4(n) == 1, f"h4({n.value}) != 1, no distinguished divisor")
    R = redei_matrix(n)
    basis = kernel_basis(R)
    norms = {1}
    for v in basis:
        norms |= {sqf_product(m, _divisor_of(v, n)) for m in norms}
    remaining = sorted(norms - {1, n.value})
    ensure(len(remaining) == 2, f"kernel of the Rédei matrix of {n.value} has {len(norms)} divisors")
    ensure(sqf_product(*remaining) == n.value, "distinguished pair does not multiply to n")
    return remaining[0]


# ----------------------------------------------------------------------------
# norm equation d x^2 + d' y^2 = 2^r z^2

def norm_equation_solvable(d: int, dprime: int, r: int) -> bool:
    """Local-global decision by Hilbert symbols"""
    c = 2 ** r
    a, b = c * d, c * dprime
    places = {2, INFINITY} | set(as_factored(d).primes) | set(as_factored(dprime).primes)
    return all(hilbert(a, b, place) == 1 for place in places)


def _check_norm_input(d: int, dprime: int, r: int) -> None:
    require(d >= 1 and dprime >= 1, "norm equation needs positive coefficients")
    require(r in (0, 1), f"r must be 0 or 1, got {r}")
    require(gcd(d, dprime) == 1, f"coefficients {d} and {dprime} must be coprime")
    as_factored(d)
    as_factored(dprime)


def _first_coordinates(d: int, dprime: int, c: int) -> List[int]:
    """Residues rho modulo dprime with d rho^2 = c"""
    if dprime == 1:
        return [0]
    target = (c * mod_inverse(d, dprime)) % dprime
    return sorted(int(x) for x in sqrt_mod(target, dprime, all_roots=True) or [])


def iter_norm_solutions(d: int, dprime: int, r: int,
                        gamma_start: Optional[int] = None,
                        gamma_max: Optional[int] = None) -> Iterator[NormSolution]:
    """Positive primitive solutions in order of gamma, then alpha.

    alpha only runs through the classes gamma*rho mod dprime that make the
    right-hand side divisible by dprime.
    """
    _check_norm_input(d, dprime, r)
    bound = gamma_start or config.NORM_GAMMA_START
    limit = gamma_max or config.NORM_GAMMA_MAX
    c = 2 ** r
    swap = d > dprime
    # scan the coordinate whose coefficient is smaller; the residue classes
    # then come from the larger modulus
    lead, other = (dprime, d) if swap else (d, dprime)
    roots = _first_coordinates(lead, other, c)
    if not roots:
        return
    gamma = 0
    while True:
        gamma += 1
        if gamma > bound:
            if bound >= limit:
                raise SearchExhausted(f"no solution of {d}x^2 + {dprime}y^2 = {c}z^2 found", bound)
            bound = min(2 * bound, limit)
            logger.debug("norm search for (%d, %d, %d) extended to gamma <= %d", d, dprime, r, bound)
        if gcd(gamma, other) != 1:
            continue
        rhs = c * gamma * gamma
        top = isqrt((rhs - 1) // lead)
        found = []
        for rho in {(gamma * root) % other for root in roots}:
            x = rho if rho else other
            while x <= top:
                rest = rhs - lead * x * x
                y2 = rest // other
                y = isqrt(y2)
                if y >= 1 and y * y == y2 and gcd(gcd(x, y), gamma) == 1:
                    found.append((y, x) if swap else (x, y))
                x += other
        for alpha, beta in sorted(found):
            yield NormSolution(d, dprime, r, alpha, beta, gamma)


def solve_norm_equation(d: int, dprime: int, r: int,
                        rng: Optional[random.Random] = None,
                        gamma_start: Optional[int] = None,
                        gamma_max: Optional[int] = None) -> NormSolution:
    """A positive primitive solution of d a^2 + d' b^2 = 2^r c^2.

    With rng the answer is drawn from the first few solutions in search order.
    """
    _check_norm_input(d, dprime, r)
    if not norm_equation_solvable(d, dprime, r):
        raise ContractViolation(f"{d}x^2 + {dprime}y^2 = {2 ** r}z^2 has no nontrivial solution")
    solutions = iter_norm_solutions(d, dprime, r, gamma_start, gamma_max)
    if rng is None:
        for solution in solutions:
            return solution
        raise SearchExhausted("norm equation search ended without a solution", gamma_max or config.NORM_GAMMA_MAX)
    pool = []
    for solution in solutions:
        pool.append(solution)
        if len(pool) >= config.NORM_ALTERNATIVES:
            break
    if not pool:
        raise SearchExhausted("norm equation search ended without a solution", gamma_max or config.NORM_GAMMA_MAX)
    return rng.choice(pool)


# ----------------------------------------------------------------------------
# 8-rank

def residue_vector(w: int, n) -> List[int]:
    return symbol_column(w, n)


def h8_witness(n, rng: Optional[random.Random] = None) -> Tuple[int, NormSolution]:
    """(h8, norm solution) via the norm equation of d0 and the system R Y = W"""
    n = as_factored(n)
    require(h4(n) == 1, f"h8 indicator needs h4({n.value}) = 1")
    d0 = distinguished_divisor(n)
    r = vp(d0, 2)
    d = odd_part(d0)
    dprime = n.value // d
    require(norm_equation_solvable(d, dprime, r), f"d0 = {d0} is not a norm")
    solutions = iter_norm_solutions(d, dprime, r)
    if rng is not None:
        # shuffle the first few, then keep scanning in search order
        pool = [s for _, s in zip(range(config.NORM_ALTERNATIVES), solutions)]
        solutions = chain(rng.sample(pool, len(pool)), solutions)
    R = redei_matrix(n)
    for solution in solutions:
        w = odd_part(solution.gamma)
        stripped = vp(solution.gamma, 2)
        if gcd(w, n.value) != 1:
            logger.debug("gamma = %d shares a factor with %d, trying the next solution", solution.gamma, n.value)
            continue
        if stripped:
            logger.debug("stripped 2^%d from gamma = %d", stripped, solution.gamma)
        W = residue_vector(w, n)
        return (1 if solve(R, W) is not None else 0), solution
    raise SearchExhausted(f"no norm solution for d0 = {d0} with gamma coprime to {n.value}", config.NORM_GAMMA_MAX)


def h8_indicator(n, rng: Optional[random.Random] = None) -> int:
    return h8_witness(n, rng)[0]


def jung_yue_h8(n) -> int:
    """8-rank indicator from quartic symbols, for n = 1 mod 8 with every prime 1 mod 4"""
    n = as_factored(n)
    require(n.value % 8 == 1, f"n = {n.value} must be 1 mod 8")
    require(all(p % 4 == 1 for p in n.primes), f"every prime of {n.value} must be 1 mod 4")
    require(h4(n) == 1, f"h4({n.value}) != 1")
    A = symbol_matrix(n)
    k = n.k
    if rank(A) == k - 2:
        x0 = tuple([1] * k)
        vectors = [tuple(int(b) for b in v) for v in kernel_basis(A)]
        span = {tuple(0 for _ in range(k))}
        for v in vectors:
            span |= {tuple(a ^ b for a, b in zip(s, v)) for s in span}
        z = next(v for v in sorted(span) if v[0] == 1 and v != x0)
        d = _divisor_of(z, n)
        dprime = n.value // d
        return 1 if rational_quartic(d, dprime) * rational_quartic(dprime, d) == -1 else 0
    z = solve(A, symbol_column(2, n))
    ensure(z is not None, "the column of [2/p] is not in the image of A")
    d = _divisor_of(z, n)
    dprime = n.value // d
    lhs = rational_quartic(2 * d, dprime) * rational_quartic(2 * dprime, d)
    rhs = -1 if ((d + dprime - 2) // 8) % 2 else 1
    return 1 if lhs == rhs else 0


# ----------------------------------------------------------------------------
# class group oracle

Form = Tuple[int, int, int]


def reduce_form(a: int, b: int, c: int) -> Form:
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if abs(b) > a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            q = (b - r) // (2 * a)
            c = c - q * b + q * q * a
            b = r
            continue
        if (abs(b) == a or a == c) and b < 0:
            b = -b
            continue
        return a, b, c


def compose_forms(f1: Form, f2: Form, disc: int) -> Form:
    a1, b1, _ = f1
    a2, b2, _ = f2
    s = (b1 + b2) // 2
    u1, v1, d1 = igcdex(a1, a2)
    u2, v2, d = igcdex(d1, s)
    a3 = (a1 * a2) // (d * d)
    b3 = (u2 * u1 * a1 * b2 + u2 * v1 * a2 * b1 + v2 * (b1 * b2 + disc) // 2) // d
    b3 %= 2 * a3
    c3 = (b3 * b3 - disc) // (4 * a3)
    return reduce_form(a3, b3, c3)


def class_group_forms(n: int) -> List[Form]:
    """Reduced primitive forms of discriminant -4n"""
    require(n >= 1, "n must be positive")
    forms = []
    beta = 0
    while 3 * beta * beta <= n:
        m = beta * beta + n
        for a in divisors(m):
            c = m // a
            if a < 2 * beta or a > c:
                continue
            if gcd(gcd(a, 2 * beta), c) != 1:
                continue
            forms.append((a, 2 * beta, c))
            if 0 < 2 * beta < a < c:
                forms.append((a, -2 * beta, c))
        beta += 1
    return sorted(forms)


def _log2(size: int) -> int:
    exponent = size.bit_length() - 1
    ensure(size == 1 << exponent, f"{size} is not a power of two")
    return exponent


def classgroup_oracle(n: int) -> Tuple[int, int, int]:
    """(h2, h4, h8) read off the class group of forms of discriminant -4n"""
    n = int(n)
    require(n % 2 == 1, f"n = {n} must be odd")
    require(n <= config.CLASSGROUP_MAX_N, f"n = {n} exceeds the class group bound {config.CLASSGROUP_MAX_N}")
    as_factored(n)
    disc = -4 * n
    identity = (1, 0, n)
    forms = class_group_forms(n)
    double = {f: compose_forms(f, f, disc) for f in forms}
    two_torsion = {f for f in forms if double[f] == identity}
    squares = set(double.values())
    fourths = {double[f] for f in squares}
    return (_log2(len(two_torsion)),
            _log2(len(two_torsion & squares)),
            _log2(len(two_torsion & fourths)))


# ----------------------------------------------------------------------------

def genus_report(n, oracle: bool = False, rng: Optional[random.Random] = None) -> GenusReport:
    n = as_factored(n)
    _require_genus_input(n)
    four = h4(n)
    d0 = None
    witness = None
    if four == 1:
        d0 = distinguished_divisor(n)
        eight, witness = h8_witness(n, rng)
    elif four == 0:
        eight = 0
    else:
        eight = None
    checked = None
    if oracle and n.value <= config.CLASSGROUP_MAX_N:
        checked = classgroup_oracle(n.value)
        if eight is None:
            eight = checked[2]
    return GenusReport(n=n, h2=h2(n), h4=four, h8=eight, d0=d0, oracle=checked, witness=witness)
