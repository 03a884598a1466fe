"""Rational torsion of y^2 = x(x - a)(x + b).

Ono's criteria decide points of order 3, 4 and 8 from a and b alone; the
division-polynomial oracle finds the torsion points themselves. Integral
models put torsion x-coordinates in Z, so only integer roots are scanned.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Tuple

from sympy import Poly, divisors, integer_nthroot, symbols
from sympy.ntheory.primetest import is_square

from utils import ensure, require

logger = logging.getLogger(__name__)

X = symbols('x')

EXCLUDED_ORDER3_RATIOS = {Fraction(-2), Fraction(-1, 2), Fraction(-1), Fraction(1), Fraction(0)}


def _square(m: int) -> bool:
    return m >= 0 and is_square(m)


def _fourth_root(m: int):
    if m <= 0:
        return None
    root, exact = integer_nthroot(m, 4)
    return root if exact else None


def _ono_pairs(a: int, b: int) -> List[Tuple[int, int]]:
    return [(-a, b), (a, a + b), (-b, -a - b)]


def ono_order4(a: int, b: int) -> bool:
    """A point of order 4 exists iff one of the three pairs is two squares"""
    require(a != 0 and b != 0 and a + b != 0, f"({a}, {b}) gives a singular curve")
    return any(_square(p) and _square(q) for p, q in _ono_pairs(a, b))


def ono_order8(a: int, b: int) -> bool:
    """A pair equals [d^2 u^4, d^2 v^4] with u^2 + v^2 a square"""
    require(a != 0 and b != 0 and a + b != 0, f"({a}, {b}) gives a singular curve")
    for p, q in _ono_pairs(a, b):
        if p <= 0 or q <= 0:
            continue
        d2 = gcd(p, q)
        if not is_square(d2):
            continue
        u, v = _fourth_root(p // d2), _fourth_root(q // d2)
        if u is not None and v is not None and is_square(u * u + v * v):
            return True
    return False


def ono_order3(a: int, b: int) -> bool:
    """a = -(u^4 + 2u^3 v) d^2 and b = (v^4 + 2v^3 u) d^2 for coprime u, v"""
    require(a != 0 and b != 0 and a + b != 0, f"({a}, {b}) gives a singular curve")
    g = gcd(a, b)
    for d in divisors(g):
        d2 = d * d
        if g % d2:
            continue
        # |u|^3 <= |a| / d^2 since u + 2v != 0 on non-excluded ratios
        bound = integer_nthroot(max(abs(a), abs(b)) // d2, 3)[0] + 1
        for u in range(-bound, bound + 1):
            for v in range(1, bound + 1):
                if gcd(u, v) != 1 or Fraction(u, v) in EXCLUDED_ORDER3_RATIOS:
                    continue
                if -(u**4 + 2 * u**3 * v) * d2 == a and (v**4 + 2 * v**3 * u) * d2 == b:
                    logger.debug("order-3 parametrisation of (%d, %d): u=%d, v=%d, d=%d", a, b, u, v, d)
                    return True
    return False


@dataclass(frozen=True)
class TorsionShape:
    """Z/2 x Z/2m together with the torsion points found beyond E[2]"""
    m: int
    points: Tuple[Tuple[int, int], ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return "Z/2Z x Z/2Z" if self.m == 1 else f"Z/2Z x Z/{2 * self.m}Z"


def _coefficients(a: int, b: int) -> Tuple[int, int]:
    # x(x - a)(x + b) = x^3 + a2 x^2 + a4 x
    return b - a, -a * b


def _rhs(x: int, a: int, b: int) -> int:
    return x * (x - a) * (x + b)


def _integer_roots(expr) -> List[int]:
    roots = Poly(expr, X).ground_roots()
    return sorted(int(r) for r in roots if r.is_integer)


def division_points(a: int, b: int, order: int) -> List[Tuple[int, int]]:
    """Integral points P with y > 0 killed by the given division polynomial (3 or 4)"""
    require(order in (3, 4), f"only orders 3 and 4 are tabulated, got {order}")
    a2, a4 = _coefficients(a, b)
    if order == 3:
        psi = 3 * X**4 + 4 * a2 * X**3 + 6 * a4 * X**2 - a4**2
    else:
        # psi_4 / psi_2 for a1 = a3 = a6 = 0
        psi = 2 * X**6 + 4 * a2 * X**5 + 10 * a4 * X**4 - 10 * a4**2 * X**2 - 4 * a2 * a4**2 * X - 2 * a4**3
    points = []
    for x in _integer_roots(psi):
        f = _rhs(x, a, b)
        if f > 0 and is_square(f):
            points.append((x, integer_nthroot(f, 2)[0]))
    return points


def _halvable(x: int, a: int, b: int) -> bool:
    # P is in 2E(Q) iff x - e is a square for every root e of the cubic
    return all(_square(x - e) for e in (0, a, -b))


def torsion_shape(a: int, b: int) -> TorsionShape:
    require(a != 0 and b != 0 and a + b != 0, f"({a}, {b}) gives a singular curve")
    order3 = division_points(a, b, 3)
    order4 = division_points(a, b, 4)
    ensure(not (order3 and order4), f"({a}, {b}) has points of order 3 and 4 beyond Mazur's list")
    if order3:
        return TorsionShape(3, tuple(order3))
    if order4:
        if any(_halvable(x, a, b) for x, _ in order4):
            return TorsionShape(4, tuple(order4))
        return TorsionShape(2, tuple(order4))
    return TorsionShape(1)


def torsion_oracle(a: int, b: int, n: int) -> TorsionShape:
    """Torsion subgroup of y^2 = x(x - a^2 n)(x + b^2 n)"""
    require(n != 0, "n must be nonzero")
    shape = torsion_shape(a * a * n, b * b * n)
    ensure(shape.m in (1, 2, 3, 4), f"unexpected torsion {shape}")
    return shape
