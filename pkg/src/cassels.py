"""Closed-form Cassels pairing values and the Sha predicate for the twist family.

When h4(n) = 1 the pure 2-Selmer group has dimension two, so the pairing on
it is one value: -1 means non-degenerate, and then rank E^(n)(Q) = 0 with
Sha[2^inf] = (Z/2)^2.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from math import gcd
from typing import Dict, Optional, Tuple

from arith import as_factored, jacobi, odd_part
from f2linalg import kernel_basis, rank, solve, span
from family import TwistTriple, admissible_n, base_selmer_dim
from genus import (NormSolution, distinguished_divisor, h4, h8_witness,
                   solve_norm_equation, symbol_column, symbol_diagonal,
                   symbol_matrix)
from selmer import SelmerElement, s2
from utils import ensure, require

logger = logging.getLogger(__name__)

BRANCH_T1_PLUS = "thm1-d≡1"
BRANCH_T1_MINUS = "thm1-d≡-1"
BRANCH_T2_DEFICIENT = "thm2-rank k-2"
BRANCH_T2_FULL = "thm2-rank k-1"


@dataclass(frozen=True)
class PairingOutcome:
    value: int
    branch: str
    witness: NormSolution

    @property
    def nondegenerate(self) -> bool:
        return self.value == -1


def _divisor(bits, primes) -> int:
    d = 1
    for bit, p in zip(bits, primes):
        if int(bit):
            d *= p
    return d


def _require_theorem_input(t: TwistTriple, n, theorem: int):
    n = as_factored(n)
    require(admissible_n(n, t, theorem), f"n = {n.value} is not admissible for theorem {theorem} with t = ({t})")
    require(h4(n) == 1, f"h4({n.value}) != 1")
    return n


def generators_t1(t: TwistTriple, n) -> Tuple[SelmerElement, SelmerElement, int]:
    n = _require_theorem_input(t, n, 1)
    basis = kernel_basis(symbol_matrix(n) + symbol_diagonal(-1, n))
    ensure(len(basis) == 1, f"kernel of A + D_-1 for {n.value} has dimension {len(basis)}")
    d = _divisor(basis[0], n.primes)
    return SelmerElement(2, 2, 1), SelmerElement(d, 1, d), d


def pairing_t1(t: TwistTriple, n, rng: Optional[random.Random] = None) -> PairingOutcome:
    _, _, d = generators_t1(t, n)
    nv = as_factored(n).value
    witness = solve_norm_equation(1, nv, 1, rng=rng)
    gamma = witness.gamma
    ensure(gamma % 2 == 1, f"gamma = {gamma} is even")
    if d % 8 == 1:
        return PairingOutcome(jacobi(gamma, d), BRANCH_T1_PLUS, witness)
    ensure(d % 8 == 7, f"d = {d} is neither 1 nor -1 mod 8")
    return PairingOutcome(jacobi(gamma, d) * jacobi(-1, gamma), BRANCH_T1_MINUS, witness)


def generators_t2(t: TwistTriple, n) -> Tuple[SelmerElement, SelmerElement, int, str]:
    n = _require_theorem_input(t, n, 2)
    A = symbol_matrix(n)
    k = n.k
    minus_one = SelmerElement(-1, 1, -1)
    if rank(A) == k - 2:
        x0 = tuple([1] * k)
        z = next(v for v in span(kernel_basis(A), k) if v[0] == 1 and v != x0)
        d = _divisor(z, n.primes)
        ensure(d % 8 == 5, f"d = {d} is not 5 mod 8")
        branch = BRANCH_T2_DEFICIENT
        first = SelmerElement(d, d, 1)
    else:
        z = solve(A, symbol_column(2, n))
        ensure(z is not None, "the column of [2/p] is not in the image of A")
        d = _divisor(z, n.primes)
        branch = BRANCH_T2_FULL
        first = SelmerElement(2 * d, 2 * d, 1)
    logger.debug("n = %d: %s with d = %d", n.value, branch, d)
    d0 = odd_part(distinguished_divisor(n))
    ensure(d in (d0, n.value // d0), f"kernel divisor {d} does not match d0 with odd part {d0}")
    return first, minus_one, d, branch


def _make_alpha_even(solution: NormSolution) -> NormSolution:
    d, dp = solution.d, solution.dprime
    alpha, beta, gamma = solution.alpha, solution.beta, solution.gamma
    if alpha % 2 == 0:
        return solution
    alpha, beta, gamma = (abs(dp * alpha - 2 * dp * beta - d * alpha),
                          abs(d * beta - 2 * d * alpha - dp * beta),
                          (d + dp) * gamma)
    g = gcd(gcd(alpha, beta), gamma)
    moved = NormSolution(d, dp, 0, alpha // g, beta // g, gamma // g)
    ensure(moved.check() and moved.alpha % 2 == 0, f"even-alpha transform failed on {solution}")
    return moved


def pairing_t2(t: TwistTriple, n, rng: Optional[random.Random] = None) -> PairingOutcome:
    _, _, d, branch = generators_t2(t, n)
    dprime = as_factored(n).value // d
    if branch == BRANCH_T2_DEFICIENT:
        witness = _make_alpha_even(solve_norm_equation(d, dprime, 0, rng=rng))
        ensure(witness.gamma % 2 == 1, f"gamma = {witness.gamma} is even")
        return PairingOutcome(-jacobi(-1, witness.gamma), branch, witness)
    witness = solve_norm_equation(d, dprime, 1, rng=rng)
    ensure(witness.gamma % 2 == 1, f"gamma = {witness.gamma} is even")
    return PairingOutcome(jacobi(-1, witness.gamma) * jacobi(2, d), branch, witness)


def pairing(t: TwistTriple, n, theorem: int, rng: Optional[random.Random] = None) -> PairingOutcome:
    require(theorem in (1, 2), f"theorem must be 1 or 2, got {theorem}")
    return pairing_t1(t, n, rng) if theorem == 1 else pairing_t2(t, n, rng)


def sha_predicate(t: TwistTriple, n, theorem: int) -> bool:
    """rank 0 and Sha[2^inf] = (Z/2)^2 by the genus criterion"""
    return criterion_trace(t, n, theorem)["sha_predicate"]


def criterion_trace(t: TwistTriple, n, theorem: int, rng: Optional[random.Random] = None,
                    with_pairing: bool = False) -> Dict:
    """All quantities behind the Sha predicate for one n"""
    require(theorem in (1, 2), f"theorem must be 1 or 2, got {theorem}")
    require(base_selmer_dim(t) == 2, f"the base curve of ({t}) has 2-Selmer dimension != 2")
    n = as_factored(n)
    require(admissible_n(n, t, theorem), f"n = {n.value} is not admissible for theorem {theorem} with t = ({t})")
    trace = {
        "n": n.value,
        "k": n.k,
        "theorem": theorem,
        "s2": s2(t, n),
        "h4": h4(n),
        "h8": None,
        "d": None,
        "criterion": None,
        "pairing": None,
        "branch": None,
        "witness": None,
        "sha_predicate": False,
    }
    if trace["h4"] != 1:
        trace["criterion"] = "h4 != 1"
        return trace
    eight, witness = h8_witness(n, rng)
    trace["h8"] = eight
    if theorem == 1:
        trace["sha_predicate"] = eight == 0
        trace["criterion"] = f"h8 = {eight}, needs 0"
    else:
        d = odd_part(distinguished_divisor(n))
        ensure(d % 4 == 1, f"odd part {d} of d0 is not 1 mod 4")
        expected = ((d - 1) // 4) % 2
        trace["d"] = d
        trace["sha_predicate"] = eight == expected
        trace["criterion"] = f"h8 = {eight}, (d-1)/4 = {expected} mod 2"
    if with_pairing:
        outcome = pairing(t, n, theorem, rng)
        trace["pairing"] = outcome.value
        trace["branch"] = outcome.branch
        trace["witness"] = (outcome.witness.alpha, outcome.witness.beta, outcome.witness.gamma)
    return trace
