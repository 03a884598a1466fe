"""Predicted densities, symmetric-matrix counts and empirical sweeps.

Sweeps read square-free n with exactly k prime factors off a numpy sieve, keep
the admissible ones and evaluate the Sha predicate on each, fanning blocks of
n out to worker processes and merging them back in ascending order.
"""
from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from arith import FactoredSquarefree, additive_jacobi, jacobi, rational_quartic
from cassels import criterion_trace
from config import config
from f2linalg import BitMatrix, kernel_basis, rank
from family import TwistTriple, admissible_n
from genus import symbol_matrix
from utils import SearchExhausted, require

logger = logging.getLogger(__name__)

ALPHA_CLASSES = (1, 5, 9, 13)
SWEEP_COLUMNS = ['n', 'k', 'admissible', 's2', 'h4', 'h8', 'd', 'pairing', 'sha_predicate', 'branch']


# ----------------------------------------------------------------------------
# exact constants

def u_k(k: int) -> Fraction:
    """prod_{i <= k/2} (1 - 2^(1-2i)); u_0 = u_1 = 1"""
    require(k >= 0, f"k must be non-negative, got {k}")
    value = Fraction(1)
    for i in range(1, k // 2 + 1):
        value *= 1 - Fraction(1, 2 ** (2 * i - 1))
    return value


def count_symmetric_rank(k: int, r: int) -> int:
    """Number of k x k symmetric matrices over F_2 of rank r"""
    require(k >= 0 and 0 <= r, f"bad (k, r) = ({k}, {r})")
    require(r <= k, f"rank {r} exceeds size {k}")
    value = u_k(r + 1) * 2 ** comb(r + 1, 2)
    for l in range(k - r):
        value *= Fraction(2**k - 2**l, 2 ** (k - r) - 2**l)
    require(value.denominator == 1, f"non-integral count {value}")
    return int(value)


def _symmetric_matrices(k: int):
    cells = [(i, j) for i in range(k) for j in range(i, k)]
    for bits in itertools.product((0, 1), repeat=len(cells)):
        m = np.zeros((k, k), dtype=np.uint8)
        for (i, j), bit in zip(cells, bits):
            m[i, j] = m[j, i] = bit
        yield BitMatrix(m)


@lru_cache(maxsize=None)
def _rank_histogram(k: int, zero_row_sums: bool) -> Tuple[int, ...]:
    counts = [0] * (k + 1)
    ones = np.ones(k, dtype=np.uint8)
    for m in _symmetric_matrices(k):
        if zero_row_sums and (m @ ones).any():
            continue
        counts[rank(m)] += 1
    return tuple(counts)


def count_symmetric_rank_bruteforce(k: int, r: int) -> int:
    require(0 <= k <= 5, f"exhaustive enumeration needs k <= 5, got {k}")
    require(0 <= r <= k, f"rank {r} out of range for size {k}")
    return _rank_histogram(k, False)[r]


def count_rank_deficient(k: int) -> int:
    """Symmetric k x k matrices with zero row sums and rank k - 2"""
    require(k >= 2, f"k must be at least 2, got {k}")
    return int(u_k(k - 1) * 2 ** comb(k - 1, 2) * (2 ** (k - 1) - 1))


def count_rank_deficient_bruteforce(k: int) -> int:
    require(2 <= k <= 5, f"exhaustive enumeration needs 2 <= k <= 5, got {k}")
    return _rank_histogram(k, True)[k - 2]


def predicted_density(k: int, kprime: int) -> Fraction:
    require(k >= 1 and kprime >= 0, f"bad (k, k') = ({k}, {kprime})")
    scale = Fraction(1, 2 ** (k * kprime + k + 2))
    return scale * (u_k(k) + (Fraction(1, 2) - Fraction(1, 2**k)) * u_k(k - 1))


def predicted_split(k: int, kprime: int) -> Dict[str, Fraction]:
    """The rank k-1 and rank k-2 summands of predicted_density"""
    require(k >= 1 and kprime >= 0, f"bad (k, k') = ({k}, {kprime})")
    return {
        'rank k-1': Fraction(1, 2 ** (k + k * kprime + 2)) * u_k(k),
        'rank k-2': Fraction(1, 2 ** (k + k * kprime + 3)) * (1 - Fraction(2, 2**k)) * u_k(k - 1),
    }


# ----------------------------------------------------------------------------
# sieve

def smallest_prime_factor_sieve(limit: int) -> np.ndarray:
    """spf[m] for 0 <= m <= limit; spf[0] = spf[1] = 0"""
    require(1 <= limit <= config.SWEEP_MAX_X, f"sieve limit {limit} outside [1, {config.SWEEP_MAX_X}]")
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


def factor_from_sieve(m: int, spf: np.ndarray) -> Optional[Tuple[int, ...]]:
    """Primes of m in ascending order, or None when m is not square-free"""
    primes: List[int] = []
    while m > 1:
        p = int(spf[m])
        m //= p
        if m % p == 0:
            return None
        primes.append(p)
    return tuple(primes)


def squarefree_with_k_factors(x: int, k: int, spf: Optional[np.ndarray] = None) -> List[FactoredSquarefree]:
    """C_k(x), factored, ascending"""
    require(k >= 1, f"k must be positive, got {k}")
    spf = smallest_prime_factor_sieve(x) if spf is None else spf
    require(len(spf) > x, "sieve shorter than x")
    omega = np.zeros(x + 1, dtype=np.int16)
    squarefree = np.ones(x + 1, dtype=bool)
    for p in np.flatnonzero(spf[2 : x + 1] == np.arange(2, x + 1)) + 2:
        p = int(p)
        omega[p::p] += 1
        if p * p <= x:
            squarefree[p * p::p * p] = False
    members = np.flatnonzero(squarefree & (omega == k))
    return [FactoredSquarefree(int(m), factor_from_sieve(int(m), spf)) for m in members]


# ----------------------------------------------------------------------------
# sweeps

@dataclass
class SweepResult:
    record: Dict
    frame: pd.DataFrame = field(repr=False)


def _branch_of(n: FactoredSquarefree) -> str:
    return 'rank k-1' if rank(symbol_matrix(n)) == n.k - 1 else 'rank k-2'


def _evaluate_block(t: TwistTriple, block: Sequence[FactoredSquarefree], theorem: int, seed: int,
                    with_pairing: bool) -> List[Dict]:
    rows = []
    for n in block:
        rng = random.Random(f"{seed}:{n.value}")
        trace = criterion_trace(t, n, theorem, rng=rng, with_pairing=with_pairing)
        row = {column: trace.get(column) for column in SWEEP_COLUMNS}
        row['admissible'] = True
        row['rank_branch'] = _branch_of(n)
        rows.append(row)
    return rows


def _blocks(items: List, size: int) -> List[List]:
    return [items[i:i + size] for i in range(0, len(items), size)]


def sweep(t: TwistTriple, x: int, k: int, theorem: int, jobs: int = 1, seed: Optional[int] = None,
          with_pairing: bool = True, verbose: bool = False) -> SweepResult:
    """Counts of C_k(x), the admissible set Q_k(x) and P_k(x) next to the prediction"""
    require(theorem in (1, 2), f"theorem must be 1 or 2, got {theorem}")
    require(1 <= x <= config.SWEEP_MAX_X, f"x = {x} outside [1, {config.SWEEP_MAX_X}]")
    require(k >= 1, f"k must be positive, got {k}")
    require(jobs >= 1, f"jobs must be positive, got {jobs}")
    seed = config.DEFAULT_SEED if seed is None else seed
    if x > config.SIEVE_MAX:
        partial = sweep(t, config.SIEVE_MAX, k, theorem, jobs, seed, with_pairing, verbose)
        raise SearchExhausted(f"sweep to x = {x} exceeds the sieve bound {config.SIEVE_MAX}",
                              bound=config.SIEVE_MAX, partial=partial)

    if verbose:
        print(f"🔍 Sieving square-free n <= {x} with {k} prime factors...")
    c_k = squarefree_with_k_factors(x, k)
    admissible = [n for n in c_k if n.value % 8 == 1 and gcd(n.value, 2 * t.abc) == 1
                  and admissible_n(n, t, theorem)]
    if verbose:
        print(f"🔍 {len(c_k)} in C_k, {len(admissible)} admissible; evaluating on {jobs} worker(s)...")

    blocks = _blocks(admissible, config.SWEEP_BLOCK)
    rows: List[Dict] = []
    if jobs == 1 or len(blocks) <= 1:
        for block in blocks:
            rows.extend(_evaluate_block(t, block, theorem, seed, with_pairing))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(_evaluate_block, t, block, theorem, seed, with_pairing)
                       for block in blocks]
            # submission order is ascending n
            for future in futures:
                rows.extend(future.result())

    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS + ['rank_branch'])
    hits = frame[frame["sha_predicate"].astype(bool)] if len(frame) else frame
    predicted = predicted_density(k, t.kprime)
    split = predicted_split(k, t.kprime)
    c_count, p_count = len(c_k), len(hits)
    record = {
        't': str(t),
        'x': x,
        'k': k,
        'theorem': theorem,
        'seed': seed,
        'C_count': c_count,
        'Q_count': len(admissible),
        'P_count': p_count,
        'P_rank_full': int((hits['rank_branch'] == 'rank k-1').sum()) if p_count else 0,
        'P_rank_deficient': int((hits['rank_branch'] == 'rank k-2').sum()) if p_count else 0,
        'ratio': p_count / c_count if c_count else 0.0,
        'predicted': float(predicted),
        'predicted_exact': str(predicted),
        'predicted_rank_full': float(split['rank k-1']),
        'predicted_rank_deficient': float(split['rank k-2']),
    }
    logger.debug("sweep record %s", record)
    if verbose:
        print(f"✅ P/C = {record['ratio']:.5f} against predicted {record['predicted']:.5f}")
    return SweepResult(record, frame)


# ----------------------------------------------------------------------------
# the sets C_k(x, alpha, B)

def _check_alpha_and_matrix(alpha: Sequence[int], B: BitMatrix) -> Tuple[int, ...]:
    k = len(alpha)
    require(k >= 2, f"alpha needs at least two entries, got {k}")
    require(all(a in ALPHA_CLASSES for a in alpha), f"alpha entries must lie in {ALPHA_CLASSES}, got {list(alpha)}")
    require(int(np.prod([a % 8 for a in alpha])) % 8 == 1, f"prod alpha = {list(alpha)} is not 1 mod 8")
    require(B.shape == (k, k), f"B has shape {B.shape}, expected ({k}, {k})")
    require(B.is_symmetric(), "B is not symmetric")
    require(rank(B) == k - 2, f"B has rank {rank(B)}, expected {k - 2}")
    require(not (B @ np.ones(k, dtype=np.uint8)).any(), "B z0 != 0")
    x0 = tuple([1] * k)
    for v in itertools.product((0, 1), repeat=k):
        if v[0] == 1 and v != x0 and not (B @ np.array(v, dtype=np.uint8)).any():
            return v
    raise AssertionError(f"no kernel vector of B besides z0: {kernel_basis(B)}")


def _in_ck_alpha_b(primes: Tuple[int, ...], alpha: Sequence[int], B: BitMatrix, z: Tuple[int, ...],
                   qprimes: Sequence[int]) -> bool:
    k = len(primes)
    if any(p % 16 != a for p, a in zip(primes, alpha)):
        return False
    for l in range(k):
        for j in range(l + 1, k):
            if additive_jacobi(primes[j], primes[l]) != B[l, j]:
                return False
    if any(jacobi(p, q) != 1 for p in primes for q in qprimes):
        return False
    d = int(np.prod([p for p, bit in zip(primes, z) if bit]))
    dprime = int(np.prod([p for p, bit in zip(primes, z) if not bit]))
    return rational_quartic(dprime, d) * rational_quartic(d, dprime) == -1


def enumerate_Ck_alpha_B(t: TwistTriple, x: int, alpha: Sequence[int], B: BitMatrix) -> Dict:
    """#C_k(x, alpha, B) by direct scan, with #C_k(x) and both candidate constants"""
    alpha = tuple(int(a) for a in alpha)
    z = _check_alpha_and_matrix(alpha, B)
    k = len(alpha)
    require(2 <= x <= config.SIEVE_MAX, f"x = {x} outside [2, {config.SIEVE_MAX}]")
    c_k = squarefree_with_k_factors(x, k)
    members = [n.value for n in c_k if _in_ck_alpha_b(n.primes, alpha, B, z, t.qprimes)]
    c_count = len(c_k)
    exponent_statement = 3 * k + t.kprime + 1 + comb(k, 2)
    exponent_proof = k * t.kprime + 3 * k + 1 + comb(k, 2)
    return {
        't': str(t),
        'x': x,
        'k': k,
        'alpha': list(alpha),
        'z': list(z),
        'count': len(members),
        'C_count': c_count,
        'ratio': len(members) / c_count if c_count else 0.0,
        'predicted_statement': 2.0 ** -exponent_statement,
        'predicted_proof': 2.0 ** -exponent_proof,
        'members': members,
    }
