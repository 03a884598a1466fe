import random

import pytest

from arith import factor_squarefree
from cassels import (BRANCH_T1_PLUS, BRANCH_T2_DEFICIENT, BRANCH_T2_FULL,
                     criterion_trace, generators_t1, generators_t2, pairing,
                     pairing_t1, pairing_t2, sha_predicate)
from f2linalg import kernel_basis, rank, solve, span
from family import admissible_n
from genus import h4, symbol_column, symbol_diagonal, symbol_matrix
from selmer import SelmerElement, selmer_group
from utils import ContractViolation


def _admissible(t, theorem, limit):
    for value in range(17, limit, 8):
        try:
            n = factor_squarefree(value)
        except ContractViolation:
            continue
        if admissible_n(n, t, theorem) and h4(n) == 1:
            yield n


def test_generators_t1(congruent_triple):
    first, second, d = generators_t1(congruent_triple, 17)
    assert (first, second, d) == (SelmerElement(2, 2, 1), SelmerElement(17, 1, 17), 17)


def test_generators_need_h4_one(congruent_triple):
    with pytest.raises(ContractViolation):
        generators_t1(congruent_triple, 5)


def _divisor(bits, n):
    d = 1
    for bit, p in zip(bits, n.primes):
        if bit:
            d *= p
    return d


def test_kernel_of_A_plus_D_minus_one(congruent_triple):
    for n in _admissible(congruent_triple, 1, 20_000):
        shifted = symbol_matrix(n) + symbol_diagonal(-1, n)
        assert rank(shifted) == n.k - 1, n.value
        d = _divisor(kernel_basis(shifted)[0], n)
        assert d % 8 in (1, 7), n.value
        assert generators_t1(congruent_triple, n)[2] == d


def test_rank_split_of_A(congruent_triple):
    for n in _admissible(congruent_triple, 2, 20_000):
        A = symbol_matrix(n)
        k = n.k
        assert rank(A) in (k - 2, k - 1), n.value
        if rank(A) == k - 2:
            x0 = tuple([1] * k)
            for v in span(kernel_basis(A), k):
                if any(v) and v != x0:
                    assert _divisor(v, n) % 8 == 5, (n.value, v)
            assert generators_t2(congruent_triple, n)[3] == BRANCH_T2_DEFICIENT
        else:
            assert solve(A, symbol_column(2, n)) is not None, n.value
            assert generators_t2(congruent_triple, n)[3] == BRANCH_T2_FULL


def test_pairing_t1(congruent_triple):
    outcome = pairing_t1(congruent_triple, 17)
    assert outcome.branch == BRANCH_T1_PLUS
    assert (outcome.witness.alpha, outcome.witness.beta, outcome.witness.gamma) == (1, 1, 3)
    assert outcome.value == -1 and outcome.nondegenerate


def test_generators_t2(congruent_triple):
    first, second, d, branch = generators_t2(congruent_triple, 17)
    assert (first, second, d, branch) == (SelmerElement(2, 2, 1), SelmerElement(-1, 1, -1), 1, BRANCH_T2_FULL)
    _, _, d, branch = generators_t2(congruent_triple, 1241)
    assert branch == BRANCH_T2_FULL and d in (1, 1241)


def test_rank_deficient_branch(congruent_triple):
    first, _, d, branch = generators_t2(congruent_triple, 145)
    assert branch == BRANCH_T2_DEFICIENT
    assert d == 5 and d % 8 == 5
    assert first == SelmerElement(5, 5, 1)
    outcome = pairing_t2(congruent_triple, 145)
    assert (outcome.witness.alpha, outcome.witness.beta, outcome.witness.gamma) == (2, 1, 7)
    assert outcome.value == 1


def test_pairing_t2(congruent_triple):
    outcome = pairing_t2(congruent_triple, 17)
    assert (outcome.witness.alpha, outcome.witness.beta, outcome.witness.gamma) == (1, 1, 3)
    assert outcome.value == -1


def test_pairing_independent_of_solution(congruent_triple):
    for n in (17, 41, 145, 1241):
        for theorem in (1, 2):
            if not admissible_n(n, congruent_triple, theorem):
                continue
            values = {pairing(congruent_triple, n, theorem, random.Random(seed)).value for seed in range(6)}
            assert len(values) == 1, (n, theorem)


def test_sha_predicate(congruent_triple):
    assert sha_predicate(congruent_triple, 17, 2)
    assert sha_predicate(congruent_triple, 17, 1)
    assert not sha_predicate(congruent_triple, 41, 2)
    assert not sha_predicate(congruent_triple, 145, 2)


def test_criterion_trace(congruent_triple):
    trace = criterion_trace(congruent_triple, 17, 2, with_pairing=True)
    assert trace["s2"] == 2 and trace["h4"] == 1 and trace["h8"] == 0
    assert trace["d"] == 1
    assert trace["pairing"] == -1
    assert trace["sha_predicate"] is True


def test_criterion_trace_rejects_inadmissible(congruent_triple, triple_k2):
    with pytest.raises(ContractViolation):
        criterion_trace(congruent_triple, 5, 2)
    with pytest.raises(ContractViolation):
        criterion_trace(triple_k2, 113, 1)


def test_selmer_rank_two_iff_h4_one(congruent_triple):
    for value in range(17, 3000, 8):
        try:
            n = factor_squarefree(value)
        except ContractViolation:
            continue
        if admissible_n(n, congruent_triple, 2):
            assert (len(selmer_group(congruent_triple, n)) == 4) == (h4(n) == 1), value


@pytest.mark.parametrize("theorem", [1, 2])
def test_pairing_matches_genus_criterion(congruent_triple, theorem):
    for n in _admissible(congruent_triple, theorem, 4000):
        trace = criterion_trace(congruent_triple, n, theorem, with_pairing=True)
        assert (trace["pairing"] == -1) == trace["sha_predicate"], n.value


@pytest.mark.slow
@pytest.mark.parametrize("theorem", [1, 2])
def test_pairing_matches_genus_criterion_to_1e5(congruent_triple, triple_k2, theorem):
    for t in (congruent_triple, triple_k2):
        for n in _admissible(t, theorem, 100_000):
            rng = random.Random(n.value)
            trace = criterion_trace(t, n, theorem, rng=rng, with_pairing=True)
            assert (trace["pairing"] == -1) == trace["sha_predicate"], (str(t), n.value)
