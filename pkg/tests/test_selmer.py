import pytest
from sympy import divisors

from arith import INFINITY, factor_squarefree
from family import TwistTriple, satisfies_residue_condition
from selmer import (IDENTITY, SelmerElement, build_M1, build_Mn,
                    canonical_form, full_selmer_dim, is_local_square,
                    local_solvable_bruteforce, local_solvable_lemma,
                    monsky_matrix, s2, selmer_bruteforce, selmer_group,
                    selmer_places, square_class, torsion_images)
from f2linalg import kernel_basis
from utils import ContractViolation


def test_selmer_element_arithmetic():
    a = SelmerElement(17, 1, 17)
    b = SelmerElement(1, 17, 17)
    assert a * b == SelmerElement(17, 17, 1)
    assert a * a == IDENTITY
    with pytest.raises(ContractViolation):
        SelmerElement(2, 3, 5)


def test_torsion_images_reduce_to_identity(congruent_triple):
    images = torsion_images(congruent_triple, 1)
    assert images[1] == SelmerElement(2, 2, 1)
    assert {canonical_form(e, congruent_triple, 1) for e in images} == {IDENTITY}


def test_build_M1(congruent_triple, triple_k2):
    assert build_M1(congruent_triple).shape == (0, 0)
    m = build_M1(triple_k2)
    assert m.shape == (5, 4)
    assert kernel_basis(m) == []


def test_monsky_matrix():
    assert monsky_matrix(17).to_rows() == [[0, 0], [0, 0]]
    assert monsky_matrix(1241).to_rows() == [
        [1, 1, 0, 0],
        [1, 1, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 1, 1],
    ]
    assert monsky_matrix(65).to_rows() == [
        [0, 1, 1, 0],
        [1, 0, 0, 1],
        [1, 0, 0, 1],
        [0, 1, 1, 0],
    ]


def test_build_Mn_needs_residue_condition(triple_k2):
    with pytest.raises(ContractViolation):
        build_Mn(triple_k2, 113)


def test_selmer_group(congruent_triple):
    assert set(selmer_group(congruent_triple, 17)) == {
        SelmerElement(1, 1, 1), SelmerElement(17, 1, 17),
        SelmerElement(1, 17, 17), SelmerElement(17, 17, 1),
    }
    assert set(selmer_group(congruent_triple, 1241)) == {
        SelmerElement(1, 1, 1), SelmerElement(1241, 1, 1241),
        SelmerElement(1, 1241, 1241), SelmerElement(1241, 1241, 1),
    }


def test_s2(congruent_triple):
    assert s2(congruent_triple, 17) == 2
    assert s2(congruent_triple, 1241) == 2
    assert s2(congruent_triple, 1) == 0
    assert full_selmer_dim(congruent_triple, 17) == 4


def test_square_classes():
    assert square_class(17, 2) == (0, 0, 0)
    assert square_class(3, 2) == (0, 1, 1)
    assert square_class(10, 5) == (1, 1)
    assert is_local_square(17, 2) and not is_local_square(5, 2)
    assert is_local_square(4, 3) and not is_local_square(2, 3)


def test_local_solvable_lemma(congruent_triple):
    for place in (2, 17, 3, INFINITY):
        assert local_solvable_lemma(IDENTITY, congruent_triple, 17, place)
    assert local_solvable_lemma(SelmerElement(17, 1, 17), congruent_triple, 17, 17)
    assert local_solvable_lemma(SelmerElement(2, 2, 1), congruent_triple, 17, 2)
    assert not local_solvable_lemma(SelmerElement(3, 3, 1), congruent_triple, 17, 3)
    assert not local_solvable_lemma(SelmerElement(2, 1, 2), congruent_triple, 17, 2)


def test_bruteforce_at_infinity(congruent_triple):
    assert local_solvable_bruteforce(SelmerElement(-1, 1, -1), congruent_triple, 17, INFINITY)
    assert not local_solvable_bruteforce(SelmerElement(1, -1, -1), congruent_triple, 17, INFINITY)


@pytest.mark.parametrize("n", [17, 41, 65, 1241])
def test_case_tables_match_local_image(congruent_triple, n):
    n = factor_squarefree(n)
    for d1 in (1, *n.primes, n.value):
        for d2 in (1, *n.primes, n.value):
            lam = SelmerElement.from_pair(d1, d2)
            for place in selmer_places(congruent_triple, n):
                assert (local_solvable_lemma(lam, congruent_triple, n, place)
                        == local_solvable_bruteforce(lam, congruent_triple, n, place)), (lam, place)


def test_bruteforce_at_one(congruent_triple):
    assert selmer_bruteforce(congruent_triple, 1) == [IDENTITY]


@pytest.mark.parametrize("n", [5, 7, 15, 17, 41, 113, 1241])
def test_matrix_matches_bruteforce(congruent_triple, n):
    assert selmer_group(congruent_triple, n) == selmer_bruteforce(congruent_triple, n)


def test_matrix_matches_bruteforce_k2(triple_k2):
    assert selmer_group(triple_k2, 1) == selmer_bruteforce(triple_k2, 1) == [IDENTITY]


@pytest.mark.slow
def test_matrix_matches_bruteforce_to_3000(congruent_triple):
    for value in range(1, 3000, 2):
        try:
            n = factor_squarefree(value)
        except ContractViolation:
            continue
        assert selmer_group(congruent_triple, n) == selmer_bruteforce(congruent_triple, n), value


def _table_regime_inputs(t, limit, count):
    found = 0
    for value in range(1, limit, 2):
        try:
            n = factor_squarefree(value)
        except ContractViolation:
            continue
        if satisfies_residue_condition(n, t):
            yield n
            found += 1
            if found == count:
                return


@pytest.mark.parametrize("abc", [(7, 23, 17), (23, 47, 37)])
def test_case_tables_match_local_image_at_abc_primes(abc):
    t = TwistTriple.create(*abc)
    for n in _table_regime_inputs(t, 2000, 3):
        radical = n.value * t.abc
        places = selmer_places(t, n)
        for d1 in divisors(radical):
            for d2 in divisors(radical):
                lam = SelmerElement.from_pair(d1, d2)
                for place in places:
                    assert (local_solvable_lemma(lam, t, n, place)
                            == local_solvable_bruteforce(lam, t, n, place)), (lam, n.value, place)


def test_unit_classes_at_a_non_split_node(triple_k2):
    # 23 | b and -1 is not a square mod 23
    lam = SelmerElement(7, 1, 7)
    assert local_solvable_bruteforce(lam, triple_k2, 1, 23)
    assert local_solvable_lemma(lam, triple_k2, 1, 23)
    assert not local_solvable_lemma(SelmerElement(1, 23, 23), triple_k2, 1, 23)


@pytest.mark.slow
@pytest.mark.parametrize("abc", [(7, 23, 17), (23, 47, 37)])
def test_case_tables_match_local_image_at_abc_primes_to_2000(abc):
    t = TwistTriple.create(*abc)
    for n in _table_regime_inputs(t, 2000, 10_000):
        radical = n.value * t.abc
        places = selmer_places(t, n)
        for d1 in divisors(radical):
            for d2 in divisors(radical):
                lam = SelmerElement.from_pair(d1, d2)
                for place in places:
                    assert (local_solvable_lemma(lam, t, n, place)
                            == local_solvable_bruteforce(lam, t, n, place)), (lam, n.value, place)
