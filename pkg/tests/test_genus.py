import random

import pytest

import genus
from arith import factor_squarefree
from genus import (NormSolution, class_group_forms, classgroup_oracle,
                   compose_forms, distinguished_divisor, genus_report, h4,
                   h8_indicator, h8_witness, jung_yue_h8,
                   norm_equation_solvable, redei_matrix, reduce_form,
                   solve_norm_equation)
from utils import ContractViolation


def _genus_inputs(limit):
    for n in range(5, limit, 4):
        try:
            yield factor_squarefree(n)
        except ContractViolation:
            continue


def test_redei_matrix():
    assert redei_matrix(17).to_rows() == [[0, 0]]
    assert redei_matrix(5).to_rows() == [[0, 1]]
    assert redei_matrix(1241).to_rows() == [[1, 1, 0], [1, 1, 0]]


def test_redei_matrix_needs_one_mod_four():
    with pytest.raises(ContractViolation, match="classgroup_oracle"):
        redei_matrix(7)
    assert classgroup_oracle(7) == (0, 0, 0)


def test_h4():
    assert h4(5) == 0
    assert h4(17) == 1
    assert h4(1241) == 1


def test_distinguished_divisor():
    assert distinguished_divisor(17) == 2
    assert distinguished_divisor(1241) == 2
    assert distinguished_divisor(145) == 5
    with pytest.raises(ContractViolation):
        distinguished_divisor(5)


def test_solve_norm_equation():
    s = solve_norm_equation(1, 17, 1)
    assert (s.alpha, s.beta, s.gamma) == (1, 1, 3)
    s = solve_norm_equation(1, 1, 1)
    assert (s.alpha, s.beta, s.gamma) == (1, 1, 1)
    s = solve_norm_equation(5, 29, 0)
    assert (s.alpha, s.beta, s.gamma) == (2, 1, 7)
    assert solve_norm_equation(2, 17, 0).check()


def test_norm_equation_without_solution():
    assert not norm_equation_solvable(3, 5, 0)
    with pytest.raises(ContractViolation):
        solve_norm_equation(3, 5, 0)


def test_randomised_norm_search_returns_solutions():
    for seed in range(5):
        s = solve_norm_equation(1, 1241, 1, rng=random.Random(seed))
        assert s.check() and s.alpha > 0 and s.beta > 0


def test_h8():
    assert h8_indicator(17) == 0
    assert h8_indicator(41) == 1
    assert h8_indicator(145) == 0
    assert h8_indicator(1241) == classgroup_oracle(1241)[2]
    with pytest.raises(ContractViolation):
        h8_indicator(5)


def test_h8_witness_solves_the_norm_equation():
    eight, witness = h8_witness(17)
    assert eight == 0
    assert witness.check() and witness.d * witness.dprime == 17


def test_h8_witness_scans_past_the_sampled_solutions(monkeypatch):
    coprime = solve_norm_equation(1, 17, 1)
    sharing = [NormSolution(1, 17, 1, 1, 1, 17 * g) for g in range(1, 6)]
    monkeypatch.setattr(genus, "iter_norm_solutions", lambda *args: iter(sharing + [coprime]))
    eight, witness = h8_witness(17, rng=random.Random(0))
    assert witness == coprime
    assert eight == 0


def test_jung_yue():
    assert jung_yue_h8(17) == 0
    assert jung_yue_h8(41) == 1
    assert jung_yue_h8(1241) == classgroup_oracle(1241)[2]
    with pytest.raises(ContractViolation):
        jung_yue_h8(21)


def test_class_group_forms():
    assert class_group_forms(5) == [(1, 0, 5), (2, 2, 3)]
    assert len(class_group_forms(17)) == 4
    assert reduce_form(3, 10, 9) == reduce_form(*reduce_form(3, 10, 9))


def test_compose_forms():
    identity, other = class_group_forms(5)
    assert compose_forms(other, identity, -20) == other
    assert compose_forms(other, other, -20) == identity
    forms = class_group_forms(41)
    for f in forms:
        assert compose_forms(f, (1, 0, 41), -164) == f


def test_classgroup_oracle():
    assert classgroup_oracle(5) == (1, 0, 0)
    assert classgroup_oracle(17) == (1, 1, 0)
    assert classgroup_oracle(1) == (0, 0, 0)
    assert classgroup_oracle(41) == (1, 1, 1)


def test_genus_report():
    report = genus_report(17, oracle=True)
    assert report.to_dict() == {"n": 17, "h2": 1, "h4": 1, "h8": 0, "d0": 2, "oracle_agrees": True}
    assert genus_report(5).to_dict()["oracle_agrees"] == "skipped"


def test_genus_theory_matches_class_group():
    for n in _genus_inputs(3000):
        report = genus_report(n, oracle=True)
        assert report.oracle_agrees, n.value


def test_quartic_criterion_matches_norm_equation():
    for n in _genus_inputs(5000):
        if n.value % 8 != 1 or any(p % 4 != 1 for p in n.primes) or h4(n) != 1:
            continue
        assert jung_yue_h8(n) == h8_indicator(n), n.value


@pytest.mark.slow
def test_genus_theory_matches_class_group_to_1e5():
    for n in _genus_inputs(100_000):
        report = genus_report(n, oracle=True, rng=random.Random(n.value))
        assert report.oracle_agrees, n.value
