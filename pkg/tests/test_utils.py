import pytest

from utils import (ContractViolation, SearchExhausted, build_summary,
                   format_factorization, format_number, parse_bit_matrix,
                   parse_int_list, parse_triple, sweep_to_csv, validate_n_input)

import pandas as pd


def test_validate_n_input():
    assert validate_n_input("17")
    assert validate_n_input(" 1241 ")
    assert not validate_n_input("0")
    assert not validate_n_input("-5")
    assert not validate_n_input("abc")
    assert not validate_n_input("")


def test_parsers():
    assert parse_int_list("1, 5,9") == [1, 5, 9]
    assert parse_triple("7,23,17").as_tuple() == (7, 23, 17)
    assert parse_bit_matrix("01;10").to_rows() == [[0, 1], [1, 0]]
    with pytest.raises(ContractViolation):
        parse_triple("1,1")
    with pytest.raises(ContractViolation):
        parse_int_list("1,x")
    with pytest.raises(ContractViolation):
        parse_bit_matrix("012")


def test_formatting():
    assert format_number(1_500_000) == "1.5M"
    assert format_number(2_500) == "2.5K"
    assert format_factorization([17, 73]) == "17·73"
    assert format_factorization([]) == "1"


def test_search_exhausted_carries_partial():
    error = SearchExhausted("gave up", 10, partial={"x": 10})
    assert error.bound == 10 and error.partial == {"x": 10}
    assert "bound 10" in str(error)


def test_sweep_to_csv(tmp_path):
    frame = pd.DataFrame({"n": [17, 41], "sha_predicate": [True, False]})
    path = tmp_path / "sweep.csv"
    text = sweep_to_csv(frame, {"t": "1,1,1", "x": 100}, path)
    lines = text.splitlines()
    assert lines[0] == "# t=1,1,1 x=100"
    assert lines[1] == "n,sha_predicate"
    assert path.read_text(encoding="utf-8") == text


def test_build_summary():
    summary = build_summary({"n": 17, "triple": "1,1,1", "theorem": 2, "h4": 1, "h8": 0, "sha_predicate": True})
    assert summary["sha_predicate"] is True
    assert summary["parameters"] == {"triple": "1,1,1", "n": 17, "theorem": 2}
