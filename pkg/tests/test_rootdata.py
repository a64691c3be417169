import pytest

from chevexp.rootdata import (
    bad_primes,
    build_root_system,
    coxeter_number,
    facts,
    height_distribution,
    is_good_prime,
    is_separably_good,
    parse_type,
    weyl_exponents,
)
from oracles import closure_heights, table_row


MATRIX = (
    [("A", n) for n in range(1, 9)]
    + [("B", n) for n in range(2, 7)]
    + [("C", n) for n in range(2, 7)]
    + [("D", n) for n in range(3, 8)]
    + [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
)


@pytest.mark.parametrize("label,n", MATRIX)
def test_against_table(label, n):
    rs = build_root_system(label, n)
    exps, bad, h = table_row(label, n)
    assert list(weyl_exponents(rs)) == exps
    assert set(bad_primes(rs)) == bad
    assert coxeter_number(rs) == h
    assert sum(exps) == len(rs.positive_roots)
    assert max(exps) == h - 1
    f = facts(rs)
    assert list(f.exponents) == exps and f.coxeter_number == h


@pytest.mark.parametrize("label,n", MATRIX)
def test_roots_match_reflection_closure(label, n):
    rs = build_root_system(label, n)
    assert sorted(sum(a) for a in rs.positive_roots) == closure_heights(label, n)
    assert coxeter_number(rs) == rs.max_height() + 1


def test_small_examples():
    a2 = build_root_system("A", 2)
    assert sorted(sum(a) for a in a2.positive_roots) == [1, 1, 2]
    g2 = build_root_system("G", 2)
    assert len(g2.positive_roots) == 6 and g2.max_height() == 5
    assert len(build_root_system("E", 8).positive_roots) == 120
    assert list(weyl_exponents(parse_type("D4"))) == [1, 3, 3, 5]


def test_root_order_is_height_compatible():
    for label, n in [("E", 8), ("F", 4), ("C", 4)]:
        rs = build_root_system(label, n)
        keys = [(sum(a), a) for a in rs.positive_roots]
        assert keys == sorted(keys)
        assert all(min(a) >= 0 for a in rs.positive_roots)


def test_prime_predicates():
    a3 = parse_type("A3")
    assert is_good_prime(a3, 2) and not is_separably_good(a3, 2)
    g2 = parse_type("G2")
    assert is_good_prime(g2, 5) and is_separably_good(g2, 5)
    assert not is_good_prime(parse_type("E8"), 5)
    assert coxeter_number(parse_type("A1")) == 2 and not bad_primes(parse_type("A1"))
    b3 = parse_type("B3")
    assert coxeter_number(b3) == 6 and set(bad_primes(b3)) == {2}


@pytest.mark.parametrize("label,n", [("D", 2), ("E", 5), ("F", 3), ("G", 3), ("Q", 2), ("A", 0)])
def test_invalid_types(label, n):
    with pytest.raises(ValueError):
        build_root_system(label, n)


def test_height_distribution_counts():
    assert height_distribution(parse_type("G2")) == [2, 1, 1, 1, 1]
