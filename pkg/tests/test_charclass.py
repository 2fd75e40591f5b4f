from fractions import Fraction

import pytest
import sympy as sp

from oracles import charclass_to_sympy, chern_character_roots, todd_roots
from rrkit.charclass import (CapExceeded, CharClassExpr, MissingMonomial, apply_pushforward, chern_character,
                             format_table, load_pushforward_table, parse_monomial, rrr_rhs, todd_class,
                             todd_log_coefficients)

c1, c2, c3 = (CharClassExpr.gen("c", i) for i in (1, 2, 3))
t1, t2 = (CharClassExpr.gen("t", i) for i in (1, 2))
half = Fraction(1, 2)


def test_chern_character_examples():
    assert chern_character(2, 2) == CharClassExpr.const(2) + c1 + (c1 * c1 - c2 * 2) * half
    assert chern_character(1, 2) == CharClassExpr.const(1) + c1 + c1 * c1 * half
    assert chern_character(3, 0) == CharClassExpr.const(3)


def test_todd_examples():
    assert todd_class(2, 2) == CharClassExpr.const(1) + t1 * half + (t1 * t1 + t2) * Fraction(1, 12)
    assert todd_class(1, 2) == CharClassExpr.const(1) + t1 * half + t1 * t1 * Fraction(1, 12)
    assert todd_class(3, 0) == CharClassExpr.const(1)


def test_todd_log_series():
    assert todd_log_coefficients(4) == [0, Fraction(1, 2), Fraction(-1, 24), 0, Fraction(1, 2880)]


def test_rrr_examples():
    assert rrr_rhs(1, 2, t_zero=True) == (c1 * c1 - c2 * 2) * half
    assert str(rrr_rhs(1, 1, t_zero=True)) == "1/2*c1^2"
    ch = chern_character(3, 2)
    expected = ch.component(2) + ch.component(1) * t1 * half + t1 * t1 * Fraction(3, 12)
    assert rrr_rhs(1, 3) == expected
    assert rrr_rhs(0, 4) == c1


def test_printing_is_deterministic():
    assert str(chern_character(2, 2)) == "1/2*c1^2 - c2 + c1 + 2"
    assert str(rrr_rhs(1, 2)) == "1/2*c1^2 + 1/2*c1*t1 - c2 + 1/6*t1^2"
    assert str(CharClassExpr()) == "0"


def test_caps():
    with pytest.raises(CapExceeded):
        chern_character(7, 2)
    with pytest.raises(CapExceeded):
        todd_class(1, 7)
    with pytest.raises(CapExceeded):
        rrr_rhs(6, 1)


def test_generators_beyond_rank_never_appear():
    e = chern_character(2, 5)
    assert e.generators() <= {("c", 1), ("c", 2)}


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_chern_character_matches_root_oracle(r):
    assert charclass_to_sympy(chern_character(r, 4)) == chern_character_roots(r, 4)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_todd_matches_root_oracle(d):
    assert charclass_to_sympy(todd_class(d, 4)) == todd_roots(d, 4)


def test_single_root_series():
    x = sp.Symbol("x")
    ser = sp.series(x / (1 - sp.exp(-x)), x, 0, 5).removeO()
    got = charclass_to_sympy(todd_class(1, 4)).subs(sp.Symbol("t1"), x)
    assert sp.expand(got - ser) == 0
    got = charclass_to_sympy(chern_character(1, 4)).subs(sp.Symbol("c1"), x)
    assert sp.expand(got - sp.series(sp.exp(x), x, 0, 5).removeO()) == 0


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_direct_sum_multiplicativity(a, b):
    bound = 3
    # second summand's classes are carried by the t generators
    left = chern_character(a, bound)
    right = chern_character(b, bound).specialize({("c", i): CharClassExpr.gen("t", i) for i in range(1, b + 1)})
    cs = [CharClassExpr.const(1)] + [CharClassExpr.gen("c", i) if i <= a else CharClassExpr() for i in range(1, bound + 1)]
    ts = [CharClassExpr.const(1)] + [CharClassExpr.gen("t", i) if i <= b else CharClassExpr() for i in range(1, bound + 1)]
    whitney = {("c", k): sum((cs[i] * ts[k - i] for i in range(k + 1)), CharClassExpr()) for k in range(1, a + b + 1)
               if k <= bound}
    total = chern_character(a + b, bound).specialize(whitney, bound)
    assert total == left + right


@pytest.mark.parametrize("d,r", [(0, 1), (1, 1), (1, 3), (2, 2), (3, 1)])
def test_rrr_extraction_is_idempotent(d, r):
    e = rrr_rhs(d, r)
    assert e.is_homogeneous() and e.degrees() == [d + 1]
    prod = chern_character(r, d + 1).mul(todd_class(d, d + 1), d + 1)
    assert prod.component(d + 1) == e
    assert e.component(d + 1) == e


def test_pushforward_examples():
    table = load_pushforward_table("c1^2 2\nc2 -1\n")
    assert apply_pushforward(c1 * c1, table) == 2
    zero = {m: 0 for m in table}
    assert apply_pushforward(rrr_rhs(1, 2, t_zero=True), zero) == 0
    with pytest.raises(MissingMonomial, match="c2"):
        apply_pushforward(c2 + c1 * c1, load_pushforward_table("c1^2 1\n"))


def test_pushforward_of_ch2():
    table = load_pushforward_table("# fiber integrals\nc1^2 2\nc2 -1\n")
    assert apply_pushforward(rrr_rhs(1, 2, t_zero=True), table) == 2


def test_pushforward_table_format():
    table = load_pushforward_table("c1*t1 1/3\nt1^2 4\n")
    assert load_pushforward_table(format_table(table)) == table
    assert parse_monomial("c1*t1") in table
    with pytest.raises(ValueError, match="line 1"):
        load_pushforward_table("c1^2\n")
    with pytest.raises(ValueError):
        apply_pushforward(c1 + c1 * c1, table)
