from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from holonomia.expr import series_truncated
from holonomia.holonomic import de_from_expr, de_to_re, parse_de, parse_re
from holonomia.series_solver import (MissingInitialValue, OpCounter, iterate_re,
                                     mandatory_indices, series_solution, taylor)

CORPUS = ["sin(x)*exp(x)", "airy_ai(x)", "airy_bi(x)", "arcsin(x)^2", "bessel_j0(x)",
          "1/(1-x-x^2)", "exp(x)/(1-x)", "arctan(x)", "log(1+x)", "sqrt(1+x)*exp(-x)",
          "(1+x)^a", "x^3*cos(2*x)"]


@pytest.mark.parametrize("text", CORPUS)
def test_taylor_matches_direct_series(text):
    assert taylor(text, 30) == series_truncated(text, 30)


def test_exp_initial_values():
    s = series_solution(parse_de("Df - f = 0"), [1], 10)
    assert s.as_list() == [Fraction(1, factorial(m)) for m in range(11)]


def test_derivative_initial_values():
    s = series_solution(parse_de("D^2f + f = 0"), [0, 1], 7, derivatives=True)
    assert s.as_list() == [0, 1, 0, Fraction(-1, 6), 0, Fraction(1, 120), 0, Fraction(-1, 5040)]
    s = series_solution(parse_de("D^2f + f = 0"), {0: 2, 1: 0}, 4, derivatives=True)
    assert s.as_list()[:3] == [2, 0, -1]


def test_mandatory_indices():
    # x^2 f'' - 2 f = 0 has solutions x^2 and x^-1: a_2 is free
    rec = de_to_re(parse_de("x^2*D^2f - 2*f = 0"), "k")
    assert 2 in mandatory_indices(rec)
    with pytest.raises(MissingInitialValue) as exc:
        series_solution(parse_de("x^2*D^2f - 2*f = 0"), [0, 0], 5)
    assert exc.value.index == 2
    s = series_solution(parse_de("x^2*D^2f - 2*f = 0"), {0: 0, 1: 0, 2: 5}, 5)
    assert s.as_list() == [0, 0, 5, 0, 0, 0]


def test_iterate_negative_start():
    rec = parse_re("a[k+1] = a[k]/(k+1)")
    vals = iterate_re(rec, {0: Fraction(1)}, 6)
    assert vals[6] == Fraction(1, 720)


@given(st.integers(50, 200))
def test_linear_operation_count(n):
    c1, c2 = OpCounter(), OpCounter()
    taylor("airy_ai(x)", n, counter=c1)
    taylor("airy_ai(x)", 2 * n, counter=c2)
    assert c2.ops / c1.ops <= 2.2


def test_symbolic_initial_values():
    s = series_solution(de_from_expr("airy_ai(x)"), {0: "c0", 1: "c1"}, 7)
    assert [str(c) for c in s.as_list()] == ["c0", "c1", "0", "c0/6", "c1/12", "0", "c0/180",
                                             "c1/504"]
