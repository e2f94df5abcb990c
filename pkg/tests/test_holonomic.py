import pytest
from hypothesis import given, strategies as st

from conftest import annihilates
from holonomia.expr import evaluate, parse_expr, series_truncated
from holonomia.holonomic import (HolonomicError, de_from_expr, de_to_re, parse_de, parse_re,
                                 product_de, product_re, re_for_expr, re_multisection,
                                 re_residual, re_to_de, sum_de, sum_re)

ATOMS = ["exp(x)", "sin(x)", "cos(2*x)", "airy_ai(x)", "arctan(x)", "log(1+x)", "sqrt(1+x)",
         "1/(1-x)", "x^2+1", "exp(x^2)", "bessel_j0(x)", "arcsin(x)", "cosh(x)"]
atom = st.sampled_from(ATOMS)


@given(atom, atom)
def test_sum_and_product_annihilate(f, g):
    assert annihilates(de_from_expr(f"({f}) + ({g})"), f"({f}) + ({g})")
    assert annihilates(de_from_expr(f"({f}) * ({g})"), f"({f}) * ({g})")


@given(atom, atom)
def test_closure_of_operator_text(f, g):
    a, b = de_from_expr(f), de_from_expr(g)
    assert annihilates(sum_de(a, b), f"({f}) + 2*({g})")
    assert annihilates(product_de(a, b), f"({f}) * ({g})")


@given(atom)
def test_de_text_round_trip(f):
    de = de_from_expr(f)
    assert parse_de(str(de)) == de


@given(atom)
def test_de_to_re_annihilates_coefficients(f):
    rec = de_to_re(de_from_expr(f), "k")
    coeffs = series_truncated(f, 30).as_list(30)
    values = dict(enumerate(coeffs))
    for j in range(1, rec.order + 1):
        values[-j] = 0
    assert all(r == 0 for _, r in re_residual(rec, values, start=-rec.order))


@given(atom)
def test_re_to_de_round_trip(f):
    de = re_to_de(de_to_re(de_from_expr(f), "k"), "x")
    assert annihilates(de, f)


def _seq(text, index, lo=0, hi=25, env=None):
    return {k: evaluate(parse_expr(text), {index: k, **(env or {})}) for k in range(lo, hi)}


SEQS = ["factorial(k)", "2^k", "1/factorial(k)", "binomial(2*k, k)", "k^2+1", "(-3)^k*k",
        "factorial(k)^2/factorial(2*k)", "1/(k+1)"]
seq = st.sampled_from(SEQS)


@given(seq, seq)
def test_sequence_closures(s, t):
    a, b = re_for_expr(s), re_for_expr(t)
    vs, vt = _seq(s, "k"), _seq(t, "k")
    sums = {k: vs[k] + vt[k] for k in vs}
    prods = {k: vs[k] * vt[k] for k in vs}
    assert all(r == 0 for _, r in re_residual(sum_re(a, b), sums))
    assert all(r == 0 for _, r in re_residual(product_re(a, b), prods))


@given(seq, st.integers(2, 3), st.integers(0, 1))
def test_multisection(s, m, r):
    rec = re_multisection(re_for_expr(s), m, r)
    v = _seq(s, "k", hi=60)
    sub = {j: v[m * j + r] for j in range(0, 60) if m * j + r < 60}
    assert all(res == 0 for _, res in re_residual(rec, sub))


def test_re_text_forms():
    a = parse_re("a[k+1] == a[k]/(k+1)")
    b = parse_re("(k+1)*a[k+1] - a[k] = 0")
    assert a.equivalent(b)
    assert parse_re(str(a)).equivalent(a)
    with pytest.raises(HolonomicError):
        parse_re("a[k+1]^2 = a[k]")


def test_symbolic_parameters():
    de = de_from_expr("(1+x)^a")
    assert annihilates(de, "(1+x)^a")
    rec = re_for_expr("binomial(n, k)", "k")
    v = _seq("binomial(n, k)", "k", env={"n": 9})
    assert all(r == 0 for _, r in re_residual(rec, v, point={"n": 9}))


def test_non_holonomic_rejected():
    with pytest.raises(ValueError):
        de_from_expr("exp(exp(x))")
    with pytest.raises(ValueError):
        de_from_expr("tan(x)")
