from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from holonomia.expr import evaluate, parse_expr, series_truncated, to_text
from holonomia.hyper import (NotHypergeometric, power_series, product_form,
                             sum_to_hypergeometric, term_ratio)


def _numeric_ratio(text, k, env):
    t = parse_expr(text)
    return evaluate(t, {**env, "k": k + 1}) / evaluate(t, {**env, "k": k})


TERMS = ["binomial(n,k)^2", "factorial(2*k)/factorial(k)^3*3^k", "(-1)^k*binomial(n,k)*x^k",
         "pochhammer(a,k)*pochhammer(b,k)/factorial(k)^2", "binomial(n,k)*binomial(n+k,k)",
         "1/factorial(3*k)"]


@pytest.mark.parametrize("text", TERMS)
def test_term_ratio_matches_evaluation(text):
    env = {"n": 7, "x": Fraction(2, 3), "a": Fraction(1, 3), "b": Fraction(5, 2)}
    r = term_ratio(text)
    for k in range(0, 5):
        point = {v: env[v] for v in r.variables if v in env}
        assert r.evaluate({**point, "k": k}).constant_value() == _numeric_ratio(text, k, env)


@pytest.mark.parametrize("text", TERMS)
def test_hypergeometric_form_has_same_ratio(text):
    h = sum_to_hypergeometric(text)
    ring = term_ratio(text).variables
    assert h.ratio(ring) == term_ratio(text, ring=ring)
    env = {"n": 7, "x": Fraction(2, 3), "a": Fraction(1, 3), "b": Fraction(5, 2), "k": 0}
    assert evaluate(h.prefactor, env) == evaluate(parse_expr(text), env)


def test_not_hypergeometric():
    with pytest.raises(NotHypergeometric):
        term_ratio("2^(k^2)")
    with pytest.raises(NotHypergeometric):
        term_ratio("factorial(k) + 1")


def test_product_form_normalizes():
    e = product_form(parse_expr("gamma(2*k+3)/gamma(k+1)/(2*k+2)"), "k")
    assert evaluate(e, {"k": 4}) == evaluate(parse_expr("factorial(10)/factorial(4)/10"))


SERIES = ["exp(x)", "cos(x)", "arcsin(x)", "arctan(x)", "1/(1-x)^2", "sin(sqrt(x))",
          "bessel_j0(x)", "log(1+x)", "exp(x)*sin(x)", "airy_ai(x)", "sqrt(1-4*x)",
          "(1+x)^a", "exp(-x^2)*x"]


@pytest.mark.parametrize("text", SERIES)
def test_power_series_reconstructs(text):
    ps = power_series(text, check_order=0)
    want = series_truncated(text, 20)
    got = ps.coefficient_list(20)
    for e, c in want.terms():
        g = got.get(e, 0)
        assert g == c or (hasattr(g, "embed") and str(g) == str(c))


@given(st.sampled_from(SERIES[:9]))
def test_power_series_json(text):
    js = power_series(text).to_json()
    assert "exact_hypergeometric" in js or "classes" in js


def test_closed_forms():
    assert str(power_series("cos(x)")) == "sum((-1)^k/factorial(2*k)*x^(2*k), k, 0, inf)"
    assert str(power_series("exp(x)")) == "sum(1/factorial(k)*x^k, k, 0, inf)"
    assert not power_series("exp(x)*sin(x)").exact_hypergeometric
    ps = power_series("arcsin(x)")
    assert (ps.p, ps.gap) == (1, 2)
    assert to_text(ps.classes[0].term.z) == "x^2"
