from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from holonomia.expr import evaluate, parse_expr
from holonomia.holonomic import re_residual
from holonomia.zeilberger import (NoTelescoper, brute_force_sum, default_max_order, gosper,
                                  push_into_sum, verify_certificate, zeilberger)


def _antidiff_ok(term, g, k="k", rng=range(1, 12)):
    G = g.antidifference()
    for kk in rng:
        lhs = evaluate(G, {k: kk + 1}) - evaluate(G, {k: kk})
        if lhs != evaluate(parse_expr(term), {k: kk}):
            return False
    return True


@pytest.mark.parametrize("term", ["k*factorial(k)", "1/(k*(k+1))", "k", "(4*k+1)*factorial(k)/factorial(2*k+1)",
                                  "k*2^k"])
def test_gosper_summable(term):
    g = gosper(term)
    assert g.summable
    assert _antidiff_ok(term, g)


@pytest.mark.parametrize("term", ["factorial(k)", "1/k", "binomial(10, k)"])
def test_gosper_not_summable(term):
    assert not gosper(term).summable


def _check_sum(text, n="n", ns=range(0, 10), env=None, window=None):
    s = push_into_sum(parse_expr(text))
    res = zeilberger(s.body, n, s.index, bounds=(s.lo, s.hi))
    ok, residual = verify_certificate(s.body, res)
    assert ok and residual.is_zero()
    vals = {m: brute_force_sum(s, {n: m, **(env or {})}, window and (0, m)) for m in ns}
    assert all(r == 0 for _, r in re_residual(res.recurrence, vals, point=env))
    return res


proper = st.tuples(st.integers(1, 3), st.integers(0, 2), st.sampled_from([1, -1, 2, Fraction(1, 2)]),
                   st.integers(0, 1))


@given(proper)
def test_certificate_soundness(t):
    a, b, c, shift = t
    text = f"sum(binomial(n,k)^{a}*binomial(n+k,k)^{b}*({c})^k*(k+{shift}), k, 0, n)"
    # small n can sit on a pole of the certificate, where the identity may fail
    _check_sum(text, ns=range(3, 11))


def test_certificate_pole_marks_exception():
    s = push_into_sum(parse_expr("sum(binomial(n,k)*(-1)^k*k, k, 0, n)"))
    res = zeilberger(s.body, "n", "k", bounds=(s.lo, s.hi))
    assert res.order == 0
    assert res.certificate.inverse().evaluate({"n": 1}).is_zero()
    assert brute_force_sum(s, {"n": 1}) == -1
    assert all(brute_force_sum(s, {"n": m}) == 0 for m in range(2, 9))


def test_unnatural_bound_is_flagged():
    s = push_into_sum(parse_expr("sum(binomial(n+k,k), k, 0, n)"))
    res = zeilberger(s.body, "n", "k", bounds=(s.lo, s.hi))
    assert verify_certificate(s.body, res)[0]
    assert any("upper bound" in w for w in res.warnings)


def test_binomial_theorem():
    res = _check_sum("sum(binomial(n,k), k, 0, n)")
    assert res.order == 1


def test_vandermonde_symbolic():
    res = _check_sum("sum(binomial(a,k)*binomial(b,n-k), k, 0, n)", env={"a": 5, "b": 7})
    assert res.order == 1


def test_hyperterm_input():
    res = _check_sum("pfq([-n, a], [b], 1)", env={"a": 3, "b": 4}, window=True)
    assert res.order == 1


def test_no_telescoper_within_bound():
    with pytest.raises(NoTelescoper):
        zeilberger(parse_expr("binomial(n,k)^5"), "n", "k", max_order=2)


def test_max_order_env(monkeypatch):
    monkeypatch.setenv("HOLONOMIA_MAX_ORDER", "3")
    assert default_max_order() == 3


def test_json_shape():
    s = push_into_sum(parse_expr("sum(binomial(n,k)^2, k, 0, n)"))
    res = zeilberger(s.body, "n", "k", bounds=(s.lo, s.hi))
    js = res.to_json(True)
    assert set(js) >= {"order", "sigma", "certificate", "verified"}
    assert set(js["certificate"]) == {"num", "den"}


def test_config_from_env():
    from holonomia.config import Config
    c = Config.from_env({"HOLONOMIA_SERIES_CHECK_ORDER": "12", "HOLONOMIA_MAX_ORDER": "4"})
    assert (c.series_check_order, c.zeilberger_max_order, c.default_digits) == (12, 4, 30)
