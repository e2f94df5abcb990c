from fractions import Fraction
from math import factorial

import pytest
import sympy
from hypothesis import given, strategies as st

from holonomia.holonomic import re_residual
from holonomia.orthopoly import (PrecisionError, chebyshev_doubling, format_mpfr,
                                 ortho_exact_eval, ortho_numeric_eval, ortho_recurrence)

xs = st.fractions(min_value=-2, max_value=2, max_denominator=7)
degree = st.integers(0, 14)


def _sym(v):
    return sympy.Rational(v.numerator, v.denominator)


def _frac(v):
    v = sympy.Rational(v)
    return Fraction(int(v.p), int(v.q))


CLASSICAL = {
    "chebyshev_t": ((), lambda n, x: sympy.chebyshevt(n, x)),
    "chebyshev_u": ((), lambda n, x: sympy.chebyshevu(n, x)),
    "legendre_p": ((), lambda n, x: sympy.legendre(n, x)),
    "hermite_h": ((), lambda n, x: sympy.hermite(n, x)),
    "laguerre_l": ((Fraction(3, 2),), lambda n, x: sympy.assoc_laguerre(n, sympy.Rational(3, 2), x)),
    "gegenbauer_c": ((Fraction(5, 3),), lambda n, x: sympy.gegenbauer(n, sympy.Rational(5, 3), x)),
    "jacobi_p": ((Fraction(1, 2), Fraction(-1, 3)),
                 lambda n, x: sympy.jacobi(n, sympy.Rational(1, 2), sympy.Rational(-1, 3), x)),
}


@pytest.mark.parametrize("name", sorted(CLASSICAL))
@given(n=degree, x=xs)
def test_classical_against_sympy(name, n, x):
    params, ref = CLASSICAL[name]
    assert ortho_exact_eval(name, n, params, x) == _frac(sympy.expand(ref(n, _sym(x))))


def _poch(a, k):
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def _hyp(n, ups, downs, z, x):
    """Terminating pFq evaluated straight from its defining sum."""
    total = Fraction(0)
    for k in range(n + 1):
        t = Fraction(z) ** k / factorial(k)
        for a in ups:
            t *= _poch(a, k)
        for b in downs:
            t /= _poch(b, k)
        total += t
    return total


DISCRETE = {
    "charlier": ((Fraction(3, 2),), lambda n, x, mu: _hyp(n, [-n, -x], [], -1 / mu, x)),
    "meixner": ((Fraction(5, 2), Fraction(1, 3)),
                lambda n, x, g, mu: _hyp(n, [-n, -x], [g], 1 - 1 / mu, x)),
    "krawtchouk": ((20, Fraction(1, 3)), lambda n, x, N, p: _hyp(n, [-n, -x], [-N], 1 / p, x)),
    "hahn": ((20, Fraction(1, 2), Fraction(3, 2)),
             lambda n, x, N, a, b: _hyp(n, [-n, n + a + b + 1, -x], [a + 1, -N], 1, x)),
}


@pytest.mark.parametrize("name", sorted(DISCRETE))
@given(n=st.integers(0, 10), x=st.integers(0, 12))
def test_discrete_against_definition(name, n, x):
    params, ref = DISCRETE[name]
    assert ortho_exact_eval(name, n, params, x) == ref(n, Fraction(x), *params)


@given(n=st.integers(0, 300), x=xs)
def test_chebyshev_doubling_agrees(n, x):
    assert chebyshev_doubling(n, x) == ortho_exact_eval("chebyshev_t", n, (), x)


@given(n=st.integers(1, 60), x=xs)
def test_numeric_matches_exact(n, x):
    exact = ortho_exact_eval("legendre_p", n, (), x)
    v = ortho_numeric_eval("legendre_p", n, (), str(x), digits=40)
    got = Fraction(*v.as_integer_ratio())
    assert abs(got - exact) <= abs(exact) * Fraction(1, 10 ** 38) + Fraction(1, 10 ** 60)


@pytest.mark.parametrize("name,params", [("legendre_p", ()), ("hermite_h", ()),
                                         ("laguerre_l", (2,)), ("charlier", (3,)),
                                         ("jacobi_p", (1, 2))])
def test_recurrence_annihilates_values(name, params):
    rec = ortho_recurrence(name, params, "n")
    x = Fraction(2, 7)
    vals = {n: ortho_exact_eval(name, n, params, x) for n in range(25)}
    assert all(r == 0 for _, r in re_residual(rec, vals, point={"x": x}))


def test_charlier_recurrence_in_x():
    rec = ortho_recurrence("charlier", ("mu",), "x", "x")
    vals = {x: ortho_exact_eval("charlier", 6, (Fraction(5, 2),), x) for x in range(20)}
    assert all(r == 0 for _, r in re_residual(rec, vals, point={"n": 6, "mu": Fraction(5, 2)}))


def test_symbolic_evaluation():
    p = ortho_exact_eval("hermite_h", 3, (), "x")
    assert str(p) == "8*x^3 - 12*x"


def test_format_and_errors():
    v = ortho_numeric_eval("chebyshev_t", 3, (), "1/2", digits=10)
    assert format_mpfr(v, 10) == "-1.000000000e+00"
    with pytest.raises(PrecisionError):
        ortho_numeric_eval("legendre_p", 3, (), "1/2", precision=4)
    with pytest.raises(ValueError):
        ortho_exact_eval("krawtchouk", 5, (3, Fraction(1, 2)), 1)
    with pytest.raises(ValueError):
        ortho_exact_eval("nope", 2, (), 1)


def test_chebyshev_cosine_identity():
    import mpmath
    mpmath.mp.dps = 70
    x = mpmath.nstr(mpmath.cos(mpmath.mpf("0.3")), 68)
    v = ortho_numeric_eval("chebyshev_t", 7, (), x, digits=50)
    want = mpmath.cos(mpmath.mpf("2.1"))
    assert abs(mpmath.mpf(format_mpfr(v, 50)) - want) < mpmath.mpf(10) ** -48


@pytest.mark.parametrize("name,n", [("chebyshev_t", 10 ** 6), ("legendre_p", 2000),
                                    ("hermite_h", 500)])
def test_halving_precision(name, n):
    hi = ortho_numeric_eval(name, n, (), "1/3", digits=60)
    lo = ortho_numeric_eval(name, n, (), "1/3", digits=30)
    a, b = Fraction(*hi.as_integer_ratio()), Fraction(*lo.as_integer_ratio())
    assert abs(a - b) <= abs(a) * Fraction(1, 10 ** 29)
