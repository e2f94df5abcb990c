"""Acceptance criteria 1-9; each prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import annihilates  # noqa: E402
from holonomia.expr import evaluate, parse_expr, series_truncated, to_text  # noqa: E402
from holonomia.holonomic import (de_from_expr, de_to_re, parse_de, parse_re,  # noqa: E402
                                 product_de, re_for_expr, re_multisection, re_residual,
                                 re_to_de, sum_de, family_re)
from holonomia.orthopoly import family  # noqa: E402
from holonomia.repro import CASES, ZEILBERGER_INPUTS  # noqa: E402
from holonomia.series_solver import OpCounter, series_solution, taylor  # noqa: E402
from holonomia.zeilberger import (brute_force_sum, push_into_sum, verify_certificate,  # noqa: E402
                                  zeilberger)

SIN, EXP, AIRY = parse_de("D^2f + f = 0"), parse_de("Df - f = 0"), parse_de("D^2f - x*f = 0")


def _group(g):
    failed = []
    for c in CASES:
        if c.group != g:
            continue
        try:
            ok, detail = c.run()
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        if not ok:
            failed.append(f"{c.name}: {detail}")
    return failed


def _seq_ok(rec, text, index, env, lo=0, hi=30):
    vals = {m: evaluate(parse_expr(text), {**env, index: m}) for m in range(lo, hi)}
    point = {v: env[v] for v in rec.params if v in env}
    return all(r == 0 for _, r in re_residual(rec, vals, point=point))


# --- criteria ---------------------------------------------------------------

def criterion_1():
    failed = _group(1)
    oracle = [(sum_de(SIN, EXP), "sin(x) + 2*cos(x) + 3*exp(x)"),
              (product_de(SIN, EXP), "cos(x)*exp(x)"),
              (sum_de(AIRY, EXP), "airy_bi(x) - exp(x)"),
              (product_de(AIRY, EXP), "airy_ai(x)*exp(x)"),
              (de_from_expr("exp(alpha*x)*sin(beta*x)"), "exp(alpha*x)*sin(beta*x)"),
              (de_from_expr("arcsin(x)^2"), "arcsin(x)^2")]
    failed += [f"annihilation {e}" for de, e in oracle if not annihilates(de, e)]
    return not failed, failed or "8 goldens + annihilation oracle"


def criterion_2():
    failed = _group(2)
    rec = de_to_re(de_from_expr("arcsin(x)^2"), "k")
    coeffs = dict(enumerate(series_truncated("arcsin(x)^2", 30).as_list(30)))
    if not all(r == 0 for _, r in re_residual(rec, coeffs)):
        failed.append("arcsin^2 coefficients")
    gf = re_to_de(re_for_expr("legendre_p(n,x)", "n"), "z")
    if not annihilates(gf, "1/sqrt(1 - 2*x*z + z^2)"):
        failed.append("legendre generating function oracle")
    return not failed, failed or "3 goldens + coefficient and generating-function oracles"


def criterion_3():
    failed = _group(3)
    x = Fraction(2, 7)
    checks = [
        (re_for_expr("(factorial(n)+factorial(k)^2)/k", "n"), "(factorial(n)+factorial(k)^2)/k",
         "n", {"k": 3}, 0),
        (re_for_expr("(factorial(n)+factorial(k)^2)/k", "k"), "(factorial(n)+factorial(k)^2)/k",
         "k", {"n": 4}, 1),
        (re_for_expr("legendre_p(k,x)", "k"), "legendre_p(k,x)", "k", {"x": x}, 0),
        (re_for_expr("binomial(2*k,k)*hermite_h(k,x)", "k"), "binomial(2*k,k)*hermite_h(k,x)",
         "k", {"x": x}, 0),
        (re_for_expr("binomial(mu,n)*charlier(n,mu,x)", "n"), "binomial(mu,n)*charlier(n,mu,x)",
         "n", {"x": 3, "mu": Fraction(9, 2)}, 0),
    ]
    for rec, text, idx, env, lo in checks:
        if not _seq_ok(rec, text, idx, env, lo=lo):
            failed.append(f"sequence oracle {text} in {idx}")
    return not failed, failed or "7 goldens + sequence oracle"


def criterion_4():
    failed = _group(4)
    return not failed, failed or f"{len(ZEILBERGER_INPUTS)} sums, certificates zero residual"


def criterion_5():
    failed = []
    for key in ("binomial-fifth-powers", "apery-numbers"):
        e, idx, _ = ZEILBERGER_INPUTS[key]
        s = push_into_sum(parse_expr(e))
        res = zeilberger(s.body, idx, s.index, bounds=(s.lo, s.hi))
        vals = {n: brute_force_sum(s, {idx: n}) for n in range(0, 13)}
        res_vals = re_residual(res.recurrence, vals)
        if not res_vals or any(r != 0 for _, r in res_vals) or not verify_certificate(s.body, res)[0]:
            failed.append(key)
    return not failed, failed or "n = 0..12 exact"


def criterion_6():
    failed = _group(6)
    return not failed, failed or "shapes, closed forms, parameter multiset"


CORPUS = ["sin(x)*exp(x)", "airy_ai(x)", "airy_bi(x)", "arcsin(x)^2", "bessel_j0(x)",
          "1/(1-x-x^2)", "exp(x)/(1-x)", "arctan(x)", "log(1+x)", "sqrt(1+x)*exp(-x)",
          "(1+x)^a", "x^3*cos(2*x)"]


def criterion_7():
    failed = _group(7)
    s = series_solution(AIRY, {0: "c0", 1: "c1"}, 13)
    dens = [c.denominator() for c in s.as_list()]
    want = {3: 6, 4: 12, 6: 180, 7: 504, 10: 45360}
    for m, d in want.items():
        if str(dens[m]) != str(d):
            failed.append(f"airy a{m} denominator {dens[m]}")
    for e in CORPUS:
        if taylor(e, 30) != series_truncated(e, 30):
            failed.append(f"taylor {e}")
    ratios = []
    for e in ("airy_ai(x)", "sin(x)*exp(x)", "arcsin(x)^2"):
        c1, c2 = OpCounter(), OpCounter()
        taylor(e, 500, counter=c1)
        taylor(e, 1000, counter=c2)
        ratios.append(c2.ops / c1.ops)
        if ratios[-1] > 2.2:
            failed.append(f"op ratio {e} {ratios[-1]:.3f}")
    return not failed, failed or f"12/12 corpus, op ratios {', '.join(f'{r:.3f}' for r in ratios)}"


def criterion_8():
    failed = _group(8)
    rec = re_multisection(family_re(family("charlier"), ("mu",), "x", "x"), 2, 0)
    if not _seq_ok(rec, "charlier(n,mu,2*x)", "x", {"n": 5, "mu": Fraction(7, 3)}, hi=20):
        failed.append("multisection sequence oracle")
    return not failed, failed or "charlier, recurrences, multisection, chebyshev"


def criterion_9():
    failed = []
    # annihilation oracle over every DE/RE output of the golden sets
    de_outputs = {"sin(x) + exp(x)": sum_de(SIN, EXP), "sin(x)*exp(x)": product_de(SIN, EXP),
                  "airy_ai(x) + exp(x)": sum_de(AIRY, EXP),
                  "airy_ai(x)*exp(x)": de_from_expr("airy_ai(x)*exp(x)"),
                  "exp(alpha*x)*sin(beta*x)": de_from_expr("exp(alpha*x)*sin(beta*x)"),
                  "arcsin(x)": de_from_expr("arcsin(x)"),
                  "arcsin(x)^2": re_to_de(de_to_re(de_from_expr("arcsin(x)^2"), "k"), "x")}
    for e, de in de_outputs.items():
        if not annihilates(de, e, 30):
            failed.append(f"DE annihilation {e}")
        if parse_de(str(de)) != de:
            failed.append(f"DE round trip {e}")
    re_outputs = {"1/factorial(k) + 1": (parse_re(str(re_for_expr("1/factorial(k) + 1"))), {}),
                  "factorial(k)^2/factorial(2*k)": (re_for_expr("factorial(k)^2/factorial(2*k)"),
                                                    {})}
    for text, (rec, env) in re_outputs.items():
        if not _seq_ok(rec, text, "k", env):
            failed.append(f"RE annihilation {text}")
    # certificate soundness over every telescoping result
    for key, (e, idx, _) in ZEILBERGER_INPUTS.items():
        s = push_into_sum(parse_expr(e))
        res = zeilberger(s.body, idx, s.index, bounds=(s.lo, s.hi))
        ok, residual = verify_certificate(s.body, res)
        if not ok or not residual.is_zero():
            failed.append(f"certificate {key}")
    # ring homomorphism of series arithmetic
    f, g = "exp(a*x)", "1/(1+x)"
    sf, sg = series_truncated(f, 30, ring=("a",)), series_truncated(g, 30, ring=("a",))
    if series_truncated(f"({f})*({g})", 30, ring=("a",)) != sf * sg \
            or series_truncated(f"({f})+({g})", 30, ring=("a",)) != sf + sg:
        failed.append("series homomorphism")
    # parse/print stability
    for e, _, _ in ZEILBERGER_INPUTS.values():
        t = to_text(parse_expr(e))
        if to_text(parse_expr(t)) != t:
            failed.append(f"round trip {e[:30]}")
    return not failed, failed or "annihilation, certificates, homomorphism, round trip"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


def _report(i, fn):
    t = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion {i} ({dt:.2f}s): {detail}"


@pytest.mark.parametrize("i", range(1, 10))
def test_criterion(i, capsys):
    ok, line = _report(i, CRITERIA[i - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_report(i, fn) for i, fn in enumerate(CRITERIA, 1)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
