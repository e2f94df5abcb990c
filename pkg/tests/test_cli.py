import json
import subprocess
import sys

import pytest

from holonomia.cli import run
from holonomia.holonomic import parse_de, parse_re


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_de_command(capsys):
    code, out, _ = call(capsys, "de", "airy_ai(x)*exp(x)")
    assert code == 0
    assert parse_de(out.strip()).equivalent(parse_de("(x-1)*f + 2*Df - D^2f = 0"))


def test_zeilberger_json(capsys):
    code, out, _ = call(capsys, "zeilberger", "sum(binomial(n,k)^2*binomial(n+k,k)^2, k, 0, n)",
                        "--json")
    js = json.loads(out)
    assert code == 0 and js["schema"] == 1 and js["verified"] is True and js["order"] == 2
    rec = parse_re(js["recurrence"], "n")
    assert rec.equivalent(parse_re(
        "(1+n)^3*A[n] - (3+2*n)*(39+51*n+17*n^2)*A[n+1] + (2+n)^3*A[n+2] = 0", "n"))


def test_taylor_coefficients(capsys):
    code, out, _ = call(capsys, "taylor", "sin(x)*exp(x)", "8")
    assert code == 0
    assert out.split() == ["0", "1", "1", "1/3", "0", "-1/30", "-1/90", "-1/630", "0"]


def test_count_ops_json(capsys):
    code, out, _ = call(capsys, "taylor", "exp(x)", "5", "--count-ops", "--json")
    js = json.loads(out)
    assert js["ops"] > 0 and len(js["coefficients"]) == 6


@pytest.mark.parametrize("argv,want", [
    (["parse", "x^2 + 1/2"], "x^2 + 1/2"),
    (["sum-de", "D^2f + f = 0", "Df - f = 0"], "D^3f"),
    (["product-re", "a[k+1] = a[k]/(k+1)", "a[k+1] = a[k]"], "a[k+1]"),
    (["de-to-re", "Df - f = 0"], "a[k+1]"),
    (["re-to-de", "a[k+1] = a[k]/(k+1)"], "Df"),
    (["multisection", "a[k+1] = a[k]/(k+1)", "2", "1"], "a[k+1]"),
    (["hyper", "binomial(n,k)^2"], "pFq([-n, -n], [1], 1)"),
    (["powerseries", "cos(x)"], "factorial(2*k)"),
    (["gosper", "k*factorial(k)"], "1/k"),
    (["verify", "sum(binomial(n,k), k, 0, n)"], "verified"),
    (["series", "exp(x)", "3"], "O(x^4)"),
    (["series-solve", "D^2f - x*f = 0", "4", "c0", "c1"], "c0/6"),
    (["orthopoly", "eval", "chebyshev_t", "5", "1/4"], "61/64"),
    (["orthopoly", "neval", "legendre_p", "3", "1/2", "--digits", "12"], "-4.37500000000e-01"),
    (["orthopoly", "re", "charlier", "--params", "mu", "--direction", "x"], "a[x+2]"),
    (["re", "binomial(2*k,k)"], "a[k+1]"),
])
def test_subcommands(capsys, argv, want):
    code, out, _ = call(capsys, *argv)
    assert code == 0
    assert want in out


def test_exit_codes(capsys):
    code, out, err = call(capsys, "nosuchcommand")
    assert code == 2 and "usage" in err and out == ""
    code, _, err = call(capsys, "de", "tan(x)")
    assert code == 1 and err.startswith("error:")
    code, _, err = call(capsys, "parse", "x +")
    assert code == 1
    code, _, _ = call(capsys, "taylor", "exp(x)")
    assert code == 2


def test_deterministic_output():
    argv = [sys.executable, "-m", "holonomia", "zeilberger", "sum(binomial(n,k)^3, k, 0, n)",
            "--json"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["verified"] is True
