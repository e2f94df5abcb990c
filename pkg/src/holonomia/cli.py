"""Batch command-line front end."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .config import Config
from .expr import parse_expr, series_truncated, to_text
from .holonomic import (de_from_expr, de_to_re, parse_de, parse_re, product_de, product_re,
                        re_for_expr, re_multisection, re_to_de, sum_de, sum_re)
from .hyper import power_series, sum_to_hypergeometric
from .orthopoly import format_mpfr, ortho_exact_eval, ortho_numeric_eval, ortho_recurrence
from .series_solver import OpCounter, series_solution, taylor
from .zeilberger import gosper, push_into_sum, verify_certificate, zeilberger

SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _emit(args, text: str, payload: dict):
    if args.json:
        print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True))
    else:
        print(text)


def _value(v) -> str:
    return str(v)


def _series_payload(s):
    terms = [(str(e), _value(c)) for e, c in s.terms()]
    text = " + ".join(f"({c})*x^({e})" for e, c in terms) or "0"
    return f"{text} + O(x^{Fraction(s.prec, s.p)})", {
        "terms": [{"exponent": e, "coefficient": c} for e, c in terms],
        "order": str(Fraction(s.prec, s.p))}


def _coeff_payload(args, s, counter):
    coeffs = [_value(c) for c in s.as_list(args.order)]
    payload = {"coefficients": coeffs}
    text = "\n".join(coeffs)
    if counter is not None:
        payload["ops"] = counter.ops
        text += f"\nops: {counter.ops}"
    return text, payload


def _params(text: str | None) -> tuple:
    if not text:
        return ()
    out = []
    for p in text.split(","):
        p = p.strip()
        try:
            out.append(Fraction(p))
        except ValueError:
            out.append(p)
    return tuple(out)


def _init(items: list[str]):
    init = {}
    for i, item in enumerate(items):
        if "=" in item:
            k, v = item.split("=", 1)
            init[int(k)] = v
        else:
            init[i] = item
    return {k: (_number(v) if _is_number(v) else v) for k, v in init.items()}


def _is_number(v: str) -> bool:
    try:
        Fraction(v)
        return True
    except ValueError:
        return False


def _number(v: str) -> Fraction:
    return Fraction(v)


# --- commands -----------------------------------------------------------

def cmd_parse(a):
    e = parse_expr(a.expr)
    _emit(a, to_text(e), {"expr": to_text(e)})


def cmd_series(a):
    text, payload = _series_payload(series_truncated(a.expr, a.order, a.var))
    _emit(a, text, payload)


def cmd_de(a):
    de = de_from_expr(a.expr, a.var)
    _emit(a, str(de), de.to_json())


def cmd_re(a):
    rec = re_for_expr(a.expr, a.index)
    _emit(a, str(rec), rec.to_json())


def cmd_sum_de(a):
    de = sum_de(parse_de(a.first, a.var), parse_de(a.second, a.var))
    _emit(a, str(de), de.to_json())


def cmd_product_de(a):
    de = product_de(parse_de(a.first, a.var), parse_de(a.second, a.var))
    _emit(a, str(de), de.to_json())


def cmd_sum_re(a):
    rec = sum_re(parse_re(a.first, a.index), parse_re(a.second, a.index))
    _emit(a, str(rec), rec.to_json())


def cmd_product_re(a):
    rec = product_re(parse_re(a.first, a.index), parse_re(a.second, a.index))
    _emit(a, str(rec), rec.to_json())


def cmd_de_to_re(a):
    rec = de_to_re(parse_de(a.de, a.var), a.index)
    _emit(a, str(rec), rec.to_json())


def cmd_re_to_de(a):
    de = re_to_de(parse_re(a.re, a.index), a.var)
    _emit(a, str(de), de.to_json())


def cmd_multisection(a):
    rec = re_multisection(parse_re(a.re, a.index), a.m, a.r)
    _emit(a, str(rec), rec.to_json())


def cmd_hyper(a):
    h = sum_to_hypergeometric(a.expr, a.index)
    _emit(a, str(h), h.to_json())


def cmd_powerseries(a):
    ps = power_series(a.expr, a.var, a.index)
    _emit(a, str(ps), ps.to_json())


def cmd_gosper(a):
    g = gosper(a.expr, a.index)
    _emit(a, str(g), g.to_json())


def _telescope(a):
    s = push_into_sum(parse_expr(a.sum))
    res = zeilberger(s.body, a.n, s.index, max_order=a.max_order, bounds=(s.lo, s.hi))
    ok, _ = verify_certificate(s.body, res)
    return res, ok


def cmd_zeilberger(a):
    res, ok = _telescope(a)
    text = f"{res.recurrence}\ncertificate: {res.certificate}\nverified: {str(ok).lower()}"
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(a, text, res.to_json(ok))


def cmd_verify(a):
    res, ok = _telescope(a)
    _emit(a, "verified" if ok else "NOT verified", {"verified": ok, "order": res.order})
    if not ok:
        raise SystemExit(1)


def cmd_series_solve(a):
    counter = OpCounter() if a.count_ops else None
    s = series_solution(parse_de(a.de, a.var), _init(a.init), a.order,
                        derivatives=a.derivatives, counter=counter)
    _emit(a, *_coeff_payload(a, s, counter))


def cmd_taylor(a):
    counter = OpCounter() if a.count_ops else None
    s = taylor(a.expr, a.order, a.var, counter)
    _emit(a, *_coeff_payload(a, s, counter))


def _ortho_x(text: str):
    return Fraction(text) if _is_number(text) else text


def cmd_orthopoly(a):
    params = _params(a.params)
    if a.action == "eval":
        v = ortho_exact_eval(a.family, a.n, params, _ortho_x(a.x))
        _emit(a, str(v), {"value": str(v)})
    elif a.action == "neval":
        v = format_mpfr(ortho_numeric_eval(a.family, a.n, params, a.x, digits=a.digits),
                        a.digits)
        _emit(a, v, {"value": v, "digits": a.digits})
    else:
        rec = ortho_recurrence(a.family, params, a.direction, a.index, a.var)
        _emit(a, str(rec), rec.to_json())


def cmd_repro(a):
    from .repro import run_cases
    ok = run_cases()
    if not ok:
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="holonomia", description="Holonomic functions and sequences.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="JSON output")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, "parse and pretty-print an expression")
    sp.add_argument("expr")
    sp = add("series", cmd_series, "truncated series at 0")
    sp.add_argument("expr")
    sp.add_argument("order", type=int)
    sp.add_argument("--var", default="x")
    sp = add("de", cmd_de, "holonomic DE of an expression")
    sp.add_argument("expr")
    sp.add_argument("--var", default="x")
    sp = add("re", cmd_re, "holonomic RE of a sequence expression")
    sp.add_argument("expr")
    sp.add_argument("--index", default="k")
    for name, fn, kind in (("sum-de", cmd_sum_de, "de"), ("product-de", cmd_product_de, "de"),
                           ("sum-re", cmd_sum_re, "re"), ("product-re", cmd_product_re, "re")):
        sp = add(name, fn, f"{name.split('-')[0]} closure of two {kind.upper()}s")
        sp.add_argument("first")
        sp.add_argument("second")
        if kind == "de":
            sp.add_argument("--var", default="x")
        else:
            sp.add_argument("--index", default="k")
    sp = add("de-to-re", cmd_de_to_re, "RE of the series coefficients of a DE")
    sp.add_argument("de")
    sp.add_argument("--var", default="x")
    sp.add_argument("--index", default="k")
    sp = add("re-to-de", cmd_re_to_de, "DE of the generating function of an RE")
    sp.add_argument("re")
    sp.add_argument("--var", default="x")
    sp.add_argument("--index", default="k")
    sp = add("multisection", cmd_multisection, "RE of the subsequence a[m*k+r]")
    sp.add_argument("re")
    sp.add_argument("m", type=int)
    sp.add_argument("r", type=int, nargs="?", default=0)
    sp.add_argument("--index", default="k")
    sp = add("hyper", cmd_hyper, "hypergeometric form of a sum or summand")
    sp.add_argument("expr")
    sp.add_argument("--index", default="k")
    sp = add("powerseries", cmd_powerseries, "closed-form power series")
    sp.add_argument("expr")
    sp.add_argument("--var", default="x")
    sp.add_argument("--index", default="k")
    sp = add("gosper", cmd_gosper, "indefinite hypergeometric summation")
    sp.add_argument("expr")
    sp.add_argument("--index", default="k")
    for name, fn, help_ in (("zeilberger", cmd_zeilberger, "recurrence for a definite sum"),
                            ("verify", cmd_verify, "check a sum's recurrence certificate")):
        sp = add(name, fn, help_)
        sp.add_argument("sum")
        sp.add_argument("--n", default="n", help="recurrence index")
        sp.add_argument("--max-order", type=int, default=None)
    sp = add("series-solve", cmd_series_solve, "series solution of a DE with initial data")
    sp.add_argument("de")
    sp.add_argument("order", type=int)
    sp.add_argument("init", nargs="*", help="values a0 a1 ... or m=value")
    sp.add_argument("--var", default="x")
    sp.add_argument("--derivatives", action="store_true",
                    help="initial values are derivatives at 0")
    sp.add_argument("--count-ops", action="store_true")
    sp = add("taylor", cmd_taylor, "Taylor coefficients via the coefficient recurrence")
    sp.add_argument("expr")
    sp.add_argument("order", type=int)
    sp.add_argument("--var", default="x")
    sp.add_argument("--count-ops", action="store_true")
    sp = add("orthopoly", cmd_orthopoly, "orthogonal polynomial evaluation and recurrences")
    sp.add_argument("action", choices=["eval", "neval", "re"])
    sp.add_argument("family")
    sp.add_argument("n", type=int, nargs="?", default=0)
    sp.add_argument("x", nargs="?", default="x")
    sp.add_argument("--params", default="", help="comma separated parameters")
    sp.add_argument("--digits", type=int, default=Config.from_env().default_digits)
    sp.add_argument("--direction", default="n", choices=["n", "x"])
    sp.add_argument("--index", default=None)
    sp.add_argument("--var", default="x")
    add("repro-paper", cmd_repro, "replay the published worked examples")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.fn(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
