"""Hypergeometric terms: term ratios, pFq notation and the power series pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .algebra import RatFunc, linear_factors
from .expr import (Add, Call, Expr, ListExpr, Mul, Num, Pow, Sum, Sym, ExprError, NotRational,
                   expand_special, free_symbols, is_rational_in, mul, parse_expr, power,
                   series_truncated, subs, to_ratfunc, to_text, children)

__all__ = ["NotHypergeometric", "pochhammer_eval", "term_ratio", "HyperTerm", "PuiseuxSeries",
           "sum_to_hypergeometric", "power_series", "gamma_factors", "product_form"]


class NotHypergeometric(ExprError):
    pass


def pochhammer_eval(a, k: int):
    """(a)_k = a (a+1) ... (a+k-1) for k >= 0."""
    if k < 0:
        raise ValueError("pochhammer_eval needs k >= 0")
    out = a * 0 + 1
    for j in range(k):
        out = out * (a + j)
    return out


def _ring(e: Expr, index: str, ring=None):
    from .holonomic import ring_of
    return ring_of(free_symbols(e), index) if ring is None else ring_of(ring, index)


# ---------------------------------------------------------------------------
# gamma-factor decomposition
# ---------------------------------------------------------------------------

@dataclass
class GammaForm:
    """t = const * ratfun * prod base^exp * prod Gamma(arg)^e.

    ``gammas`` maps an argument RatFunc (linear in the index) to an integer
    exponent; ``powers`` is a list of (base RatFunc free of the index, exponent
    RatFunc linear in the index).
    """

    ring: tuple
    rat: RatFunc
    gammas: dict = field(default_factory=dict)
    powers: list = field(default_factory=list)

    def mul(self, other: "GammaForm", sign: int = 1) -> "GammaForm":
        g = dict(self.gammas)
        for a, e in other.gammas.items():
            g[a] = g.get(a, 0) + sign * e
            if g[a] == 0:
                del g[a]
        pw = list(self.powers) + [(b, x * sign) for b, x in other.powers]
        rat = self.rat * other.rat if sign > 0 else self.rat / other.rat
        return GammaForm(self.ring, rat, g, pw)

    def pow(self, n: int) -> "GammaForm":
        return GammaForm(self.ring, self.rat ** n, {a: e * n for a, e in self.gammas.items()},
                         [(b, x * n) for b, x in self.powers])


def _one(ring):
    return RatFunc.const(1, ring)


def gamma_factors(e: Expr, ring) -> GammaForm:
    """Decompose a product of factorial-type atoms and powers into a GammaForm."""
    one = _one(ring)
    if is_rational_in(e):
        try:
            return GammaForm(ring, to_ratfunc(e, ring))
        except NotRational:
            pass
    if isinstance(e, Mul):
        out = GammaForm(ring, one)
        for f in e.factors:
            out = out.mul(gamma_factors(f, ring))
        return out
    if isinstance(e, Pow):
        if isinstance(e.exp, Num) and e.exp.value.denominator == 1:
            return gamma_factors(e.base, ring).pow(int(e.exp.value))
        if is_rational_in(e.base) and is_rational_in(e.exp):
            b = to_ratfunc(e.base, ring)
            x = to_ratfunc(e.exp, ring)
            return GammaForm(ring, one, {}, [(b, x)])
        raise NotHypergeometric(f"unsupported power {to_text(e)}")
    if isinstance(e, Call):
        a = [to_ratfunc(x, ring) if not isinstance(x, ListExpr) else None for x in e.args] \
            if e.name != "hyperterm" else None
        if e.name == "factorial":
            return GammaForm(ring, one, {a[0] + 1: 1})
        if e.name == "gamma":
            return GammaForm(ring, one, {a[0]: 1})
        if e.name == "pochhammer":
            return _gq(ring, [(a[0] + a[1], 1), (a[0], -1)])
        if e.name == "binomial":
            return _gq(ring, [(a[0] + 1, 1), (a[1] + 1, -1), (a[0] - a[1] + 1, -1)])
        if e.name == "hyperterm":
            ups = [to_ratfunc(x, ring) for x in e.args[0].items]
            downs = [to_ratfunc(x, ring) for x in e.args[1].items]
            z = to_ratfunc(e.args[2], ring)
            m = to_ratfunc(e.args[3], ring)
            out = GammaForm(ring, one, {}, [(z, m)])
            for u in ups:
                out = out.mul(_gq(ring, [(u + m, 1), (u, -1)]))
            for d in downs:
                out = out.mul(_gq(ring, [(d + m, -1), (d, 1)]))
            return out.mul(GammaForm(ring, one, {m + 1: -1}))
    raise NotHypergeometric(f"not a hypergeometric term: {to_text(e)}")


def _gq(ring, pairs):
    g = {}
    for a, e in pairs:
        g[a] = g.get(a, 0) + e
        if g[a] == 0:
            del g[a]
    return GammaForm(ring, _one(ring), g)


def _linear_coeff(a: RatFunc, index: str):
    """Coefficient of index in a linear polynomial argument, offset."""
    if not a.is_polynomial():
        raise NotHypergeometric(f"gamma argument {a} is not polynomial")
    cs = a.coeffs_in(index)
    if len(cs) > 2:
        raise NotHypergeometric(f"gamma argument {a} is not linear in {index}")
    c = cs[1] if len(cs) > 1 else a * 0
    if not c.is_constant():
        raise NotHypergeometric(f"gamma argument {a}: coefficient of {index} is not constant")
    return c.constant_value(), cs[0]


def _gamma_shift_ratio(u: RatFunc, h: int) -> RatFunc:
    """Gamma(u + h) / Gamma(u) for an integer h."""
    out = u * 0 + 1
    if h >= 0:
        for i in range(h):
            out = out * (u + i)
    else:
        for i in range(1, -h + 1):
            out = out / (u - i)
    return out


def term_ratio(t: Expr | str, index: str = "k", ring=None) -> RatFunc:
    """t(index+1)/t(index) as a reduced RatFunc, or raise NotHypergeometric."""
    if isinstance(t, str):
        t = parse_expr(t)
    t = expand_special(t)
    ring = _ring(t, index, ring)
    if isinstance(t, (Add, Sum)) and not is_rational_in(t):
        raise NotHypergeometric(f"{to_text(t)} is not a hypergeometric term in {index}")
    gf = gamma_factors(t, ring)
    ratio = gf.rat.shift(index, 1) / gf.rat if not gf.rat.is_zero() else _one(ring)
    for b, x in gf.powers:
        if not b.free_of(index):
            if x.free_of(index):
                if x.is_constant() and x.constant_value().denominator == 1:
                    n = int(x.constant_value())
                    ratio = ratio * (b.shift(index, 1) / b) ** n
                    continue
            raise NotHypergeometric(f"power with base depending on {index}")
        dx = x.shift(index, 1) - x
        if dx.is_zero():
            continue
        if not dx.is_constant() or dx.constant_value().denominator != 1:
            raise NotHypergeometric(f"exponent {x} is not integer-linear in {index}")
        ratio = ratio * b ** int(dx.constant_value())
    half = []
    for u, e in gf.gammas.items():
        a, _ = _linear_coeff(u, index)
        if a.denominator == 1:
            ratio = ratio * _gamma_shift_ratio(u, int(a)) ** e
        elif a.denominator == 2:
            half.append([u, e, a])
        else:
            raise NotHypergeometric(f"gamma argument {u} has coefficient {a}")
    ratio = ratio * _half_gamma_ratio(half, index)
    return ratio


def _half_gamma_ratio(half, index):
    """Ratio of a product of Gamma(a k + b) with a in Z + 1/2 by duplication."""
    if not half:
        return 1
    ring = half[0][0].variables
    out = _one(ring)
    pending = half
    while pending:
        u, e, a = pending.pop(0)
        if e == 0:
            continue
        partner = None
        for cand in pending:
            v, ev, av = cand
            if av != a or ev == 0 or (ev > 0) != (e > 0):
                continue
            d = v - u - Fraction(1, 2)
            if d.is_constant() and d.constant_value().denominator == 1:
                partner = cand
                break
        if partner is None:
            raise NotHypergeometric(f"unpaired half-integer gamma argument {u}")
        v, ev, _ = partner
        m = min(abs(e), abs(ev)) * (1 if e > 0 else -1)
        # Gamma(u) Gamma(v) with v = u + 1/2 + h
        h = int((v - u - Fraction(1, 2)).constant_value())
        fac = _gamma_shift_ratio(u + Fraction(1, 2), h)  # Gamma(v)/Gamma(u+1/2)
        step = int(2 * a)
        # y -> y + a: Gamma(2y)->Gamma(2y+2a), 2^(-2y) -> factor 2^(-2a)
        r = fac.shift(index, 1) / fac
        r = r * _gamma_shift_ratio(2 * u, step) * (Fraction(1, 2) ** step if step >= 0
                                                  else Fraction(2) ** (-step))
        out = out * r ** m
        partner[1] = ev - m
        if e - m != 0:
            pending.insert(0, [u, e - m, a])
    return out


# ---------------------------------------------------------------------------
# product-form simplification (prefactors and closed coefficient formulas)
# ---------------------------------------------------------------------------

def _gamma_to_expr(u: RatFunc, e: int, style: str) -> Expr:
    ue = _rf_expr(u)
    if style == "factorial":
        base = Call("factorial", (_rf_expr(u - 1),))
    else:
        base = Call("gamma", (ue,))
    return base if e == 1 else Pow(base, Num(Fraction(e)))


def _rf_expr(r: RatFunc) -> Expr:
    return parse_expr(str(r))


def product_form(e: Expr, index: str | None = None, style: str = "gamma", ring=None) -> Expr:
    """Collect a product of gamma-type atoms into const*rat*powers*gammas form.

    With ``index`` given, gamma arguments a*index + b (a integer, b integer)
    are moved to offsets in [0, a) and the resulting rational factors merged.
    Integer gamma arguments are evaluated.
    """
    from .holonomic import ring_of
    ring = ring_of(free_symbols(e), index or ()) if ring is None else ring
    gf = gamma_factors(expand_special(e), ring)
    rat = gf.rat
    gam: dict = {}
    for u, ex in gf.gammas.items():
        if u.is_constant():
            v = u.constant_value()
            if v.denominator == 1 and v > 0:
                rat = rat * Fraction(_fact_int(int(v) - 1)) ** ex
                continue
        if index is not None and not u.free_of(index):
            a, b = _linear_coeff(u, index)
            if a.denominator == 1 and a > 0 and b.is_constant() and \
                    b.constant_value().denominator == 1:
                bv = int(b.constant_value())
                target = (bv - 1) % int(a) + 1  # factorial offset in [0, a)
                h = bv - target
                base = u - h
                rat = rat * _gamma_shift_ratio(base, h) ** ex
                u = base
        gam[u] = gam.get(u, 0) + ex
        if gam[u] == 0:
            del gam[u]
    if index is not None:
        rat, gam = _absorb_linear(rat, gam)
    # combine numeric bases with identical exponents
    merged: dict = {}
    others = []
    for b, x in gf.powers:
        if b.is_constant():
            if _lc_neg(x):
                b, x = 1 / b, -x
            key = str(x)
            if key in merged:
                merged[key] = (merged[key][0] * b, x)
            else:
                merged[key] = (b, x)
        else:
            others.append((b, x))
    powers = [v for v in merged.values() if not v[0].is_one()] + others
    num_f: list[Expr] = []
    den_f: list[Expr] = []
    num_f.extend(_factored(rat.num, ring))
    den_f.extend(_factored(rat.den, ring))
    split = []
    for b, x in powers:
        if b.is_constant() and b.constant_value() < 0 and b.constant_value() != -1:
            split.append((RatFunc.const(-1, ring), x))
            b = -b
        split.append((b, x))
    for b, x in split:
        if b.is_constant() and b.constant_value().numerator == 1:
            b, x = 1 / b, -x
        if x.is_constant() and x.constant_value() < 0:
            den_f.append(power(_rf_expr(b), _rf_expr(-x)))
        elif not x.is_constant() and _lc_neg(x):
            den_f.append(power(_rf_expr(b), _rf_expr(-x)))
        else:
            num_f.append(power(_rf_expr(b), _rf_expr(x)))
    for u, ex in sorted(gam.items(), key=lambda t: str(t[0])):
        (num_f if ex > 0 else den_f).append(_gamma_to_expr(u, abs(ex), style))
    if not den_f:
        return mul(*num_f) if num_f else Num(Fraction(1))
    den = Pow(mul(*den_f), Num(Fraction(-1)))
    return mul(*num_f, den) if num_f else den


def _absorb_linear(rat: RatFunc, gam: dict):
    """Gamma(u) * u -> Gamma(u + 1) when the factor u sits on the matching side."""
    out = {}
    for u, ex in gam.items():
        if u.is_polynomial() and not u.is_constant():
            for _ in range(abs(ex)):
                trial = rat / u if ex > 0 else rat * u
                side_before = rat.num if ex > 0 else rat.den
                side_after = trial.num if ex > 0 else trial.den
                if _tdeg(side_after) >= _tdeg(side_before):
                    break
                rat = trial
                out[u + 1] = out.get(u + 1, 0) + (1 if ex > 0 else -1)
                ex = ex - 1 if ex > 0 else ex + 1
        if ex:
            out[u] = out.get(u, 0) + ex
    return rat, {u: e for u, e in out.items() if e}


def _tdeg(p) -> int:
    return p.total_degree()


def _factored(p, ring) -> list[Expr]:
    """Integer content and irreducible factors of a polynomial as Expr factors."""
    if p.is_one():
        return []
    c, facs = p.factor()
    out = []
    if c != 1 or not facs:
        out.append(Num(Fraction(int(c))))
    for f, m in sorted(facs, key=lambda t: str(t[0])):
        fe = _rf_expr(RatFunc(f, _reduced=True))
        out.append(fe if m == 1 else Pow(fe, Num(Fraction(m))))
    return out


def _lc_neg(x: RatFunc) -> bool:
    from .algebra import _lc
    return _lc(x.num) < 0


def _fact_int(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# hypergeometric terms
# ---------------------------------------------------------------------------

def _sort_params(ps):
    def key(p):
        if isinstance(p, RatFunc) and p.is_constant():
            return (0, p.constant_value(), "")
        if isinstance(p, RatFunc):
            try:
                v = p.evaluate({n: 0 for n in p.used_variables()}).constant_value()
            except (ZeroDivisionError, ValueError):
                v = Fraction(0)
            return (1, v, str(p))
        return (0, Fraction(p), "")
    return sorted(ps, key=key)


@dataclass(frozen=True)
class HyperTerm:
    """prefactor * sum_j prod (a)_j / (prod (b)_j j!) * z^j."""

    upper: tuple
    lower: tuple
    z: Expr
    prefactor: Expr
    index: str = "k"

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)

    def ratio(self, ring) -> RatFunc:
        """(term j+1)/(term j) as a RatFunc in the index (argument included)."""
        K = RatFunc.var(self.index, ring)
        out = to_ratfunc(self.z, ring)
        for a in self.upper:
            out = out * (K + _emb(a, ring))
        for b in self.lower:
            out = out / (K + _emb(b, ring))
        return out / (K + 1)

    def pfq_text(self) -> str:
        ups = ", ".join(str(a) for a in self.upper)
        downs = ", ".join(str(b) for b in self.lower)
        return f"pFq([{ups}], [{downs}], {to_text(self.z)})"

    def __str__(self):
        pre = to_text(self.prefactor)
        body = self.pfq_text()
        if pre == "1":
            return body
        if isinstance(self.prefactor, (Add,)):
            pre = f"({pre})"
        return f"{pre}*{body}"

    def to_expr(self) -> Expr:
        def ex(a):
            return _rf_expr(a) if isinstance(a, RatFunc) else Num(Fraction(a))
        return mul(self.prefactor, Call("pfq", (ListExpr(tuple(ex(a) for a in self.upper)),
                                              ListExpr(tuple(ex(b) for b in self.lower)),
                                              self.z)))

    def to_json(self) -> dict:
        return {"upper": [str(a) for a in self.upper], "lower": [str(b) for b in self.lower],
                "argument": to_text(self.z), "prefactor": to_text(self.prefactor),
                "index": self.index}


def _emb(a, ring):
    if isinstance(a, RatFunc):
        return a if a.variables == ring else a.embed(ring)
    return RatFunc.const(a, ring)


def _params_from_ratio(ratio: RatFunc, index: str):
    """Split ratio = c * prod(k + a)/prod(k + b)/(k + 1) into (ups, downs, c)."""
    const, ups_r, downs_r, rn, rd = linear_factors(ratio, index)
    if not rn.is_one() or not rd.is_one():
        raise NotHypergeometric(
            f"term ratio has irreducible nonlinear factors: {rn} / {rd} (ratio {ratio})")
    ups = [-r for r in ups_r]
    downs = [-r for r in downs_r]
    one = _one(ratio.variables)
    for i, b in enumerate(downs):
        if b == one:
            downs.pop(i)
            break
    else:
        ups.append(one)
    # cancel equal parameters
    for a in list(ups):
        for i, b in enumerate(downs):
            if a == b:
                downs.pop(i)
                ups.remove(a)
                break
    return _sort_params(ups), _sort_params(downs), const


def _simplify_param(a: RatFunc):
    return a.constant_value() if a.is_constant() else a


def sum_to_hypergeometric(t: Expr | str, index: str = "k", style: str = "gamma") -> HyperTerm:
    """Hypergeometric notation for sum_{index >= 0} t (or a sum binder over t)."""
    if isinstance(t, str):
        t = parse_expr(t)
    t = expand_special(t)
    if isinstance(t, Mul) and any(isinstance(f, Sum) for f in t.factors):
        from .zeilberger import push_into_sum
        t = push_into_sum(t)
    if isinstance(t, Sum):
        index = t.index
        t = t.body
    ring = _ring(t, index)
    ratio = term_ratio(t, index, ring)
    ups, downs, z = _params_from_ratio(ratio, index)
    pre = product_form(subs(t, {index: 0}), None, style)
    return HyperTerm(tuple(_simplify_param(a) for a in ups),
                     tuple(_simplify_param(b) for b in downs),
                     _rf_expr(z), pre, index)


# ---------------------------------------------------------------------------
# power series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesClass:
    """Coefficients c * ratio-product of x^((start + M j)/p), j >= 0."""

    start: int
    first: object
    term: HyperTerm
    formula: Expr
    ratio: RatFunc


@dataclass(frozen=True)
class PuiseuxSeries:
    var: str
    p: int
    gap: int
    classes: tuple
    recurrence: object
    initial: dict
    exact_hypergeometric: bool

    def coefficient_list(self, order: int):
        """Exact coefficients through x^order (from the recurrence)."""
        return _expand(self, order)

    def __str__(self):
        if not self.exact_hypergeometric:
            return f"{self.recurrence} with initial values {self.initial}"
        parts = [f"sum({to_text(c.formula)}, {c.term.index}, 0, inf)" for c in self.classes]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"variable": self.var, "symmetry": self.p, "gap": self.gap,
                "hypergeometric": self.exact_hypergeometric,
                "classes": [{"start": str(Fraction(c.start, self.p)),
                             "term": c.term.to_json(), "pfq": str(c.term),
                             "coefficient": to_text(c.formula)} for c in self.classes],
                "recurrence": str(self.recurrence),
                "initial": {str(k): str(v) for k, v in self.initial.items()}}


def _symmetry_of_var(e: Expr, var: str) -> int:
    P = 1
    if isinstance(e, Pow) and isinstance(e.base, Sym) and e.base.name == var \
            and isinstance(e.exp, Num):
        P = lcm(P, e.exp.value.denominator)
    if isinstance(e, Call) and e.name == "sqrt" and isinstance(e.args[0], Sym) \
            and e.args[0].name == var:
        P = lcm(P, 2)
    for c in children(e):
        P = lcm(P, _symmetry_of_var(c, var))
    return P


def _substitute_power(e: Expr, var: str, t: str, P: int) -> Expr:
    if isinstance(e, Pow) and isinstance(e.base, Sym) and e.base.name == var \
            and isinstance(e.exp, Num):
        ex = e.exp.value * P
        return power(Sym(t), Num(ex)) if ex != 1 else Sym(t)
    if isinstance(e, Sym) and e.name == var:
        return power(Sym(t), Num(Fraction(P)))
    if isinstance(e, Call):
        return Call(e.name, tuple(_substitute_power(a, var, t, P) for a in e.args))
    if isinstance(e, Add):
        from .expr import add
        return add(*(_substitute_power(a, var, t, P) for a in e.terms))
    if isinstance(e, Mul):
        return mul(*(_substitute_power(a, var, t, P) for a in e.factors))
    if isinstance(e, Pow):
        return power(_substitute_power(e.base, var, t, P), _substitute_power(e.exp, var, t, P))
    if isinstance(e, ListExpr):
        return ListExpr(tuple(_substitute_power(a, var, t, P) for a in e.items))
    return e


def power_series(e: Expr | str, var: str = "x", index: str = "k", check_order: int | None = None):
    """Closed-form power series of e at 0 (M-fold hypergeometric when possible)."""
    if check_order is None:
        from .config import Config
        check_order = Config.from_env().series_check_order
    from .holonomic import de_from_expr, de_to_re
    if isinstance(e, str):
        e = parse_expr(e)
    e = expand_special(e)
    P = _symmetry_of_var(e, var)
    t = var if P == 1 else "_t"
    et = e if P == 1 else _substitute_power(e, var, t, P)
    de = de_from_expr(et, t)
    rec = de_to_re(de, "_k")
    nz = [j for j, c in enumerate(rec.coeffs) if not c.is_zero()]
    M = rec.order
    roots = _integer_roots(rec.coeffs[-1], "_k")
    bound = max([r + M for r in roots] + [M]) + M
    ser = series_truncated(et, bound, t)
    sring = _series_ring(ser)
    # zeros are kept: the recurrence cannot recover them at indicial indices
    init = {i: ser.coefficient(i) for i in range(min(ser.val, 0), bound + 1)}
    two_term = len(nz) == 2 and nz == [0, M]
    classes = []
    if two_term:
        seen = set()
        ok = True
        for s in sorted(i for i, c in init.items() if _nonzero(c) and c != 0):
            r = s % M
            if r in seen:
                continue
            seen.add(r)
            # later free indices in this class would break the single-term form
            if any(rr + M > s and (rr + M - s) % M == 0 for rr in roots):
                ok = False
                break
            classes.append(_class_term(rec, s, init[s], M, P, var, index, sring))
        two_term = ok
    if not two_term:
        classes = []
    ps = PuiseuxSeries(var, P, M, tuple(classes), rec, init, two_term)
    if check_order:
        _check_series(ps, e, var, check_order)
    return ps


def _series_ring(ser):
    for c in ser.coeffs:
        if isinstance(c, RatFunc):
            return c.variables
    return ()


def _integer_roots(q: RatFunc, name: str) -> list[int]:
    out = []
    for f, m in q.num.factor()[1]:
        r = RatFunc(f, _reduced=True)
        if r.degree(name) != 1 or len(r.used_variables()) != 1:
            continue
        cs = r.coeffs_in(name)
        root = -(cs[0] / cs[1]).constant_value()
        if root.denominator == 1:
            out.append(int(root))
    return out


def _class_term(rec, s, first, M, P, var, index, sring):
    from .holonomic import ring_of
    params = [v for v in rec.ring if v != "_k"]
    extra = first.used_variables() if isinstance(first, RatFunc) else ()
    ring = ring_of(params, extra, index, var)
    J = RatFunc.var(index, ring)
    k_at = J * M + s
    q0 = _emb_any(rec.coeffs[0], ring_of(ring, "_k")).substitute("_k", k_at.embed(ring_of(ring, "_k")))
    qM = _emb_any(rec.coeffs[-1], ring_of(ring, "_k")).substitute("_k", k_at.embed(ring_of(ring, "_k")))
    ratio = (-(q0 / qM)).embed(ring)
    ups, downs, c = _params_from_ratio(ratio, index)
    X = Sym(var)
    zexp = Fraction(M, P)
    z = mul(_rf_expr(c), power(X, Num(zexp))) if not c.is_one() else power(X, Num(zexp))
    firstr = first if isinstance(first, RatFunc) else RatFunc.const(first, ring)
    pre = mul(_rf_expr(firstr), power(X, Num(Fraction(s, P)))) if not firstr.is_one() \
        else power(X, Num(Fraction(s, P)))
    if s == 0:
        pre = _rf_expr(firstr)
    term = HyperTerm(tuple(_simplify_param(a) for a in ups),
                     tuple(_simplify_param(b) for b in downs), z, pre, index)
    formula = _closed_coefficient(term, firstr, c, s, M, P, var, index, ring)
    return SeriesClass(s, first, term, formula, ratio)


def _emb_any(c: RatFunc, ring):
    return c if c.variables == ring else c.embed(ring)


def _closed_coefficient(term, first, c, s, M, P, var, index, ring):
    """first * prod (a)_j / (prod (b)_j j!) * c^j * x^((s + M j)/P) in product form."""
    j = Sym(index)
    fac = [_rf_expr(first)]
    if not c.is_one():
        fac.append(power(_rf_expr(c), j))
    keep_up, keep_down = [], []
    for a in term.upper:
        if _factorial_friendly(a):
            fac.append(_poch_expr(a, j))
        else:
            keep_up.append(_poch_expr(a, j))
    for b in term.lower:
        if _factorial_friendly(b):
            fac.append(Pow(_poch_expr(b, j), Num(Fraction(-1))))
        else:
            keep_down.append(_poch_expr(b, j))
    fac.append(Pow(Call("factorial", (j,)), Num(Fraction(-1))))
    pf = product_form(mul(*fac), index, "factorial", ring=ring)
    xexp = parse_expr(f"({s} + {M}*{index})/{P}")
    xexp = _rf_expr(to_ratfunc(xexp, ring))
    parts = keep_up + [pf]
    if keep_down:
        parts.append(Pow(mul(*keep_down), Num(Fraction(-1))))
    parts.append(power(Sym(var), xexp))
    return mul(*parts)


def _factorial_friendly(a) -> bool:
    av = a.constant_value() if isinstance(a, RatFunc) and a.is_constant() else a
    return isinstance(av, Fraction) and av > 0 and av.denominator in (1, 2)


def _poch_expr(a, j: Expr) -> Expr:
    """(a)_j written through factorials/gammas when a is an integer or half-integer."""
    av = a.constant_value() if isinstance(a, RatFunc) and a.is_constant() else a
    if isinstance(av, Fraction):
        if av.denominator == 1 and av > 0:
            m = int(av)
            return mul(Call("factorial", (parse_expr(f"{j.name} + {m - 1}"),)),
                       Pow(Num(Fraction(_fact_int(m - 1))), Num(Fraction(-1))))
        if av.denominator == 2 and av > 0:
            m = int(av - Fraction(1, 2))
            # (m + 1/2)_j = (2j + 2m)! m! / (4^j (j + m)! (2m)!)
            return mul(Call("factorial", (parse_expr(f"2*{j.name} + {2 * m}"),)),
                       Num(Fraction(_fact_int(m), _fact_int(2 * m))),
                       Pow(Num(Fraction(4)), neg_sym(j)),
                       Pow(Call("factorial", (parse_expr(f"{j.name} + {m}"),)),
                           Num(Fraction(-1))))
    ae = _rf_expr(a) if isinstance(a, RatFunc) else Num(Fraction(av))
    return Call("pochhammer", (ae, j))


def neg_sym(j: Sym) -> Expr:
    return mul(Num(Fraction(-1)), j)


def _expand(ps: PuiseuxSeries, order: int) -> dict:
    """exponent -> coefficient through x^order."""
    P, M = ps.p, ps.gap
    out = {}
    if ps.exact_hypergeometric:
        for cl in ps.classes:
            ring = cl.ratio.variables
            index = cl.term.index
            val = _emb_any(cl.first, ring) if isinstance(cl.first, RatFunc) \
                else RatFunc.const(cl.first, ring)
            i, jj = cl.start, 0
            while Fraction(i, P) <= order and not val.is_zero():
                out[Fraction(i, P)] = val
                val = val * cl.ratio.evaluate({index: jj})
                jj += 1
                i += M
        return out
    from .series_solver import iterate_re
    vals = iterate_re(ps.recurrence, dict(ps.initial), order * P)
    return {Fraction(i, P): v for i, v in vals.items() if v != 0}


def _check_series(ps: PuiseuxSeries, e: Expr, var: str, order: int):
    ser = series_truncated(e, order, var)
    got = ps.coefficient_list(order)
    for ex, c in ser.terms():
        if ex > order:
            continue
        g = got.get(ex, 0)
        if not _same(g, c):
            raise ExprError(f"power_series reconstruction failed at x^{ex}: {g} vs {c}")
    for ex, g in got.items():
        if ex <= order and g != 0 and _nonzero(g) and not _same(ser.coefficient(ex), g):
            raise ExprError(f"power_series reconstruction failed at x^{ex}")


def _same(a, b):
    if isinstance(a, RatFunc) and isinstance(b, RatFunc) and a.variables != b.variables:
        from .holonomic import ring_of
        ring = ring_of(a.variables, b.variables)
        return a.embed(ring) == b.embed(ring)
    if isinstance(a, RatFunc) and not isinstance(b, RatFunc):
        return a.is_constant() and a.constant_value() == b
    if isinstance(b, RatFunc) and not isinstance(a, RatFunc):
        return b.is_constant() and b.constant_value() == a
    return a == b


def _nonzero(g):
    return not (isinstance(g, RatFunc) and g.is_zero())
