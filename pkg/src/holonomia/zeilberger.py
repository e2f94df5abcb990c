"""Gosper's algorithm, Zeilberger's creative telescoping and a certificate checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .config import Config
from .algebra import RatFunc, nullspace_vector
from .expr import (Call, Expr, Inf, Mul, Num, Sum, Sym, evaluate, expand_special,
                   free_symbols, mul, parse_expr, subs, to_ratfunc, to_text, ExprError)
from .holonomic import HolonomicError, HolonomicRE, ring_of
from .hyper import NotHypergeometric, term_ratio

__all__ = ["ProperTerm", "TelescopeResult", "GosperResult", "NoTelescoper", "gosper",
           "zeilberger", "verify_certificate", "push_into_sum", "brute_force_sum",
           "default_max_order", "proper_term"]


class NoTelescoper(HolonomicError):
    def __init__(self, max_order: int):
        super().__init__(f"no telescoper of order <= {max_order}; retry with a larger max_order")
        self.max_order = max_order


def default_max_order() -> int:
    return Config.from_env().zeilberger_max_order


# ---------------------------------------------------------------------------
# result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProperTerm:
    term: Expr
    n: str
    k: str
    ring: tuple
    ratio_n: RatFunc
    ratio_k: RatFunc


@dataclass(frozen=True)
class GosperResult:
    """Antidifference G_k = R(k) t_k, or a non-existence report."""

    term: Expr
    index: str
    certificate: RatFunc | None
    degree_bound: int
    report: str = ""

    @property
    def summable(self) -> bool:
        return self.certificate is not None

    def antidifference(self) -> Expr | None:
        if self.certificate is None:
            return None
        return mul(parse_expr(str(self.certificate)), self.term)

    def __str__(self):
        if self.certificate is None:
            return f"not Gosper-summable: {self.report}"
        return f"G = ({self.certificate}) * ({to_text(self.term)})"

    def to_json(self) -> dict:
        return {"summable": self.summable, "degree_bound": self.degree_bound,
                "certificate": None if self.certificate is None else
                {"num": str(RatFunc(self.certificate.num, _reduced=True)),
                 "den": str(RatFunc(self.certificate.den, _reduced=True))},
                "report": self.report}


@dataclass(frozen=True)
class TelescopeResult:
    """sum_j sigma_j(n) F(n+j,k) = G(n,k+1) - G(n,k) with G = R F."""

    recurrence: HolonomicRE
    certificate: RatFunc
    order: int
    term: Expr
    n: str
    k: str
    warnings: tuple = field(default=())

    @property
    def sigma(self):
        return self.recurrence.coeffs

    def __str__(self):
        return str(self.recurrence)

    def to_json(self, verified: bool | None = None) -> dict:
        out = {"order": self.order, "sigma": [str(s) for s in self.sigma],
               "recurrence": str(self.recurrence),
               "certificate": {"num": str(RatFunc(self.certificate.num, _reduced=True)),
                               "den": str(RatFunc(self.certificate.den, _reduced=True))},
               "warnings": list(self.warnings)}
        if verified is not None:
            out["verified"] = verified
        return out


# ---------------------------------------------------------------------------
# summation input handling
# ---------------------------------------------------------------------------

def _fresh(taken: set, base: str = "k") -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def push_into_sum(e: Expr | str) -> Sum:
    """Rewrite e as a single sum binder (pfq becomes a sum of hyperterms)."""
    if isinstance(e, str):
        e = parse_expr(e)
    e = expand_special(e)
    if isinstance(e, Sum):
        return e
    if isinstance(e, Call) and e.name == "pfq":
        k = _fresh(free_symbols(e))
        body = Call("hyperterm", (e.args[0], e.args[1], e.args[2], Sym(k)))
        return Sum(body, k, Num(Fraction(0)), Inf(1))
    if isinstance(e, Mul):
        inner = [f for f in e.factors if isinstance(f, Sum)
                 or (isinstance(f, Call) and f.name == "pfq")]
        if len(inner) != 1:
            raise HolonomicError(f"expected exactly one sum or pfq factor in {to_text(e)}")
        s = push_into_sum(inner[0])
        others = [f for f in e.factors if f is not inner[0]]
        taken = set().union(*(free_symbols(f) for f in others)) if others else set()
        if s.index in taken:
            k = _fresh(taken | free_symbols(s.body))
            s = Sum(subs(s.body, {s.index: Sym(k)}), k, s.lo, s.hi)
        return Sum(mul(*others, s.body), s.index, s.lo, s.hi)
    raise HolonomicError(f"{to_text(e)} is not a sum")


def proper_term(F: Expr | str, n: str, k: str, ring=None) -> ProperTerm:
    if isinstance(F, str):
        F = parse_expr(F)
    F = expand_special(F)
    ring = ring_of(free_symbols(F), n, k, ring or ())
    try:
        rn = term_ratio(F, n, ring)
        rk = term_ratio(F, k, ring)
    except NotHypergeometric as exc:
        raise HolonomicError(f"summand is not a hypergeometric term in ({n}, {k}): {exc}")
    return ProperTerm(F, n, k, ring, rn, rk)


# ---------------------------------------------------------------------------
# polynomial helpers (coefficients over Z[params], variable k)
# ---------------------------------------------------------------------------

def _poly(r: RatFunc):
    if not r.den.is_constant():
        raise HolonomicError("expected a polynomial")
    return r


def _deg(p: RatFunc, k: str) -> int:
    return -1 if p.is_zero() else int(p.degree(k))


def _coeff(p: RatFunc, k: str, i: int) -> RatFunc:
    cs = p.coeffs_in(k)
    return cs[i] if i < len(cs) else p * 0


def _shift_match(f: RatFunc, g: RatFunc, k: str):
    """Integer h with g(k+h) proportional to f(k), or None."""
    m = _deg(f, k)
    if m < 1 or _deg(g, k) != m:
        return None
    fm, gm = _coeff(f, k, m), _coeff(g, k, m)
    hq = (_coeff(f, k, m - 1) / fm - _coeff(g, k, m - 1) / gm) / m
    if not hq.is_constant():
        return None
    h = hq.constant_value()
    if h.denominator != 1:
        return None
    h = int(h)
    if g.shift(k, h) * fm == f * gm:
        return h
    return None


def _factors(p: RatFunc, k: str):
    """Irreducible factors of p that depend on k, with multiplicity."""
    _, facs = p.num.factor()
    out = []
    for f, m in facs:
        r = RatFunc(f, _reduced=True)
        if not r.free_of(k):
            out.extend([r] * m)
    return out


def gosper_petkovsek(a: RatFunc, b: RatFunc, k: str):
    """Split a/b as (c(k+1)/c(k)) * (A/B) with gcd(A(k), B(k+h)) = 1 for h >= 0."""
    one = a * 0 + 1
    c = one
    while True:
        hit = None
        for f in _factors(a, k):
            for g in _factors(b, k):
                h = _shift_match(f, g, k)
                if h is not None and h >= 0:
                    hit = (f, h)
                    break
            if hit:
                break
        if hit is None:
            return a, b, c
        f, h = hit
        a = a / f
        b = b / f.shift(k, -h)
        for i in range(1, h + 1):
            c = c * f.shift(k, -i)


def _degree_bound(A: RatFunc, Bm: RatFunc, c_deg: int, k: str) -> int:
    """Degree bound for x in A(k) x(k+1) - Bm(k) x(k) = c(k)."""
    plus = A + Bm
    minus = A - Bm
    lp, lm = _deg(plus, k), _deg(minus, k)
    if lp <= lm:
        return c_deg - lm
    d = c_deg - lp + 1
    if lp >= 1:
        d0 = -2 * _coeff(minus, k, lp - 1) / _coeff(plus, k, lp)
        if d0.is_constant():
            v = d0.constant_value()
            if v.denominator == 1 and v > d:
                d = int(v)
    return d


def _rows_in_k(exprs, k: str, ncols: int):
    """Coefficient rows: exprs[col] is a polynomial in k; one row per power of k."""
    top = max((_deg(e, k) for e in exprs), default=-1)
    rows = []
    for i in range(top + 1):
        rows.append([_coeff(e, k, i) for e in exprs])
    return rows


def _solve_homogeneous(cols, k: str, accept):
    """Nonzero solution vector of sum_c v_c * cols[c] = 0 identically in k."""
    rows = _rows_in_k(cols, k, len(cols))
    if not rows:
        return None
    ints = []
    for row in rows:
        L = 1
        for e in row:
            if not e.den.is_constant():
                raise HolonomicError("non-polynomial coefficient in the telescoping system")
            L = lcm(L, int(e.den.leading_coefficient()))
        ints.append([(e * L).num for e in row])
    sol = nullspace_vector(ints, len(cols), accept)
    if sol is None:
        return None
    return [RatFunc(s, _reduced=True) for s in sol]


# ---------------------------------------------------------------------------
# Gosper
# ---------------------------------------------------------------------------

def gosper(t: Expr | str, k: str = "k") -> GosperResult:
    """Hypergeometric antidifference of t with respect to k (Gosper's algorithm)."""
    if isinstance(t, str):
        t = parse_expr(t)
    t = expand_special(t)
    ring = ring_of(free_symbols(t), k)
    ratio = term_ratio(t, k, ring)
    a = RatFunc(ratio.num, _reduced=True)
    b = RatFunc(ratio.den, _reduced=True)
    A, B, c = gosper_petkovsek(a, b, k)
    Bm = B.shift(k, -1)
    d = _degree_bound(A, Bm, _deg(c, k), k)
    if d < 0:
        return GosperResult(t, k, None, d, f"degree bound {d} is negative")
    K = RatFunc.var(k, ring)
    cols = [A * K.shift(k, 1) ** i - Bm * K ** i for i in range(d + 1)] + [-c]
    sol = _solve_homogeneous(cols, k, lambda v: not v[-1].is_zero())
    if sol is None:
        return GosperResult(t, k, None, d,
                            f"linear system in {d + 1} unknowns has no solution")
    x = sum((sol[i] / sol[-1] * K ** i for i in range(d + 1)), K * 0)
    R = Bm * x / c
    return GosperResult(t, k, R, d)


# ---------------------------------------------------------------------------
# Zeilberger
# ---------------------------------------------------------------------------

def _support_warnings(pt: ProperTerm, bounds) -> tuple:
    if bounds is None:
        return ()
    lo, hi = bounds
    out = []
    ring = pt.ring
    for side, b in (("lower", lo), ("upper", hi)):
        if isinstance(b, Inf) or b is None:
            continue
        try:
            val = to_ratfunc(b, ring)
        except ExprError:
            out.append(f"{side} bound {to_text(b)} is not rational; boundary terms unchecked")
            continue
        r = pt.ratio_k
        at = val - 1 if side == "lower" else val
        num = RatFunc(r.num, _reduced=True).substitute(pt.k, at)
        den = RatFunc(r.den, _reduced=True).substitute(pt.k, at)
        natural = den.is_zero() if side == "lower" else num.is_zero()
        if not natural:
            out.append(f"{side} bound {to_text(b)} is not a natural boundary of the summand; "
                       f"the recurrence may be inhomogeneous")
    return tuple(out)


def zeilberger(F: Expr | str, n: str = "n", k: str = "k", max_order: int | None = None,
               bounds=None, min_order: int = 1) -> TelescopeResult:
    """Holonomic recurrence in n for sum_k F(n,k) with a rational certificate."""
    if max_order is None:
        max_order = default_max_order()
    pt = proper_term(F, n, k)
    ring = pt.ring
    K = RatFunc.var(k, ring)
    one = K * 0 + 1
    # r_j = F(n+j,k)/F(n,k)
    rs = [one]
    for j in range(1, max_order + 1):
        rs.append(rs[-1] * pt.ratio_n.shift(n, j - 1))
    warnings = _support_warnings(pt, bounds)
    for J in range(max(min_order, 1), max_order + 1):
        q = one
        for r in rs[:J + 1]:
            d = RatFunc(r.den, _reduced=True)
            q = q * d / RatFunc(q.num.gcd(r.den), _reduced=True)
        ps = [_poly(r * q) for r in rs[:J + 1]]
        ratio = pt.ratio_k * q / q.shift(k, 1)
        a = RatFunc(ratio.num, _reduced=True)
        b = RatFunc(ratio.den, _reduced=True)
        A, B, c = gosper_petkovsek(a, b, k)
        Bm = B.shift(k, -1)
        cdeg = max(_deg(p, k) for p in ps) + _deg(c, k)
        d = _degree_bound(A, Bm, cdeg, k)
        if d < 0:
            continue
        cols = [-c * p for p in ps] + \
            [A * K.shift(k, 1) ** i - Bm * K ** i for i in range(d + 1)]
        sol = _solve_homogeneous(cols, k, lambda v: any(not s.is_zero() for s in v[:J + 1]))
        if sol is None:
            continue
        sigma = sol[:J + 1]
        x = sum((sol[J + 1 + i] * K ** i for i in range(d + 1)), K * 0)
        R = Bm * x / (c * q)
        lo = next(i for i, sg in enumerate(sigma) if not sg.is_zero())
        if lo:
            # sum_{j>=lo} sigma_j F(n+j) telescopes; move to n -> n - lo
            sigma = [sg.shift(n, -lo) for sg in sigma[lo:]]
            R = R.shift(n, -lo) / rs[lo].shift(n, -lo)
        rec = HolonomicRE.make(n, sigma, ring=ring)
        R = R * _scale_between(sigma, rec.coeffs)
        return TelescopeResult(rec, R, rec.order, pt.term, n, k, warnings)
    raise NoTelescoper(max_order)


def _scale_between(old, new) -> RatFunc:
    """s with new = s * old (after stripping zero ends)."""
    for o in old:
        if not o.is_zero():
            break
    for nw in new:
        if not nw.is_zero():
            break
    return nw / o


# ---------------------------------------------------------------------------
# checking
# ---------------------------------------------------------------------------

def verify_certificate(F: Expr | str, result: TelescopeResult):
    """(ok, residual) for sum sigma_j F(n+j,k)/F(n,k) - (R(k+1) F(k+1)/F(k) - R(k))."""
    if isinstance(F, str):
        F = parse_expr(F)
    F = expand_special(F)
    n, k = result.n, result.k
    ring = ring_of(free_symbols(F), n, k, result.certificate.variables,
                   result.recurrence.ring)
    rn = term_ratio(F, n, ring)
    rk = term_ratio(F, k, ring)
    R = result.certificate.embed(ring) if result.certificate.variables != ring \
        else result.certificate
    # the recurrence may have been re-indexed so that its lowest shift is 0
    lhs = R * 0
    prod = lhs + 1
    for j, s in enumerate(result.recurrence.coeffs):
        s = s.embed(ring) if s.variables != ring else s
        lhs = lhs + s * prod
        prod = prod * rn.shift(n, j)
    rhs = R.shift(k, 1) * rk - R
    res = lhs - rhs
    return res.is_zero(), res


def brute_force_sum(s: Sum | Expr | str, env: dict, window: tuple | None = None) -> Fraction:
    """Direct evaluation of a finite sum at concrete parameter values.

    Infinite bounds need ``window`` = (lo, hi), the range over which the summand
    is known to be supported.
    """
    if isinstance(s, str):
        s = parse_expr(s)
    if not isinstance(s, Sum):
        s = push_into_sum(s)
    lo = window[0] if window and isinstance(s.lo, Inf) else None
    hi = window[1] if window and isinstance(s.hi, Inf) else None
    if lo is None:
        if isinstance(s.lo, Inf):
            raise HolonomicError("infinite lower bound needs a window")
        lo = evaluate(s.lo, env)
    if hi is None:
        if isinstance(s.hi, Inf):
            raise HolonomicError("infinite upper bound needs a window")
        hi = evaluate(s.hi, env)
    total = Fraction(0)
    j = int(lo)
    while j <= hi:
        e = dict(env)
        e[s.index] = j
        total += evaluate(s.body, e)
        j += 1
    return total
