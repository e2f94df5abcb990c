"""Holonomic differential and recurrence operators and their closure algorithms.

A differential operator is stored as the coefficient vector (p_0, ..., p_m) of
sum_j p_j(x) D^j, a recurrence operator as (q_0, ..., q_M) of
sum_j q_j(k) a_{k+j}.  Coefficients are polynomial RatFuncs over a ring that
contains the running variable and every parameter.

The closure algorithms all work the same way: represent the new function (or
sequence) and its derivatives (shifts) as coordinate vectors over a finite
basis built from the inputs' own derivatives, rewrite with the input equations
and stop at the first linear dependency.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import DependencyFinder, RatFunc, _lc
from .expr import (Add, Call, Expr, Mul, Num, Pow, Sum, Sym, ATOMS, TruncSeries, expand_special, free_symbols, is_rational_in,
                   parse_expr, subs, to_ratfunc, to_text)

__all__ = ["HolonomicDE", "HolonomicRE", "HolonomicError", "sum_de", "product_de", "sum_re",
           "product_re", "substitute_rational_de", "de_from_expr", "de_to_re", "re_to_de",
           "re_for_expr", "re_multisection", "family_re", "parse_de", "parse_re", "de_residual",
           "re_residual", "normalize_coeffs", "linear_reindex", "shift_re", "reverse_re",
           "pfq_de", "ring_of"]


class HolonomicError(ValueError):
    pass


def ring_of(*names) -> tuple[str, ...]:
    out = set()
    for n in names:
        if isinstance(n, str):
            out.add(n)
        else:
            out |= set(n)
    return tuple(sorted(out))


def _embed(c: RatFunc, ring) -> RatFunc:
    return c if c.variables == tuple(ring) else c.embed(ring)


def normalize_coeffs(coeffs, content: str = "full") -> list[RatFunc]:
    """Clear denominators, remove common content, make the last nonzero entry's
    leading coefficient positive.  ``content`` is "full" (polynomial gcd) or
    "numeric" (integer content only)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if not coeffs:
        raise HolonomicError("zero operator")
    ctx = coeffs[0].ctx
    L = ctx.constant(1)
    for c in coeffs:
        if not c.den.is_one():
            L = L * (c.den / L.gcd(c.den))
    nums = [c.num * (L / c.den) for c in coeffs]
    g = None
    for p in nums:
        if p.is_zero():
            continue
        if content == "full":
            g = p if g is None else g.gcd(p)
        else:
            from math import gcd
            cont = 0
            for _, cf in p.terms():
                cont = gcd(cont, int(cf))
            g = cont if g is None else gcd(g, cont)
    if content == "full":
        if _lc(g) < 0:
            g = -g
        nums = [p / g if not p.is_zero() else p for p in nums]
    else:
        nums = [p / g if not p.is_zero() else p for p in nums]
    if _lc(nums[-1]) < 0:
        nums = [-p for p in nums]
    return [RatFunc(p, _reduced=True) for p in nums]


# ---------------------------------------------------------------------------
# operator types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HolonomicDE:
    """sum_j coeffs[j] * D^j f = 0 in the variable ``var``."""

    var: str
    coeffs: tuple

    @staticmethod
    def make(var: str, coeffs, content: str = "full", ring=None) -> "HolonomicDE":
        coeffs = list(coeffs)
        if ring is None:
            ring = ring_of(var, *(c.used_variables() for c in coeffs))
        coeffs = [_embed(c, ring) for c in coeffs]
        return HolonomicDE(var, tuple(normalize_coeffs(coeffs, content)))

    @property
    def ring(self) -> tuple[str, ...]:
        return self.coeffs[0].variables

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(v for v in self.ring if v != self.var)

    def embed(self, ring) -> "HolonomicDE":
        return HolonomicDE(self.var, tuple(_embed(c, ring) for c in self.coeffs))

    def equivalent(self, other: "HolonomicDE") -> bool:
        if self.var != other.var or self.order != other.order:
            return False
        ring = ring_of(self.ring, other.ring)
        a = normalize_coeffs([_embed(c, ring) for c in self.coeffs])
        b = normalize_coeffs([_embed(c, ring) for c in other.coeffs])
        return all(x == y for x, y in zip(a, b))

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            op = "f" if j == 0 else ("Df" if j == 1 else f"D^{j}f")
            parts.append(f"({c})*{op}")
        return " + ".join(parts) + " = 0"

    def __eq__(self, other):
        if not isinstance(other, HolonomicDE):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def to_json(self) -> dict:
        return {"variable": self.var, "order": self.order,
                "coefficients": [str(c) for c in self.coeffs]}


@dataclass(frozen=True, eq=False)
class HolonomicRE:
    """sum_j coeffs[j] * a_{k+j} = 0 in the index ``index``."""

    index: str
    coeffs: tuple

    @staticmethod
    def make(index: str, coeffs, content: str = "full", ring=None) -> "HolonomicRE":
        coeffs = list(coeffs)
        if ring is None:
            ring = ring_of(index, *(c.used_variables() for c in coeffs))
        coeffs = [_embed(c, ring) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        s = 0
        while s < len(coeffs) and coeffs[s].is_zero():
            s += 1
        if s == len(coeffs):
            raise HolonomicError("zero operator")
        if s:
            coeffs = [c.shift(index, -s) for c in coeffs[s:]]
        return HolonomicRE(index, tuple(normalize_coeffs(coeffs, content)))

    @property
    def ring(self) -> tuple[str, ...]:
        return self.coeffs[0].variables

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(v for v in self.ring if v != self.index)

    def embed(self, ring) -> "HolonomicRE":
        return HolonomicRE(self.index, tuple(_embed(c, ring) for c in self.coeffs))

    def rename(self, index: str) -> "HolonomicRE":
        if index == self.index:
            return self
        ring = ring_of(index, self.params)
        if index in self.params:
            raise HolonomicError(f"index {index} clashes with a parameter")
        out = []
        for c in self.coeffs:
            c = _embed(c, ring_of(self.ring, index))
            c = c.substitute(self.index, RatFunc.var(index, c.variables))
            out.append(_embed(c, ring))
        return HolonomicRE(index, tuple(out))

    def equivalent(self, other: "HolonomicRE") -> bool:
        if self.index != other.index or self.order != other.order:
            return False
        ring = ring_of(self.ring, other.ring)
        a = normalize_coeffs([_embed(c, ring) for c in self.coeffs])
        b = normalize_coeffs([_embed(c, ring) for c in other.coeffs])
        return all(x == y for x, y in zip(a, b))

    def validity_note(self) -> list[int]:
        """Integer k where the leading or trailing coefficient vanishes."""
        pts: set[int] = set()
        for c in (self.coeffs[0], self.coeffs[-1]):
            for f, _ in c.num.factor()[1]:
                r = RatFunc(f, _reduced=True)
                if r.degree(self.index) != 1:
                    continue
                if any(not r.free_of(p) for p in self.params):
                    continue
                cs = r.coeffs_in(self.index)
                root = -(cs[0] / cs[1]).constant_value()
                if root.denominator == 1:
                    pts.add(int(root))
        return sorted(pts)

    def __str__(self):
        parts = []
        k = self.index
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            a = f"a[{k}]" if j == 0 else f"a[{k}+{j}]"
            parts.append(f"({c})*{a}")
        return " + ".join(parts) + " = 0"

    def __eq__(self, other):
        if not isinstance(other, HolonomicRE):
            return NotImplemented
        return self.index == other.index and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.index, self.coeffs))

    def to_json(self) -> dict:
        return {"index": self.index, "order": self.order,
                "coefficients": [str(c) for c in self.coeffs],
                "validity_note": self.validity_note()}


# ---------------------------------------------------------------------------
# operator text parsing
# ---------------------------------------------------------------------------

def _linear_form(text: str, placeholders: list[str], var_names: set[str]):
    if "==" in text:
        lhs, rhs = text.split("==", 1)
        text = f"({lhs}) - ({rhs})"
    elif "=" in text:
        lhs, rhs = text.split("=", 1)
        text = f"({lhs}) - ({rhs})"
    e = parse_expr(text)
    names = free_symbols(e)
    used = sorted(p for p in placeholders if p in names)
    if not used:
        raise HolonomicError("operator text contains no unknown function terms")
    ring = ring_of(names | var_names)
    r = to_ratfunc(e, ring)
    out = {}
    rest = r
    for p in used:
        cs = rest.coeffs_in(p)
        if len(cs) > 2:
            raise HolonomicError("operator text is not linear in the unknown function")
        out[p] = cs[1] if len(cs) > 1 else RatFunc.const(0, ring)
        rest = cs[0]
    if not rest.is_zero():
        raise HolonomicError("operator text has an inhomogeneous part")
    base = ring_of(var_names, *(c.used_variables() for c in out.values()))
    return {p: _embed(c, base) for p, c in out.items()}, base


def parse_de(text: str, var: str = "x", fname: str = "f") -> HolonomicDE:
    """Read ``f'' + x*f = 0``, ``D^2f - x*f``, ``f''[x] ...`` style text."""
    t = re.sub(rf"\b{fname}\b\s*('+)\s*(\[\s*{var}\s*\]|\(\s*{var}\s*\))?",
               lambda m: f"__d{len(m.group(1))}", text)
    t = re.sub(rf"\bD\s*\^\s*(\d+)\s*\*?\s*{fname}\b(\s*(\[\s*{var}\s*\]|\(\s*{var}\s*\)))?",
               lambda m: f"__d{m.group(1)}", t)
    t = re.sub(rf"\bD\s*\*?\s*{fname}\b(\s*(\[\s*{var}\s*\]|\(\s*{var}\s*\)))?", "__d1", t)
    t = re.sub(rf"\b{fname}\b(\s*(\[\s*{var}\s*\]|\(\s*{var}\s*\)))?", "__d0", t)
    ph = sorted(set(re.findall(r"__d\d+", t)))
    form, ring = _linear_form(t, ph, {var})
    m = max(int(p[3:]) for p in form)
    coeffs = [form.get(f"__d{j}", RatFunc.const(0, ring)) for j in range(m + 1)]
    return HolonomicDE.make(var, coeffs, ring=ring)


def parse_re(text: str, index: str = "k", seq: str | None = None,
             content: str = "full") -> HolonomicRE:
    """Read ``(k+1)*a[k+1] - a[k] = 0`` style text (any sequence letter)."""
    name = seq or r"[A-Za-z_]\w*"

    def repl(m):
        off = m.group(2) or m.group(3)
        off = int(off.replace(" ", "")) if off else 0
        return f"__s{off + 1000}"

    t = re.sub(rf"\b({name})\s*\[\s*(?:{index}\s*([+-]\s*\d+)?|(\d+)\s*\+\s*{index})\s*\]",
               repl, text)
    ph = sorted(set(re.findall(r"__s\d+", t)))
    if not ph:
        raise HolonomicError(f"no sequence terms a[{index}+j] found")
    form, ring = _linear_form(t, ph, {index})
    offs = sorted(int(p[3:]) - 1000 for p in form)
    lo = offs[0]
    coeffs = [RatFunc.const(0, ring)] * (offs[-1] - lo + 1)
    for p, c in form.items():
        coeffs[int(p[3:]) - 1000 - lo] = c
    return HolonomicRE.make(index, coeffs, content=content, ring=ring)


# ---------------------------------------------------------------------------
# closure machinery
# ---------------------------------------------------------------------------

def _dependency(start, step, max_order: int, what: str):
    finder = DependencyFinder()
    v = start
    for _ in range(max_order + 1):
        dep = finder.add(v)
        if dep is not None:
            return dep
        v = step(v)
    raise HolonomicError(f"no {what} dependency up to order {max_order}")


def _common_de(a: HolonomicDE, b: HolonomicDE):
    if a.var != b.var:
        raise HolonomicError(f"variable mismatch: {a.var} vs {b.var}")
    ring = ring_of(a.ring, b.ring)
    return a.embed(ring), b.embed(ring), ring


def _reduction(coeffs):
    lead = coeffs[-1]
    return [-(c / lead) for c in coeffs[:-1]]


def _de_step_block(v, red, var):
    """Derivative of sum_i v_i f^(i) in the basis f..f^(m-1)."""
    m = len(v)
    out = [c.diff(var) for c in v]
    top = v[-1]
    for i in range(m - 1):
        out[i + 1] = out[i + 1] + v[i]
    if not top.is_zero():
        for i in range(m):
            out[i] = out[i] + top * red[i]
    return out


def sum_de(a: HolonomicDE, b: HolonomicDE) -> HolonomicDE:
    a, b, ring = _common_de(a, b)
    ra, rb = _reduction(list(a.coeffs)), _reduction(list(b.coeffs))
    ma, mb = a.order, b.order
    one, zero = RatFunc.const(1, ring), RatFunc.const(0, ring)
    start = [one] + [zero] * (ma - 1) + [one] + [zero] * (mb - 1)

    def step(v):
        return _de_step_block(v[:ma], ra, a.var) + _de_step_block(v[ma:], rb, a.var)

    dep = _dependency(start, step, ma + mb, "sum")
    return HolonomicDE.make(a.var, dep, ring=ring)


def _product_step(v, ma, mb, ra, rb, diff_or_shift, leibniz: bool):
    """One derivative (leibniz=True) or shift step on the basis f^(i) g^(j)."""
    zero = v[0] * 0
    out = [diff_or_shift(c) for c in v] if leibniz else [zero] * (ma * mb)

    def put(i, j, c):
        # add c * f^(i) g^(j), reducing i == ma / j == mb
        if c.is_zero():
            return
        if i == ma:
            for ii in range(ma):
                put(ii, j, c * ra[ii])
            return
        if j == mb:
            for jj in range(mb):
                put(i, jj, c * rb[jj])
            return
        out[i * mb + j] = out[i * mb + j] + c

    for i in range(ma):
        for j in range(mb):
            c = v[i * mb + j]
            if c.is_zero():
                continue
            if leibniz:
                put(i + 1, j, c)
                put(i, j + 1, c)
            else:
                put(i + 1, j + 1, diff_or_shift(c))
    return out


def product_de(a: HolonomicDE, b: HolonomicDE) -> HolonomicDE:
    a, b, ring = _common_de(a, b)
    ra, rb = _reduction(list(a.coeffs)), _reduction(list(b.coeffs))
    ma, mb = a.order, b.order
    if ma == 0 or mb == 0:
        raise HolonomicError("order-zero operator")
    zero = RatFunc.const(0, ring)
    start = [zero] * (ma * mb)
    start[0] = RatFunc.const(1, ring)

    def step(v):
        return _product_step(v, ma, mb, ra, rb, lambda c: c.diff(a.var), True)

    dep = _dependency(start, step, ma * mb, "product")
    return HolonomicDE.make(a.var, dep, ring=ring)


def _common_re(a: HolonomicRE, b: HolonomicRE):
    if a.index != b.index:
        raise HolonomicError(f"index mismatch: {a.index} vs {b.index}")
    ring = ring_of(a.ring, b.ring)
    return a.embed(ring), b.embed(ring), ring


def _re_step_block(v, red, index):
    """Shift of sum_i v_i(k) a_{k+i} in the basis a_k..a_{k+M-1}."""
    m = len(v)
    sh = [c.shift(index, 1) for c in v]
    out = [v[0] * 0 for _ in range(m)]
    for i in range(m - 1):
        out[i + 1] = sh[i]
    top = sh[-1]
    if not top.is_zero():
        for i in range(m):
            out[i] = out[i] + top * red[i]
    return out


def sum_re(a: HolonomicRE, b: HolonomicRE) -> HolonomicRE:
    a, b, ring = _common_re(a, b)
    ra, rb = _reduction(list(a.coeffs)), _reduction(list(b.coeffs))
    ma, mb = a.order, b.order
    one, zero = RatFunc.const(1, ring), RatFunc.const(0, ring)
    start = [one] + [zero] * (ma - 1) + [one] + [zero] * (mb - 1)

    def step(v):
        return _re_step_block(v[:ma], ra, a.index) + _re_step_block(v[ma:], rb, a.index)

    dep = _dependency(start, step, ma + mb, "sum")
    return HolonomicRE.make(a.index, dep, ring=ring)


def product_re(a: HolonomicRE, b: HolonomicRE) -> HolonomicRE:
    a, b, ring = _common_re(a, b)
    ra, rb = _reduction(list(a.coeffs)), _reduction(list(b.coeffs))
    ma, mb = a.order, b.order
    zero = RatFunc.const(0, ring)
    start = [zero] * (ma * mb)
    start[0] = RatFunc.const(1, ring)
    idx = a.index

    def step(v):
        return _product_step(v, ma, mb, ra, rb, lambda c: c.shift(idx, 1), False)

    dep = _dependency(start, step, ma * mb, "product")
    return HolonomicRE.make(a.index, dep, ring=ring)


def substitute_rational_de(de: HolonomicDE, r: RatFunc) -> HolonomicDE:
    """Operator annihilating f(r(x)) when ``de`` annihilates f."""
    var = de.var
    ring = ring_of(de.ring, r.used_variables(), var)
    r = _embed(r, ring)
    if r.free_of(var):
        raise HolonomicError("substitution by a constant")
    de = de.embed(ring)
    X = RatFunc.var(var, ring)
    if r == X:
        return de
    rd = r.diff(var)
    comp = [c.substitute(var, r) for c in de.coeffs]
    red = _reduction(comp)
    m = de.order
    zero = RatFunc.const(0, ring)
    start = [RatFunc.const(1, ring)] + [zero] * (m - 1)

    def step(v):
        out = [c.diff(var) for c in v]
        for i in range(m - 1):
            out[i + 1] = out[i + 1] + v[i] * rd
        top = v[-1] * rd
        if not top.is_zero():
            for i in range(m):
                out[i] = out[i] + top * red[i]
        return out

    dep = _dependency(start, step, m, "substitution")
    return HolonomicDE.make(var, dep, ring=ring)


# ---------------------------------------------------------------------------
# expression -> DE
# ---------------------------------------------------------------------------

def _stirling2(n: int, k: int) -> int:
    return sum((-1) ** (k - j) * comb(k, j) * j ** n for j in range(k + 1)) // _fact(k)


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def theta_to_de(theta_polys, var: str, ring) -> list[RatFunc]:
    """Convert sum_i x^i P_i(theta) (theta = x D) into D-coefficients."""
    X = RatFunc.var(var, ring)
    out: dict[int, RatFunc] = {}
    for shift_pow, poly in theta_polys:
        for k, c in enumerate(poly):
            if c.is_zero():
                continue
            for j in range(k + 1):
                s = _stirling2(k, j)
                if s:
                    out[j] = out.get(j, RatFunc.const(0, ring)) + c * s * X ** (j + shift_pow)
    m = max(out)
    return [out.get(j, RatFunc.const(0, ring)) for j in range(m + 1)]


def _poly_from_roots(shifts, one):
    """Coefficients (ascending) of prod (t + s)."""
    poly = [one]
    for s in shifts:
        new = [one * 0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i] = new[i] + c * s
            new[i + 1] = new[i + 1] + c
        poly = new
    return poly


def pfq_de(ups, downs, var: str, ring) -> HolonomicDE:
    """DE of pFq(ups; downs; var): [theta prod(theta+b-1) - x prod(theta+a)] f = 0."""
    one = RatFunc.const(1, ring)
    left = _poly_from_roots([b - 1 for b in downs] + [one * 0], one)
    right = [-c for c in _poly_from_roots(list(ups), one)]
    coeffs = theta_to_de([(0, left), (1, right)], var, ring)
    return HolonomicDE.make(var, coeffs, ring=ring)


def atom_de(name: str, args: tuple, var: str, ring) -> HolonomicDE:
    """DE of the atom in ``var`` (its last argument replaced by ``var``)."""
    from .orthopoly import FAMILIES
    entry = ATOMS[name]
    if entry.de is None:
        raise HolonomicError(f"{name} has no differential equation")
    mapping = {"x": Sym(var)}
    if entry.kind == "family":
        fam = FAMILIES[name]
        vals = list(args[:-1])
        if len(vals) - 1 < len(fam.params):
            vals = vals + [Num(Fraction(d)) for d in fam.defaults]
        for pname, v in zip(("n",) + fam.params, vals):
            if var in free_symbols(v):
                raise HolonomicError(f"{name}: parameter {pname} depends on {var}")
            mapping[pname] = v
    coeffs = [to_ratfunc(subs(parse_expr(c), mapping), ring) for c in entry.de]
    return HolonomicDE.make(var, coeffs, ring=ring)


def _const_de(var, ring):
    return HolonomicDE.make(var, [RatFunc.const(0, ring), RatFunc.const(1, ring)], ring=ring)


def _rational_de(r: RatFunc, var: str, ring) -> HolonomicDE:
    if r.is_zero():
        raise HolonomicError("the zero function has no normalized DE")
    if r.free_of(var):
        return _const_de(var, ring)
    P, Q = RatFunc(r.num, _reduced=True), RatFunc(r.den, _reduced=True)
    return HolonomicDE.make(var, [-(P.diff(var) * Q - P * Q.diff(var)), P * Q], ring=ring)


def _power_de(base: RatFunc, expo: RatFunc, var: str, ring) -> HolonomicDE:
    """DE of R^a for rational R: R f' - a R' f = 0."""
    if base.free_of(var):
        return _const_de(var, ring)
    return HolonomicDE.make(var, [-(expo * base.diff(var)), base], ring=ring)


def de_from_expr(e: Expr | str, var: str = "x") -> HolonomicDE:
    """Annihilating DE of an expression by structural recursion."""
    if isinstance(e, str):
        e = parse_expr(e)
    e = expand_special(e)
    ring = ring_of(free_symbols(e), var)
    return _de(e, var, ring)


def _de(e: Expr, var: str, ring) -> HolonomicDE:
    if var not in free_symbols(e):
        if isinstance(e, Sum):
            raise HolonomicError("sum binders are not supported by de_from_expr")
        return _const_de(var, ring)
    if is_rational_in(e):
        return _rational_de(to_ratfunc(e, ring), var, ring)
    if isinstance(e, Add):
        out = _de(e.terms[0], var, ring)
        for t in e.terms[1:]:
            out = sum_de(out, _de(t, var, ring))
        return out
    if isinstance(e, Mul):
        rat = [f for f in e.factors if is_rational_in(f)]
        rest = [f for f in e.factors if not is_rational_in(f)]
        parts = [_de(f, var, ring) for f in rest]
        if rat:
            from .expr import mul
            parts.insert(0, _de(mul(*rat), var, ring) if len(rat) > 1 else _de(rat[0], var, ring))
        out = parts[0]
        for p in parts[1:]:
            out = product_de(out, p)
        return out
    if isinstance(e, Pow):
        if var in free_symbols(e.exp):
            raise HolonomicError(f"variable exponent in {to_text(e)}")
        if is_rational_in(e.base):
            base = to_ratfunc(e.base, ring)
            expo = to_ratfunc(e.exp, ring)
            return _power_de(base, expo, var, ring)
        if isinstance(e.exp, Num) and e.exp.value.denominator == 1 and e.exp.value > 0:
            return _int_power(_de(e.base, var, ring), int(e.exp.value))
        raise HolonomicError(f"unsupported power {to_text(e)}")
    if isinstance(e, Call):
        arg = e.args[-1]
        if e.name == "pfq":
            ups = [to_ratfunc(a, ring) for a in e.args[0].items]
            downs = [to_ratfunc(b, ring) for b in e.args[1].items]
            if any(not v.free_of(var) for v in ups + downs):
                raise HolonomicError(f"pfq parameters depend on {var}")
            base = pfq_de(ups, downs, var, ring)
        else:
            entry = ATOMS[e.name]
            if entry.de is None:
                raise HolonomicError(f"{e.name} is not a continuous atom")
            base = atom_de(e.name, e.args, var, ring)
        if not is_rational_in(arg):
            raise HolonomicError(
                f"argument {to_text(arg)} of {e.name} is not rational in {var}")
        r = to_ratfunc(arg, ring)
        return substitute_rational_de(base, r)
    if isinstance(e, Sum):
        raise HolonomicError("sum binders are not supported by de_from_expr")
    raise HolonomicError(f"unsupported expression {to_text(e)}")


def _int_power(de: HolonomicDE, n: int) -> HolonomicDE:
    result = None
    base = de
    while n:
        if n & 1:
            result = base if result is None else product_de(result, base)
        n >>= 1
        if n:
            base = product_de(base, base)
    return result


# ---------------------------------------------------------------------------
# DE <-> RE
# ---------------------------------------------------------------------------

def _falling(k: RatFunc, start, j: int) -> RatFunc:
    out = k * 0 + 1
    for t in range(j):
        out = out * (k + (start - t))
    return out


def de_to_re(de: HolonomicDE, index: str = "k", primitive: bool = False) -> HolonomicRE:
    """RE for the power-series coefficients of solutions of ``de``.

    x^i D^j maps to a_{k+j-i} (k+j-i)(k+j-i-1)...(k-i+1); numeric content only
    is removed unless ``primitive`` is set.
    """
    var = de.var
    if index in de.params:
        raise HolonomicError(f"index {index} clashes with a parameter")
    params = de.params
    ring = ring_of(index, params)
    K = RatFunc.var(index, ring)
    terms = []  # (shift, coefficient in params, i, j)
    for j, p in enumerate(de.coeffs):
        if p.is_zero():
            continue
        for i, c in enumerate(p.coeffs_in(var)):
            if c.is_zero():
                continue
            terms.append((j - i, _project(c, ring), i, j))
    smin = min(t[0] for t in terms)
    smax = max(t[0] for t in terms)
    coeffs = [RatFunc.const(0, ring)] * (smax - smin + 1)
    for s, c, i, j in terms:
        # m = k - smin, a_{m+s} (m+s)(m+s-1)...(m+s-j+1)
        coeffs[s - smin] = coeffs[s - smin] + c * _falling(K, s - smin, j)
    return HolonomicRE.make(index, coeffs, content="full" if primitive else "numeric", ring=ring)


def _project(c: RatFunc, ring) -> RatFunc:
    used = c.used_variables()
    if not set(used) <= set(ring):
        raise HolonomicError(f"coefficient {c} leaves the ring {ring}")
    return c.embed(ring)


def _falling_basis(q: RatFunc, m: str, ring) -> list[RatFunc]:
    """b_s with q(m) = sum_s b_s m(m-1)...(m-s+1) (Newton forward differences)."""
    d = q.degree(m) if not q.is_zero() else 0
    vals = [q.substitute(m, t) for t in range(d + 1)]
    out = []
    for s in range(d + 1):
        out.append(_project(vals[0], ring) * Fraction(1, _fact(s)))
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return out


def re_to_de(rec: HolonomicRE, var: str = "x") -> HolonomicDE:
    """DE for the generating function sum_k a_k var^k."""
    k = rec.index
    if var in rec.ring:
        raise HolonomicError(f"generating variable {var} clashes with {rec.ring}")
    params = rec.params
    ring = ring_of(var, params)
    X = RatFunc.var(var, ring)
    J = rec.order
    out: dict[int, RatFunc] = {}
    for j, q in enumerate(rec.coeffs):
        if q.is_zero():
            continue
        qm = q.shift(k, -j)  # q_j(m - j) in the variable named k
        for s, b in enumerate(_falling_basis(qm, k, ring)):
            if b.is_zero():
                continue
            out[s] = out.get(s, RatFunc.const(0, ring)) + b * X ** (J - j + s)
    m = max(out)
    coeffs = [out.get(s, RatFunc.const(0, ring)) for s in range(m + 1)]
    return HolonomicDE.make(var, coeffs, ring=ring)


# ---------------------------------------------------------------------------
# recurrences for sequences
# ---------------------------------------------------------------------------

def _coords_of_shifts(rec: HolonomicRE, count: int):
    """Coordinates of a_{k+i}, i < count, over the basis a_k..a_{k+M-1}."""
    ring = rec.ring
    M = rec.order
    red = _reduction(list(rec.coeffs))
    zero, one = RatFunc.const(0, ring), RatFunc.const(1, ring)
    v = [one] + [zero] * (M - 1)
    out = []
    for _ in range(count):
        out.append(v)
        v = _re_step_block(v, red, rec.index)
    return out


def re_multisection(rec: HolonomicRE, m: int, r: int = 0) -> HolonomicRE:
    """RE satisfied by b_j = a_{m j + r} (index name kept)."""
    if m < 1 or not 0 <= r < m:
        raise HolonomicError("need m >= 1 and 0 <= r < m")
    if m == 1:
        return rec if r == 0 else shift_re(rec, r)
    M = rec.order
    coords = _coords_of_shifts(rec, m * M + 1)
    finder = DependencyFinder()
    dep = None
    for t in range(M + 1):
        dep = finder.add(coords[m * t])
        if dep is not None:
            break
    if dep is None:
        raise HolonomicError("multisection elimination degenerated")
    k = rec.index
    K = RatFunc.var(k, rec.ring)
    coeffs = [c.substitute(k, K * m + r) for c in dep]
    return HolonomicRE.make(k, coeffs, ring=rec.ring)


def shift_re(rec: HolonomicRE, h) -> HolonomicRE:
    """RE of b_k = a_{k+h} (h an integer or a RatFunc free of the index)."""
    k = rec.index
    if isinstance(h, RatFunc):
        ring = ring_of(rec.ring, h.used_variables())
        rec = rec.embed(ring)
        K = RatFunc.var(k, ring)
        coeffs = [c.substitute(k, K + _embed(h, ring)) for c in rec.coeffs]
    else:
        ring = rec.ring
        coeffs = [c.shift(k, h) for c in rec.coeffs]
    return HolonomicRE.make(k, coeffs, ring=ring)


def reverse_re(rec: HolonomicRE) -> HolonomicRE:
    """RE of b_k = a_{-k}."""
    k = rec.index
    J = rec.order
    K = RatFunc.var(k, rec.ring)
    coeffs = [rec.coeffs[J - j].substitute(k, -K - J) for j in range(J + 1)]
    return HolonomicRE.make(k, coeffs, ring=rec.ring)


def linear_reindex(rec: HolonomicRE, a: int, b) -> HolonomicRE:
    """RE of c_k = a_{a k + b} for a nonzero integer a."""
    if a == 0:
        raise HolonomicError("index coefficient is zero")
    out = rec
    if not (isinstance(b, int) and b == 0):
        out = shift_re(out, b)
    if a < 0:
        out = reverse_re(out)
        a = -a
    if a > 1:
        out = re_multisection(out, a, 0)
    return out


def _linear_in(e: Expr, index: str, ring):
    """(a, b) with e = a*index + b, a an integer and b free of index."""
    r = to_ratfunc(e, ring)
    if not r.den.is_constant() and not RatFunc(r.den, _reduced=True).free_of(index):
        raise HolonomicError(f"{to_text(e)} is not linear in {index}")
    cs = r.coeffs_in(index)
    if len(cs) > 2:
        raise HolonomicError(f"{to_text(e)} is not linear in {index}")
    a = cs[1] if len(cs) == 2 else RatFunc.const(0, ring)
    if not a.is_constant() or a.constant_value().denominator != 1:
        raise HolonomicError(f"{to_text(e)}: coefficient of {index} must be an integer")
    b = cs[0]
    bb = b.constant_value() if b.is_constant() else b
    if isinstance(bb, Fraction):
        if bb.denominator != 1:
            bb = b
        else:
            bb = int(bb)
    return int(a.constant_value()), bb


def _family_coeffs(fam, direction: str, idx: RatFunc, other: RatFunc, P: dict):
    if direction == "n":
        n1 = idx + 1
        return [fam.C(n1, P), -(fam.A(n1, P) * other + fam.B(n1, P)), idx * 0 + 1]
    if fam.xre is None:
        raise HolonomicError(f"{fam.name} has no difference equation in its argument")
    return list(fam.xre(idx, other, P))


def family_re(fam, params=(), direction: str = "n", index: str | None = None,
              arg: str = "x", degree: str = "n") -> HolonomicRE:
    """Registered recurrence of an orthogonal family.

    direction "n": three-term recurrence in the degree with argument ``arg``;
    direction "x": difference equation in the argument with degree ``degree``.
    Parameters may be names (symbolic) or numbers.
    """
    from .orthopoly import _params_for
    P0 = _params_for(fam, params)
    if direction not in ("n", "x"):
        raise HolonomicError("direction must be 'n' or 'x'")
    index = index or ("n" if direction == "n" else "x")
    other = arg if direction == "n" else degree
    names = [v for v in P0.values() if isinstance(v, str)]
    ring = ring_of(index, other if isinstance(other, str) else (), names)
    P = {k: (RatFunc.var(v, ring) if isinstance(v, str) else RatFunc.const(v, ring))
         for k, v in P0.items()}
    idx = RatFunc.var(index, ring)
    oth = RatFunc.var(other, ring) if isinstance(other, str) else RatFunc.const(other, ring)
    return HolonomicRE.make(index, _family_coeffs(fam, direction, idx, oth, P), ring=ring)


def _family_expr_re(e: Call, index: str, ring) -> HolonomicRE:
    from .orthopoly import FAMILIES
    fam = FAMILIES[e.name]
    args = list(e.args)
    if len(args) - 2 < len(fam.params):
        args = [args[0]] + [Num(Fraction(d)) for d in fam.defaults] + [args[-1]]
    deg, arg = args[0], args[-1]
    pexprs = dict(zip(fam.params, args[1:-1]))
    for k, v in pexprs.items():
        if index in free_symbols(v):
            raise HolonomicError(f"{e.name}: parameter {k} depends on {index}")
    in_deg = index in free_symbols(deg)
    in_arg = index in free_symbols(arg)
    if in_deg and in_arg:
        raise HolonomicError(f"{e.name}: {index} appears in degree and argument")
    if in_deg:
        direction, running, other = "n", deg, arg
    elif in_arg:
        direction, running, other = "x", arg, deg
    else:
        return _const_re(index, ring)
    a, b = _linear_in(running, index, ring)
    tmp = "_t"
    ring2 = ring_of(set(ring) - {index}, tmp)
    P = {k: to_ratfunc(v, ring2) for k, v in pexprs.items()}
    T = RatFunc.var(tmp, ring2)
    coeffs = _family_coeffs(fam, direction, T, to_ratfunc(other, ring2), P)
    base = HolonomicRE.make(tmp, coeffs, ring=ring2)
    if isinstance(b, RatFunc):
        b = b.embed(ring2)
    return linear_reindex(base, a, b).rename(index)


def _const_re(index, ring) -> HolonomicRE:
    return HolonomicRE.make(index, [RatFunc.const(-1, ring), RatFunc.const(1, ring)], ring=ring)


def re_for_expr(e: Expr | str, index: str = "k", max_order: int | None = None) -> HolonomicRE:
    """Annihilating recurrence of an expression viewed as a sequence in ``index``."""
    if isinstance(e, str):
        e = parse_expr(e)
    e = expand_special(e)
    ring = ring_of(free_symbols(e), index)
    return _re(e, index, ring, max_order)


def _re(e: Expr, index: str, ring, max_order) -> HolonomicRE:
    from .hyper import term_ratio, NotHypergeometric
    if index not in free_symbols(e):
        return _const_re(index, ring)
    if isinstance(e, Sum) or (isinstance(e, Mul) and any(isinstance(f, Sum) for f in e.factors)) \
            or (isinstance(e, Call) and e.name == "pfq"):
        return _sum_re(e, index, ring, max_order)
    try:
        ratio = term_ratio(e, index, ring)
    except NotHypergeometric:
        ratio = None
    if ratio is not None:
        return HolonomicRE.make(index, [-RatFunc(ratio.num, _reduced=True),
                                        RatFunc(ratio.den, _reduced=True)], ring=ring)
    if isinstance(e, Add):
        out = _re(e.terms[0], index, ring, max_order)
        for t in e.terms[1:]:
            out = sum_re(out, _re(t, index, ring, max_order))
        return out
    if isinstance(e, Mul):
        hyp, rest = [], []
        for f in e.factors:
            try:
                term_ratio(f, index, ring)
                hyp.append(f)
            except NotHypergeometric:
                rest.append(f)
        from .expr import mul
        parts = [_re(f, index, ring, max_order) for f in rest]
        if hyp:
            parts.insert(0, _re(mul(*hyp), index, ring, max_order))
        out = parts[0]
        for p in parts[1:]:
            out = product_re(out, p)
        return out
    if isinstance(e, Pow) and isinstance(e.exp, Num) and e.exp.value.denominator == 1 \
            and e.exp.value > 0:
        base = _re(e.base, index, ring, max_order)
        out = base
        for _ in range(int(e.exp.value) - 1):
            out = product_re(out, base)
        return out
    if isinstance(e, Call) and ATOMS[e.name].kind == "family":
        return _family_expr_re(e, index, ring)
    raise HolonomicError(f"non-holonomic dependence on {index} in {to_text(e)}")


def _sum_re(e: Expr, index: str, ring, max_order) -> HolonomicRE:
    from .zeilberger import zeilberger, push_into_sum
    s = push_into_sum(e)
    res = zeilberger(s.body, index, s.index, max_order=max_order, bounds=(s.lo, s.hi))
    return res.recurrence


# ---------------------------------------------------------------------------
# residual checks (test oracles)
# ---------------------------------------------------------------------------

def _to_series_coeff(c: RatFunc, ring):
    if c.is_constant():
        v = c.constant_value()
        return RatFunc.const(v, ring) if ring else v
    if not ring:
        raise HolonomicError(f"coefficient {c} needs parameters")
    return c.embed(ring_of(ring, c.used_variables()))


def de_residual(de: HolonomicDE, s: TruncSeries, ring=()) -> list:
    """Coefficients of sum_j p_j D^j s through the exactly known order.

    ``s`` must be an ordinary (p = 1) Laurent series; ``ring`` is the
    coefficient ring of ``s`` (empty for Fractions).
    """
    if s.p != 1:
        raise HolonomicError("de_residual needs integer exponents")
    var = de.var
    lo = s.val - de.order
    hi = s.prec - de.order  # exclusive: exact exponents of the result
    out = {}
    cur = {s.val + i: c for i, c in enumerate(s.coeffs) if c != 0}
    for j, p in enumerate(de.coeffs):
        if j:
            cur = {e - 1: c * e for e, c in cur.items() if e != 0}
        if p.is_zero():
            continue
        pcs = p.coeffs_in(var)
        for i, pc in enumerate(pcs):
            if pc.is_zero():
                continue
            pc = _to_series_coeff(pc, ring)
            for e, c in cur.items():
                t = e + i
                if t < hi:
                    out[t] = out.get(t, 0) + pc * c
    return [out.get(t, 0) for t in range(lo, hi)]


def re_residual(rec: HolonomicRE, values: dict, point: dict | None = None,
                start: int = 0) -> list:
    """sum_j q_j(k) a_{k+j} for every k with all needed values present."""
    k = rec.index
    point = point or {}
    out = []
    keys = sorted(values)
    for kk in keys:
        if kk < start or any(kk + j not in values for j in range(rec.order + 1)):
            continue
        tot = Fraction(0)
        for j, q in enumerate(rec.coeffs):
            qv = q.evaluate({k: kk, **point})
            if not qv.is_constant():
                raise HolonomicError(f"residual needs values for {qv.used_variables()}")
            tot += qv.constant_value() * values[kk + j]
        out.append((kk, tot))
    return out
