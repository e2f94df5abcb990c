"""Exact arithmetic: rationals, sparse multivariate polynomials, rational functions.

Polynomials live in an explicit, ordered variable list and are stored as integer
polynomials (python-flint ``fmpz_mpoly``, graded-lex order) over a positive
integer denominator.  Rational functions are reduced quotients of integer
polynomials.  Mixing values over different variable lists raises; use
:meth:`RatFunc.embed` to move a value into a larger list explicitly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import flint

Rational = Fraction

__all__ = [
    "Rational",
    "MultiPoly",
    "RatFunc",
    "AlgebraError",
    "poly_gcd",
    "ratfunc_normalize",
    "solve_linear_dependency",
    "DependencyFinder",
    "rational_roots",
    "linear_factors",
    "nullspace_vector",
    "as_fraction",
]


class AlgebraError(ValueError):
    """Raised for variable-list mismatches and other domain errors."""


@lru_cache(maxsize=None)
def _ctx(names: tuple[str, ...]):
    if not names:
        names = ("_",)
    return flint.fmpz_mpoly_ctx.get(names, "deglex")


@lru_cache(maxsize=None)
def _qctx(names: tuple[str, ...]):
    return flint.fmpq_mpoly_ctx.get(names or ("_",), "deglex")


def _names(ctx) -> tuple[str, ...]:
    names = tuple(ctx.names())
    return () if names == ("_",) else names


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, flint.fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, flint.fmpz):
        return Fraction(int(c))
    raise TypeError(f"not a rational: {c!r}")


def _lc(p) -> int:
    """Leading integer coefficient under graded-lex order (0 for zero)."""
    if p.is_zero():
        return 0
    return int(p.leading_coefficient())


def _int_content(p) -> int:
    return int(p.content()) if not p.is_zero() else 0


class RatFunc:
    """Reduced quotient ``num/den`` of integer polynomials.

    Invariants: ``gcd(num, den) = 1`` over Z (so integer content is shared out),
    ``den`` has positive leading coefficient, zero is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if den is None:
            den = num.context().constant(1)
        if _reduced:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("division by zero")
        if num.is_zero():
            self.num, self.den = num, den.context().constant(1)
            return
        if den.is_constant():
            d = int(den.leading_coefficient())
            g = gcd(_int_content(num), d)
            if d < 0:
                g = -g
            if g != 1:
                num = num / g
                den = den / g
        else:
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            if _lc(den) < 0:
                num, den = -num, -den
        self.num, self.den = num, den

    # ----- construction -------------------------------------------------
    @classmethod
    def const(cls, value, variables: tuple[str, ...]) -> "RatFunc":
        ctx = _ctx(tuple(variables))
        v = as_fraction(value)
        return cls(ctx.constant(v.numerator), ctx.constant(v.denominator), _reduced=True)

    @classmethod
    def var(cls, name: str, variables: tuple[str, ...]) -> "RatFunc":
        ctx = _ctx(tuple(variables))
        return cls(ctx.gen(ctx.variable_to_index(name)), _reduced=True)

    @classmethod
    def from_poly(cls, poly: "MultiPoly") -> "RatFunc":
        return cls(poly.num, poly.num.context().constant(poly.den))

    # ----- basic properties ---------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return _names(self.num.context())

    @property
    def ctx(self):
        return self.num.context()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise AlgebraError(f"{self} is not constant")
        n = int(self.num.leading_coefficient()) if not self.num.is_zero() else 0
        return Fraction(n, int(self.den.leading_coefficient()))

    def free_of(self, name: str) -> bool:
        if name not in self.variables:
            return True
        i = self.ctx.variable_to_index(name)
        return self.num.degrees()[i] == 0 and self.den.degrees()[i] == 0

    def degree(self, name: str) -> int:
        """Degree of the numerator in ``name`` (−1 for zero)."""
        if self.num.is_zero():
            return -1
        if name not in self.variables:
            return 0
        return self.num.degrees()[self.ctx.variable_to_index(name)]

    def numerator(self) -> "MultiPoly":
        return MultiPoly._wrap(self.num, 1)

    def denominator(self) -> "MultiPoly":
        return MultiPoly._wrap(self.den, 1)

    # ----- coercion -----------------------------------------------------
    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.num.context() is not self.num.context():
                raise AlgebraError(
                    f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, MultiPoly):
            return self._coerce(RatFunc.from_poly(other))
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            v = as_fraction(other)
            return RatFunc(self.ctx.constant(v.numerator), self.ctx.constant(v.denominator),
                           _reduced=True)
        return NotImplemented

    def embed(self, variables) -> "RatFunc":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = set(self.used_variables()) - set(variables)
        if missing:
            raise AlgebraError(f"cannot embed: {sorted(missing)} not in {variables}")
        ctx = _ctx(variables)
        n, d = self.num.project_to_context(ctx), self.den.project_to_context(ctx)
        if _lc(d) < 0:
            n, d = -n, -d
        return RatFunc(n, d, _reduced=True)

    def used_variables(self) -> set[str]:
        names = self.variables
        out = set()
        for p in (self.num, self.den):
            if p.is_zero():
                continue
            for i, d in enumerate(p.degrees()):
                if d:
                    out.add(names[i])
        return out

    # ----- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.num.is_zero() or o.num.is_zero():
            return RatFunc(self.ctx.constant(0), _reduced=True)
        if self.den.is_one() and o.den.is_one():
            return RatFunc(self.num * o.num, self.den, _reduced=True)
        # cross-cancel before multiplying keeps intermediate sizes down
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n = (self.num / g1) * (o.num / g2)
        d = (self.den / g2) * (o.den / g1)
        if _lc(d) < 0:
            n, d = -n, -d
        return RatFunc(n, d, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero")
        n, d = self.den, self.num
        if _lc(d) < 0:
            n, d = -n, -d
        return RatFunc(n, d, _reduced=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("RatFunc powers must be integers")
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc) and other.ctx is not self.ctx:
            return False
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.variables, str(self.num), str(self.den)))

    def __bool__(self):
        return not self.num.is_zero()

    # ----- calculus and substitution -------------------------------------
    def diff(self, name: str) -> "RatFunc":
        if self.free_of(name):
            return RatFunc(self.ctx.constant(0), _reduced=True)
        i = self.ctx.variable_to_index(name)
        dn = self.num.derivative(i)
        if self.den.is_constant():
            return RatFunc(dn, self.den)
        dd = self.den.derivative(i)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def shift(self, name: str, h) -> "RatFunc":
        """Substitute ``name -> name + h`` for an integer (or rational) ``h``."""
        if h == 0 or self.free_of(name):
            return self
        ctx = self.ctx
        i = ctx.variable_to_index(name)
        h = as_fraction(h)
        gens = list(ctx.gens())
        if h.denominator == 1:
            gens[i] = gens[i] + int(h)
            return RatFunc(self.num.compose(*gens), self.den.compose(*gens))
        return self.substitute(name, RatFunc.var(name, self.variables) + h)

    def substitute(self, name: str, value) -> "RatFunc":
        """Substitute ``name -> value`` where value is a number or RatFunc."""
        if self.free_of(name):
            return self
        if not isinstance(value, RatFunc):
            value = as_fraction(value)
            if value.denominator == 1:
                v = int(value)
                return RatFunc(self.num.subs({name: v}), self.den.subs({name: v}))
            return _subs_rational(self, name, value)
        value = self._coerce(value)
        return _poly_subs(self.num, name, value) / _poly_subs(self.den, name, value)

    def evaluate(self, point: dict) -> "RatFunc":
        out = self
        for k, v in point.items():
            out = out.substitute(k, v)
        return out

    def coeffs_in(self, name: str) -> list["RatFunc"]:
        """Coefficients of the numerator in ``name`` divided by the denominator.

        Requires the denominator to be free of ``name``.
        """
        if not self.den.is_constant() and not RatFunc(self.den).free_of(name):
            raise AlgebraError(f"denominator depends on {name}")
        cs = poly_coeffs(self.num, name)
        d = RatFunc(self.ctx.constant(1), self.den, _reduced=True)
        return [RatFunc(c) * d for c in cs]

    # ----- printing -----------------------------------------------------
    def __str__(self):
        n = str(self.num)
        if self.den.is_one():
            return n
        d = str(self.den)
        if len(self.num) > 1:
            n = f"({n})"
        if len(self.den) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self}; {','.join(self.variables)})"


def _subs_rational(r: RatFunc, name: str, value: Fraction) -> RatFunc:
    q = _qctx(_names(r.ctx))
    fv = flint.fmpq(value.numerator, value.denominator)

    def go(p):
        qp = q.from_dict({m: c for m, c in p.to_dict().items()}).subs({name: fv})
        return _from_qpoly(qp, r.ctx)

    n, nd = go(r.num)
    d, dd = go(r.den)
    return RatFunc(n * dd, d * nd)


def _from_qpoly(qp, zctx):
    """fmpq_mpoly -> (fmpz_mpoly, integer denominator)."""
    items = qp.to_dict()
    den = 1
    for c in items.values():
        den = lcm(den, int(c.q))
    terms = {m: int(c.p) * (den // int(c.q)) for m, c in items.items()}
    return zctx.from_dict(terms), den


def _poly_subs(p, name: str, value: RatFunc) -> RatFunc:
    """Horner evaluation of integer polynomial p at name -> value."""
    cs = poly_coeffs(p, name)
    out = RatFunc(cs[-1])
    for c in reversed(cs[:-1]):
        out = out * value + RatFunc(c)
    return out


def poly_coeffs(p, name: str) -> list:
    """Split an integer polynomial into coefficients of ``name``^i (same context)."""
    ctx = p.context()
    if p.is_zero():
        return [p]
    i = ctx.variable_to_index(name)
    deg = p.degrees()[i]
    buckets: list[dict] = [dict() for _ in range(deg + 1)]
    for mon, c in p.to_dict().items():
        e = mon[i]
        m = list(mon)
        m[i] = 0
        buckets[e][tuple(m)] = c
    return [ctx.from_dict(b) if b else ctx.constant(0) for b in buckets]


class MultiPoly:
    """Sparse multivariate polynomial over Q with an explicit variable list.

    Stored as an integer polynomial ``num`` over a positive integer ``den``.
    """

    __slots__ = ("num", "den")

    def __init__(self, variables, terms: dict | None = None):
        ctx = _ctx(tuple(variables))
        terms = terms or {}
        den = 1
        fr = {tuple(m): as_fraction(c) for m, c in terms.items() if c != 0}
        for m, c in fr.items():
            if len(m) != len(tuple(variables)):
                raise AlgebraError("exponent vector length != number of variables")
            den = lcm(den, c.denominator)
        num = ctx.from_dict({m: int(c * den) for m, c in fr.items()}) if fr else ctx.constant(0)
        self.num, self.den = self._norm(num, den)

    @staticmethod
    def _norm(num, den):
        if num.is_zero():
            return num, 1
        g = gcd(_int_content(num), den)
        if g != 1:
            num = num / g
            den //= g
        return num, den

    @classmethod
    def _wrap(cls, num, den=1):
        obj = cls.__new__(cls)
        obj.num, obj.den = cls._norm(num, den)
        return obj

    @classmethod
    def from_ratfunc(cls, r: RatFunc) -> "MultiPoly":
        if not r.den.is_constant():
            raise AlgebraError(f"{r} is not a polynomial")
        d = int(r.den.leading_coefficient())
        return cls._wrap(r.num, d)

    @classmethod
    def var(cls, name: str, variables) -> "MultiPoly":
        return cls._wrap(RatFunc.var(name, tuple(variables)).num)

    @property
    def variables(self) -> tuple[str, ...]:
        return _names(self.num.context())

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(m): Fraction(int(c), self.den) for m, c in self.num.to_dict().items()}

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _check(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.num.context() is not self.num.context():
                raise AlgebraError(
                    f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            v = as_fraction(other)
            return MultiPoly._wrap(self.num.context().constant(v.numerator), v.denominator)
        return NotImplemented

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._wrap(-self.num, self.den)

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return MultiPoly._wrap(self.num ** e, self.den ** e)

    def __eq__(self, other):
        if isinstance(other, MultiPoly) and other.num.context() is not self.num.context():
            return False
        o = self._check(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.variables, str(self.num), self.den))

    def divides(self, other: "MultiPoly") -> bool:
        o = self._check(other)
        if self.is_zero():
            return o.is_zero()
        _, r = divmod(o.num, self.num)
        return r.is_zero() and _exact_div_ok(o.num, self.num)

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        o = self._check(other)
        q = self.num / o.num
        return MultiPoly._wrap(q * o.den, self.den)

    def primitive(self) -> "MultiPoly":
        """Primitive integer polynomial with positive leading coefficient."""
        if self.is_zero():
            return self
        c = _int_content(self.num)
        p = self.num / c
        if _lc(p) < 0:
            p = -p
        return MultiPoly._wrap(p, 1)

    def leading_coefficient(self) -> Fraction:
        return Fraction(_lc(self.num), self.den)

    def degree(self, name: str) -> int:
        if self.is_zero():
            return -1
        return self.num.degrees()[self.num.context().variable_to_index(name)]

    def total_degree(self) -> int:
        return -1 if self.is_zero() else int(self.num.total_degree())

    def diff(self, name: str) -> "MultiPoly":
        i = self.num.context().variable_to_index(name)
        return MultiPoly._wrap(self.num.derivative(i), self.den)

    def __call__(self, **values) -> RatFunc:
        return RatFunc.from_poly(self).evaluate(values)

    def __str__(self):
        s = str(self.num)
        if self.den == 1:
            return s
        if len(self.num) > 1:
            s = f"({s})"
        return f"{s}/{self.den}"

    def __repr__(self):
        return f"MultiPoly({self}; {','.join(self.variables)})"


def _exact_div_ok(a, b) -> bool:
    try:
        a / b
        return True
    except Exception:
        return False


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Primitive gcd with positive leading coefficient; gcd(0, 0) = 0."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        return a
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    return MultiPoly._wrap(a.num.gcd(b.num), 1).primitive()


def ratfunc_normalize(num: MultiPoly, den: MultiPoly) -> RatFunc:
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("division by zero")
    return RatFunc.from_poly(num) / RatFunc.from_poly(den)


# ---------------------------------------------------------------------------
# linear algebra over the fraction field of Z[vars]
# ---------------------------------------------------------------------------

def _content_gcd(polys) -> object | None:
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p if g is None else g.gcd(p)
        if g.is_one():
            return g
    return g


def _clear_denominators(vec: list[RatFunc]):
    """Return (integer polynomial vector, multiplier L) with vec*L = result."""
    ctx = vec[0].ctx
    L = ctx.constant(1)
    for r in vec:
        if not r.den.is_one():
            L = L * (r.den / L.gcd(r.den))
    out = [r.num * (L / r.den) if not r.num.is_zero() else r.num for r in vec]
    return out, L


class DependencyFinder:
    """Incremental fraction-free elimination.

    Feed vectors one at a time with :meth:`add`; it returns the dependency
    coefficients (one per vector fed so far, last nonzero, polynomial,
    primitive, positive leading coefficient on the last entry) as soon as the
    newest vector depends on the earlier ones, else ``None``.
    """

    def __init__(self):
        self._pivots: list[tuple[int, list, list]] = []
        self._scales: list = []
        self._ctx = None

    def add(self, vec: list[RatFunc]) -> list[RatFunc] | None:
        if not vec:
            raise AlgebraError("empty vector")
        if self._ctx is None:
            self._ctx = vec[0].ctx
        ctx = self._ctx
        j = len(self._scales)
        row, L = _clear_denominators(vec)
        self._scales.append(L)
        comb = [ctx.constant(0)] * j + [ctx.constant(1)]
        for col, prow, pcomb in self._pivots:
            if row[col].is_zero():
                continue
            g = row[col].gcd(prow[col])
            mv = prow[col] / g
            mr = row[col] / g
            row = [mv * a - mr * b for a, b in zip(row, prow)]
            comb = [mv * a - mr * b for a, b in zip(comb, pcomb + [ctx.constant(0)] * (len(comb) - len(pcomb)))]
            g = _content_gcd(row + comb)
            if g is not None and not g.is_one():
                row = [a / g if not a.is_zero() else a for a in row]
                comb = [a / g if not a.is_zero() else a for a in comb]
        if all(a.is_zero() for a in row):
            coeffs = [c * s for c, s in zip(comb, self._scales)]
            g = _content_gcd(coeffs)
            coeffs = [c / g if not c.is_zero() else c for c in coeffs]
            if _lc(coeffs[-1]) < 0:
                coeffs = [-c for c in coeffs]
            return [RatFunc(c, _reduced=True) for c in coeffs]
        col = next(i for i, a in enumerate(row) if not a.is_zero())
        self._pivots.append((col, row, comb))
        return None


def solve_linear_dependency(vectors: list[list[RatFunc]]):
    """First dependency among the prefixes v_0..v_j, or the string "independent"."""
    if not vectors:
        raise AlgebraError("empty input")
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise AlgebraError("vectors have different lengths")
    finder = DependencyFinder()
    for v in vectors:
        dep = finder.add(list(v))
        if dep is not None:
            return dep
    return "independent"


def nullspace_vector(rows: list[list], ncols: int, accept=None):
    """One nonzero nullspace vector of an integer-polynomial matrix, or None.

    Fraction-free Gauss-Jordan elimination with content removal.  Each free
    column yields one basis vector; the first one passing ``accept`` (default:
    any) is returned.
    """
    if not rows:
        return None
    ctx = rows[0][0].context()
    zero = ctx.constant(0)
    mat = [list(r) for r in rows if any(not a.is_zero() for a in r)]
    pivcols: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        best = None
        for i in range(r, len(mat)):
            a = mat[i][c]
            if not a.is_zero():
                size = len(a)
                if best is None or size < best:
                    piv, best = i, size
                    if size == 1:
                        break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        for i in range(len(mat)):
            if i == r or mat[i][c].is_zero():
                continue
            g = mat[i][c].gcd(prow[c])
            mp = prow[c] / g
            mi = mat[i][c] / g
            new = [mp * a - mi * b for a, b in zip(mat[i], prow)]
            g = _content_gcd(new)
            if g is not None and not g.is_one():
                new = [a / g if not a.is_zero() else a for a in new]
            mat[i] = new
        pivcols.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivcols]
    for f in free:
        # x_f = lcm of the pivots' entries; solve each pivot row for its variable
        lcmd = ctx.constant(1)
        for i, c in enumerate(pivcols):
            if not mat[i][f].is_zero():
                d = mat[i][c]
                lcmd = lcmd * (d / lcmd.gcd(d))
        sol = [zero] * ncols
        sol[f] = lcmd
        for i, c in enumerate(pivcols):
            a = mat[i][f]
            if a.is_zero():
                continue
            sol[c] = -(a * (lcmd / mat[i][c]))
        g = _content_gcd(sol)
        if g is not None and not g.is_one():
            sol = [s / g if not s.is_zero() else s for s in sol]
        if accept is None or accept(sol):
            return sol
    return None


# ---------------------------------------------------------------------------
# roots and linear factors
# ---------------------------------------------------------------------------

def rational_roots(p: MultiPoly):
    """Rational roots (with multiplicity) of a univariate polynomial and the cofactor.

    Returns ``(roots, cofactor)`` where roots is a sorted list of Fractions and
    the cofactor is the primitive root-free part.
    """
    if p.is_zero():
        raise AlgebraError("zero polynomial has no finite root set")
    used = [v for v, d in zip(p.variables, p.num.degrees()) if d]
    if len(used) > 1:
        raise AlgebraError(f"rational_roots needs a univariate polynomial, got {used}")
    if not used:
        return [], p.primitive()
    name = used[0]
    coeffs = [int(c.leading_coefficient()) if not c.is_zero() else 0
              for c in poly_coeffs(p.num, name)]
    _, factors = flint.fmpz_poly(coeffs).factor()
    roots: list[Fraction] = []
    ctx = p.num.context()
    x = ctx.gen(ctx.variable_to_index(name))
    cof = ctx.constant(1)
    for f, mult in factors:
        if f.degree() == 1:
            b, a = int(f[0]), int(f[1])
            roots.extend([Fraction(-b, a)] * mult)
        else:
            fp = sum((int(f[i]) * x ** i for i in range(f.degree() + 1)), ctx.constant(0))
            cof = cof * fp ** mult
    return sorted(roots), MultiPoly._wrap(cof, 1).primitive()


def linear_factors(r: RatFunc, name: str):
    """Factor a rational function into linear factors in ``name``.

    Returns ``(const, ups, downs, rest_num, rest_den)`` where ``ups``/``downs``
    are lists of roots ``rho`` (RatFunc free of name) for factors ``(name - rho)``
    in numerator/denominator, ``const`` is the RatFunc (free of name) collecting
    leading coefficients, and rest_* are non-linear leftover factors.
    """
    vars_ = r.variables
    ctx = r.ctx
    i = ctx.variable_to_index(name)
    const = RatFunc.const(1, vars_)
    out = []
    rest = []
    for part, sign in ((r.num, 1), (r.den, -1)):
        c, facs = part.factor()
        const = const * (RatFunc.const(int(c), vars_) ** sign)
        roots = []
        left = RatFunc.const(1, vars_)
        for f, m in facs:
            d = f.degrees()[i]
            if d == 0:
                const = const * (RatFunc(f) ** (sign * m))
            elif d == 1:
                cs = poly_coeffs(f, name)
                lead = RatFunc(cs[1])
                const = const * (lead ** (sign * m))
                rho = -(RatFunc(cs[0]) / lead)
                roots.extend([rho] * m)
            else:
                left = left * RatFunc(f) ** m
        out.append(roots)
        rest.append(left)
    return const, out[0], out[1], rest[0], rest[1]
