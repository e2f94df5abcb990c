"""Truncated series solutions of holonomic DEs by iterating the coefficient recurrence."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .algebra import RatFunc
from .expr import Expr, TruncSeries, parse_expr, series_truncated, expand_special
from .holonomic import HolonomicDE, HolonomicError, HolonomicRE, de_from_expr, de_to_re, ring_of

__all__ = ["OpCounter", "MissingInitialValue", "mandatory_indices", "iterate_re",
           "series_solution", "taylor"]


class MissingInitialValue(HolonomicError):
    def __init__(self, index: int):
        super().__init__(f"initial value a[{index}] is required (leading recurrence "
                         f"coefficient vanishes there)")
        self.index = index


class OpCounter:
    """Counts arithmetic operations on coefficient values."""

    def __init__(self):
        self.ops = 0

    def add(self, n: int = 1):
        self.ops += n


def _int_roots(q: RatFunc, k: str) -> list[int]:
    out = set()
    for f, _ in q.num.factor()[1]:
        r = RatFunc(f, _reduced=True)
        if r.used_variables() != {k} or r.degree(k) != 1:
            continue
        c0, c1 = r.coeffs_in(k)
        root = -(c0 / c1).constant_value()
        if root.denominator == 1:
            out.add(int(root))
    return sorted(out)


def mandatory_indices(rec: HolonomicRE, start: int = 0) -> list[int]:
    """Indices m >= start where a_m is not determined by the recurrence."""
    M = rec.order
    return [r + M for r in _int_roots(rec.coeffs[-1], rec.index) if r + M >= start]


class _Coeff:
    """Fast evaluation of a recurrence coefficient at integer k."""

    def __init__(self, q: RatFunc, k: str):
        self.k = k
        self.q = q
        others = q.used_variables() - {k}
        if others:
            self.ints = None
            self.ring = tuple(v for v in q.variables if v != k)
        else:
            cs = q.coeffs_in(k)
            self.ints = [c.constant_value() for c in cs]

    def __call__(self, kk: int, counter: OpCounter | None):
        if self.ints is None:
            if counter:
                counter.add(len(self.q.coeffs_in(self.k)))
            return self.q.evaluate({self.k: kk}).embed(self.ring)
        acc = Fraction(0)
        for c in reversed(self.ints):
            acc = acc * kk + c
        if counter:
            counter.add(2 * len(self.ints))
        return acc


def _is_zero(v) -> bool:
    return v.is_zero() if isinstance(v, RatFunc) else v == 0


def iterate_re(rec: HolonomicRE, initial: dict, upto: int,
               counter: OpCounter | None = None) -> dict:
    """a_m for min(0, min initial index) <= m <= upto; the RE holds for every k."""
    M = rec.order
    k = rec.index
    qs = [_Coeff(q, k) for q in rec.coeffs]
    start = min([0] + list(initial))
    vals: dict = {}
    for m in range(start, upto + 1):
        if m in initial:
            vals[m] = initial[m]
            continue
        kk = m - M
        lead = qs[-1](kk, counter)
        acc = 0
        for j in range(M):
            a = vals.get(kk + j, 0)
            if _is_zero(a):
                continue
            acc = acc + qs[j](kk, counter) * a
            if counter:
                counter.add(2)
        if _is_zero(lead):
            if not _is_zero(acc):
                raise HolonomicError(f"recurrence inconsistent at a[{m}]")
            raise MissingInitialValue(m)
        vals[m] = -acc / lead
        if counter:
            counter.add(1)
    return vals


def _value(v, ring):
    if isinstance(v, RatFunc):
        return v if v.variables == ring else v.embed(ring)
    if isinstance(v, str):
        from .expr import to_ratfunc
        return to_ratfunc(parse_expr(v), ring)
    return Fraction(v)


def _symbols(v) -> set:
    if isinstance(v, RatFunc):
        return v.used_variables()
    if isinstance(v, str):
        from .expr import free_symbols
        return free_symbols(parse_expr(v))
    return set()


def series_solution(de: HolonomicDE, init, order: int, derivatives: bool = False,
                    counter: OpCounter | None = None) -> TruncSeries:
    """Coefficients a_0..a_order of the power series solution with the given initial data.

    ``init`` maps coefficient indices to values (a list means indices 0, 1, ...).
    Values may be numbers, RatFuncs or strings naming symbolic constants.  With
    ``derivatives`` the values are y^(m)(0) and are divided by m!.
    """
    if isinstance(init, (list, tuple)):
        init = dict(enumerate(init))
    rec = de_to_re(de, "_k")
    names = set(rec.ring) - {"_k"}
    for v in init.values():
        names |= _symbols(v)
    ring = ring_of(names) if names else ()
    vals = {}
    for m, v in init.items():
        v = _value(v, ring) if ring else _value(v, ())
        if derivatives:
            v = v / factorial(m)
        vals[int(m)] = v
    for m in mandatory_indices(rec):
        if m <= order and m not in vals:
            raise MissingInitialValue(m)
    if ring and rec.ring != ring_of(ring, "_k"):
        rec = HolonomicRE.make("_k", rec.coeffs, ring=ring_of(ring, "_k"))
    out = iterate_re(rec, vals, order, counter)
    coeffs = tuple(out.get(m, 0) for m in range(0, order + 1))
    return TruncSeries(coeffs, 0, 1, order + 1)


def taylor(e: Expr | str, order: int, var: str = "x",
           counter: OpCounter | None = None) -> TruncSeries:
    """Series of e through x^order via its DE and coefficient recurrence."""
    if isinstance(e, str):
        e = parse_expr(e)
    e = expand_special(e)
    de = de_from_expr(e, var)
    rec = de_to_re(de, "_k")
    M = rec.order
    boot = max([M - 1] + mandatory_indices(rec, start=-10 ** 6))
    boot = min(boot, order)
    head = series_truncated(e, boot, var)
    if head.p != 1:
        raise HolonomicError("taylor handles integer-power expansions only")
    init = {head.val + i: c for i, c in enumerate(head.coeffs) if head.val + i <= boot}
    for m in range(0, boot + 1):
        init.setdefault(m, 0)
    names = set(rec.ring) - {"_k"}
    for v in init.values():
        names |= _symbols(v)
    if names:
        ring = ring_of(names)
        init = {m: _value(v, ring) for m, v in init.items()}
        rec = HolonomicRE.make("_k", rec.coeffs, ring=ring_of(ring, "_k"))
    out = iterate_re(rec, init, order, counter)
    lo = min(out)
    coeffs = tuple(out.get(m, 0) for m in range(lo, order + 1))
    return TruncSeries(coeffs, lo, 1, order + 1).trim()
