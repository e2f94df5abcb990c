"""Classical and discrete orthogonal polynomial families.

Every family is stored through its three-term recurrence

    p_{n+1} = (A_n x + B_n) p_n - C_n p_{n-1},   p_0 = 1,  p_1 given,

with A, B, C written as plain Python callables so the same code runs on
Fractions (exact evaluation), RatFuncs (symbolic parameters) and mpfr values.
Discrete families use the hypergeometric normalizations

    charlier(n, mu, x)            = 2F0(-n, -x; ; -1/mu)
    meixner(n, gamma, mu, x)      = 2F1(-n, -x; gamma; 1 - 1/mu)
    krawtchouk(n, N, p, x)        = 2F1(-n, -x; -N; 1/p)
    hahn(n, N, alpha, beta, x)    = 3F2(-n, n+alpha+beta+1, -x; alpha+1, -N; 1)
    discrete_chebyshev(n, N, x)   = (1-N)_n 3F2(-n, -x, n+1; 1, 1-N; 1)
    discrete_laguerre(n, rho, alpha, x)
                                  = binomial(n+alpha, n) 2F1(-n, -x; alpha+1; 1 - 1/rho)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

import gmpy2

from .algebra import RatFunc

__all__ = ["OrthoFamily", "FAMILIES", "family", "ortho_exact_eval", "ortho_symbolic",
           "ortho_numeric_eval", "chebyshev_doubling", "ortho_recurrence",
           "hypergeometric_terms", "PrecisionError", "format_mpfr"]


class PrecisionError(ValueError):
    pass


@dataclass(frozen=True)
class OrthoFamily:
    name: str
    params: tuple[str, ...]
    A: Callable
    B: Callable
    C: Callable
    p1: Callable
    de: tuple[str, ...] | None = None
    xre: Callable | None = None
    hyper: Callable | None = None
    defaults: tuple = ()
    description: str = ""
    admissible: Callable | None = None
    series_zero: Callable | None = field(default=None, repr=False)

    @property
    def discrete(self) -> bool:
        return self.xre is not None

    # recurrence driver -----------------------------------------------------
    def _run(self, n: int, P: dict, x, one, zero):
        if n < 0:
            raise ValueError("degree must be nonnegative")
        if self.admissible is not None:
            self.admissible(n, P)
        prev, cur = one, self.p1(x, P)
        if n == 0:
            return prev
        for m in range(1, n):
            nn = one * m
            c = self.C(nn, P)
            nxt = (self.A(nn, P) * x + self.B(nn, P)) * cur - c * prev
            prev, cur = cur, nxt
        return cur

    def exact(self, n: int, params: dict, x) -> Fraction:
        P = {k: Fraction(v) for k, v in params.items()}
        return self._run(n, P, Fraction(x), Fraction(1), Fraction(0))

    def symbolic(self, n: int, params: dict, ring: tuple[str, ...] = (), one=None) -> list:
        """Coefficients (ascending in x) of p_n with coefficients in the given ring."""
        one = one if one is not None else (RatFunc.const(1, ring) if ring else Fraction(1))
        P = dict(params)
        return _PolyX.run(self, n, P, one).coeffs

    def series_at_zero(self, count: int, nval, params: dict, one):
        if self.series_zero is None:
            return None
        return self.series_zero(count, nval, params, one)


class _PolyX:
    """Tiny dense polynomial in x used to run the recurrence symbolically."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    @staticmethod
    def run(fam: OrthoFamily, n: int, P: dict, one):
        zero = one * 0
        X = _PolyX([zero, one])

        def lift(c):
            return _PolyX([c])

        def addp(a, b):
            m = max(len(a.coeffs), len(b.coeffs))
            return _PolyX([(a.coeffs[i] if i < len(a.coeffs) else zero)
                           + (b.coeffs[i] if i < len(b.coeffs) else zero) for i in range(m)])

        def scal(c, a):
            return _PolyX([c * t for t in a.coeffs])

        def mulx(a):
            return _PolyX([zero] + a.coeffs)

        p1 = fam.p1(_Sym(X, lift, addp, scal), P)
        p1 = p1.poly if isinstance(p1, _Sym) else lift(p1)
        if n == 0:
            return lift(one)
        prev, cur = lift(one), p1
        for m in range(1, n):
            nn = one * m
            nxt = addp(scal(fam.A(nn, P), mulx(cur)), scal(fam.B(nn, P), cur))
            nxt = addp(nxt, scal(-fam.C(nn, P), prev))
            prev, cur = cur, nxt
        while len(cur.coeffs) > 1 and cur.coeffs[-1] == 0:
            cur.coeffs.pop()
        return cur


class _Sym:
    """Wrapper letting p1 callables build polynomials in x."""

    def __init__(self, poly, lift, addp, scal):
        self.poly, self._lift, self._add, self._scal = poly, lift, addp, scal

    def _wrap(self, p):
        return _Sym(p, self._lift, self._add, self._scal)

    def __mul__(self, c):
        return self._wrap(self._scal(c, self.poly))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._wrap(self._scal(1 / c if not isinstance(c, int) else Fraction(1, c),
                                     self.poly))

    def __add__(self, c):
        other = c.poly if isinstance(c, _Sym) else self._lift(c)
        return self._wrap(self._add(self.poly, other))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self._scal(-1, self.poly))

    def __sub__(self, c):
        return self + (-c)

    def __rsub__(self, c):
        return (-self) + c


def _poch(a, n: int):
    out = a * 0 + 1
    for j in range(n):
        out = out * (a + j)
    return out


def _half(v):
    return v / 2 if not isinstance(v, int) else Fraction(v, 2)


def _nonneg_int(v):
    try:
        f = Fraction(v)
    except (TypeError, ValueError):
        return None
    return int(f) if f.denominator == 1 and f >= 0 else None


def _laguerre_series(count, nval, P, one):
    a = P.get("alpha", 0)
    if a != 0:
        return None
    out, c = [], one
    for k in range(count):
        out.append(c)
        c = c * (k - nval) / ((k + 1) ** 2)
    return out


def _krawtchouk_check(n, P):
    N = _nonneg_int(P["N"])
    if N is not None and n > N:
        raise ValueError(f"krawtchouk degree {n} exceeds N = {N}")


def _hahn_check(n, P):
    N = _nonneg_int(P["N"])
    if N is not None and n > N:
        raise ValueError(f"hahn degree {n} exceeds N = {N}")


def _hahn_AC(n, a, b, N):
    s = 2 * n + a + b
    An = (n + a + b + 1) * (n + a + 1) * (N - n) / ((s + 1) * (s + 2))
    Cn = n * (n + a + b + N + 1) * (n + b) / (s * (s + 1))
    return An, Cn


def _hahn_xre(x, n, P):
    a, b, N = P["alpha"], P["beta"], P["N"]
    B1 = (x + 1 + a + 1) * (x + 1 - N)
    D1 = (x + 1) * (x + 1 - b - N - 1)
    return (D1, -(B1 + D1 + n * (n + a + b + 1)), B1)


def _scaled(base_A, base_B, base_C, ratio):
    """Recurrence coefficients of s_n p_n given those of p_n and s_{n+1}/s_n."""
    return (lambda n, P: ratio(n, P) * base_A(n, P),
            lambda n, P: ratio(n, P) * base_B(n, P),
            lambda n, P: ratio(n, P) * ratio(n - 1, P) * base_C(n, P))


def _dc_params(P):
    return {"alpha": 0 * P["N"], "beta": 0 * P["N"], "N": P["N"] - 1}


def _hahnlike(P):
    return P["alpha"], P["beta"], P["N"]


_hahn_A = lambda n, P: -1 / _hahn_AC(n, *_hahnlike(P))[0]
_hahn_B = lambda n, P: sum(_hahn_AC(n, *_hahnlike(P))) / _hahn_AC(n, *_hahnlike(P))[0]
_hahn_C = lambda n, P: _hahn_AC(n, *_hahnlike(P))[1] / _hahn_AC(n, *_hahnlike(P))[0]

_dc_ratio = lambda n, P: n + 1 - P["N"]
_DC_A, _DC_B, _DC_C = _scaled(lambda n, P: _hahn_A(n, _dc_params(P)),
                              lambda n, P: _hahn_B(n, _dc_params(P)),
                              lambda n, P: _hahn_C(n, _dc_params(P)), _dc_ratio)

_meix_A = lambda n, P: (P["mu"] - 1) / (P["mu"] * (n + P["gamma"]))
_meix_B = lambda n, P: (n + (n + P["gamma"]) * P["mu"]) / (P["mu"] * (n + P["gamma"]))
_meix_C = lambda n, P: n / (P["mu"] * (n + P["gamma"]))


def _as_meixner(P):
    return {"gamma": P["alpha"] + 1, "mu": P["rho"]}


_dl_ratio = lambda n, P: (n + P["alpha"] + 1) / (n + 1)
_DL_A, _DL_B, _DL_C = _scaled(lambda n, P: _meix_A(n, _as_meixner(P)),
                              lambda n, P: _meix_B(n, _as_meixner(P)),
                              lambda n, P: _meix_C(n, _as_meixner(P)), _dl_ratio)


def _meixner_xre(x, n, P, beta="gamma", c="mu"):
    b, cc = P[beta], P[c]
    return ((x + 1), -((x + 1) + (x + 1 + b) * cc + n * (1 - cc)), cc * (x + 1 + b))


FAMILIES: dict[str, OrthoFamily] = {f.name: f for f in [
    OrthoFamily(
        "legendre_p", (),
        A=lambda n, P: (2 * n + 1) / (n + 1), B=lambda n, P: 0 * n,
        C=lambda n, P: n / (n + 1), p1=lambda x, P: x,
        de=("n*(n+1)", "-2*x", "1-x^2"),
        hyper=lambda n, P: (1, [-n, n + 1], [1], "(1-x)/2"),
        description="Legendre P_n(x)"),
    OrthoFamily(
        "chebyshev_t", (),
        A=lambda n, P: 2 + 0 * n, B=lambda n, P: 0 * n, C=lambda n, P: 1 + 0 * n,
        p1=lambda x, P: x, de=("n^2", "-x", "1-x^2"),
        hyper=lambda n, P: (1, [-n, n], [Fraction(1, 2)], "(1-x)/2"),
        description="Chebyshev T_n(x)"),
    OrthoFamily(
        "chebyshev_u", (),
        A=lambda n, P: 2 + 0 * n, B=lambda n, P: 0 * n, C=lambda n, P: 1 + 0 * n,
        p1=lambda x, P: 2 * x, de=("n*(n+2)", "-3*x", "1-x^2"),
        hyper=lambda n, P: (n + 1, [-n, n + 2], [Fraction(3, 2)], "(1-x)/2"),
        description="Chebyshev U_n(x)"),
    OrthoFamily(
        "hermite_h", (),
        A=lambda n, P: 2 + 0 * n, B=lambda n, P: 0 * n, C=lambda n, P: 2 * n,
        p1=lambda x, P: 2 * x, de=("2*n", "-2*x", "1"),
        description="Hermite H_n(x) (physicists')"),
    OrthoFamily(
        "laguerre_l", ("alpha",),
        A=lambda n, P: -1 / (n + 1), B=lambda n, P: (2 * n + 1 + P["alpha"]) / (n + 1),
        C=lambda n, P: (n + P["alpha"]) / (n + 1),
        p1=lambda x, P: -x + (1 + P["alpha"]),
        de=("n", "alpha+1-x", "x"),
        hyper=lambda n, P: (_poch(P["alpha"] + 1, n) / factorial(n), [-n], [P["alpha"] + 1], "x"),
        defaults=(0,), series_zero=_laguerre_series,
        description="Laguerre L_n^(alpha)(x); laguerre_l(n, x) has alpha = 0"),
    OrthoFamily(
        "gegenbauer_c", ("alpha",),
        A=lambda n, P: 2 * (n + P["alpha"]) / (n + 1), B=lambda n, P: 0 * n,
        C=lambda n, P: (n + 2 * P["alpha"] - 1) / (n + 1),
        p1=lambda x, P: 2 * P["alpha"] * x,
        de=("n*(n+2*alpha)", "-(2*alpha+1)*x", "1-x^2"),
        hyper=lambda n, P: (_poch(2 * P["alpha"], n) / factorial(n), [-n, n + 2 * P["alpha"]],
                            [P["alpha"] + Fraction(1, 2)], "(1-x)/2"),
        description="Gegenbauer C_n^(alpha)(x)"),
    OrthoFamily(
        "jacobi_p", ("alpha", "beta"),
        A=lambda n, P: (2 * n + P["alpha"] + P["beta"] + 1) * (2 * n + P["alpha"] + P["beta"] + 2)
        / (2 * (n + 1) * (n + P["alpha"] + P["beta"] + 1)),
        B=lambda n, P: (2 * n + P["alpha"] + P["beta"] + 1) * (P["alpha"] ** 2 - P["beta"] ** 2)
        / (2 * (n + 1) * (n + P["alpha"] + P["beta"] + 1) * (2 * n + P["alpha"] + P["beta"])),
        C=lambda n, P: (n + P["alpha"]) * (n + P["beta"]) * (2 * n + P["alpha"] + P["beta"] + 2)
        / ((n + 1) * (n + P["alpha"] + P["beta"] + 1) * (2 * n + P["alpha"] + P["beta"])),
        p1=lambda x, P: _half((P["alpha"] + P["beta"] + 2) * x + (P["alpha"] - P["beta"])),
        de=("n*(n+alpha+beta+1)", "beta-alpha-(alpha+beta+2)*x", "1-x^2"),
        hyper=lambda n, P: (_poch(P["alpha"] + 1, n) / factorial(n),
                            [-n, n + P["alpha"] + P["beta"] + 1], [P["alpha"] + 1], "(1-x)/2"),
        description="Jacobi P_n^(alpha,beta)(x)"),
    OrthoFamily(
        "charlier", ("mu",),
        A=lambda n, P: -1 / P["mu"], B=lambda n, P: (n + P["mu"]) / P["mu"],
        C=lambda n, P: n / P["mu"], p1=lambda x, P: -x / P["mu"] + 1,
        xre=lambda x, n, P: (x + 1, -(x + 1 + P["mu"] - n), P["mu"]),
        hyper=lambda n, P: (1, [-n, "-x"], [], -1 / P["mu"]),
        description="Charlier C_n(x; mu) = 2F0(-n, -x; ; -1/mu)"),
    OrthoFamily(
        "meixner", ("gamma", "mu"),
        A=_meix_A, B=_meix_B, C=_meix_C,
        p1=lambda x, P: x * (1 - 1 / P["mu"]) / P["gamma"] + 1,
        xre=_meixner_xre,
        hyper=lambda n, P: (1, [-n, "-x"], [P["gamma"]], 1 - 1 / P["mu"]),
        description="Meixner M_n(x; gamma, mu) = 2F1(-n, -x; gamma; 1 - 1/mu)"),
    OrthoFamily(
        "krawtchouk", ("N", "p"),
        A=lambda n, P: -1 / (P["p"] * (P["N"] - n)),
        B=lambda n, P: (P["p"] * (P["N"] - n) + n * (1 - P["p"])) / (P["p"] * (P["N"] - n)),
        C=lambda n, P: n * (1 - P["p"]) / (P["p"] * (P["N"] - n)),
        p1=lambda x, P: -x / (P["N"] * P["p"]) + 1,
        xre=lambda x, n, P: ((x + 1) * (1 - P["p"]),
                             -(P["p"] * (P["N"] - x - 1) + (x + 1) * (1 - P["p"]) - n),
                             P["p"] * (P["N"] - x - 1)),
        hyper=lambda n, P: (1, [-n, "-x"], [-P["N"]], 1 / P["p"]),
        admissible=_krawtchouk_check,
        description="Krawtchouk K_n(x; p, N) = 2F1(-n, -x; -N; 1/p)"),
    OrthoFamily(
        "hahn", ("N", "alpha", "beta"),
        A=_hahn_A, B=_hahn_B, C=_hahn_C,
        p1=lambda x, P: -(P["alpha"] + P["beta"] + 2) * x / ((P["alpha"] + 1) * P["N"]) + 1,
        xre=_hahn_xre,
        hyper=lambda n, P: (1, [-n, n + P["alpha"] + P["beta"] + 1, "-x"],
                            [P["alpha"] + 1, -P["N"]], 1),
        admissible=_hahn_check,
        description="Hahn Q_n(x; alpha, beta, N) = 3F2(-n, n+alpha+beta+1, -x; alpha+1, -N; 1)"),
    OrthoFamily(
        "discrete_chebyshev", ("N",),
        A=_DC_A, B=_DC_B, C=_DC_C,
        p1=lambda x, P: 2 * x + (1 - P["N"]),
        xre=lambda x, n, P: _hahn_xre(x, n, _dc_params(P)),
        hyper=lambda n, P: (_poch(1 - P["N"], n), [-n, "-x", n + 1], [1, 1 - P["N"]], 1),
        description="discrete Chebyshev t_n(x, N) = (1-N)_n 3F2(-n, -x, n+1; 1, 1-N; 1)"),
    OrthoFamily(
        "discrete_laguerre", ("rho", "alpha"),
        A=_DL_A, B=_DL_B, C=_DL_C,
        p1=lambda x, P: (P["alpha"] + 1) * (x * (1 - 1 / P["rho"]) / (P["alpha"] + 1) + 1),
        xre=lambda x, n, P: _meixner_xre(x, n, _as_meixner(P)),
        hyper=lambda n, P: (_poch(P["alpha"] + 1, n) / factorial(n), [-n, "-x"], [P["alpha"] + 1],
                            1 - 1 / P["rho"]),
        description="discrete Laguerre binomial(n+alpha, n) 2F1(-n, -x; alpha+1; 1 - 1/rho)"),
]}


def family(name: str) -> OrthoFamily:
    from .expr import canonical_atom_name
    name = canonical_atom_name(name)
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    return FAMILIES[name]


def _params_for(fam: OrthoFamily, params) -> dict:
    if isinstance(params, dict):
        P = dict(params)
    else:
        params = list(params)
        if len(params) < len(fam.params) and len(params) + len(fam.defaults) == len(fam.params):
            params = params + list(fam.defaults)
        if len(params) != len(fam.params):
            raise ValueError(f"{fam.name} expects parameters {fam.params}")
        P = dict(zip(fam.params, params))
    missing = set(fam.params) - set(P)
    for name, d in zip(fam.params[len(fam.params) - len(fam.defaults):], fam.defaults):
        if name in missing:
            P[name] = d
            missing.discard(name)
    if missing:
        raise ValueError(f"{fam.name} missing parameters {sorted(missing)}")
    return P


def ortho_exact_eval(name: str, n: int, params=(), x=None):
    """Exact value at rational x, or the expanded polynomial when x is a symbol.

    Symbolic parameters (strings) are allowed; the result is then a RatFunc.
    """
    fam = family(name)
    P = _params_for(fam, params)
    symbolic = [k for k, v in P.items() if isinstance(v, str)]
    if isinstance(x, str) or x is None or symbolic:
        xname = x if isinstance(x, str) else None
        names = sorted(set(v for v in P.values() if isinstance(v, str)) | ({xname} - {None}))
        ring = tuple(names)
        one = RatFunc.const(1, ring)
        Pr = {k: (RatFunc.var(v, ring) if isinstance(v, str) else one * Fraction(v))
              for k, v in P.items()}
        coeffs = fam.symbolic(n, Pr, ring, one)
        if xname is None:
            xv = one * Fraction(x)
            out = one * 0
            for c in reversed(coeffs):
                out = out * xv + c
            return out
        X = RatFunc.var(xname, ring)
        out = one * 0
        for c in reversed(coeffs):
            out = out * X + c
        return out
    return fam.exact(n, {k: Fraction(v) for k, v in P.items()}, Fraction(x))


def ortho_symbolic(name: str, n: int, params=(), x: str = "x") -> RatFunc:
    return ortho_exact_eval(name, n, params, x)


def hypergeometric_terms(name: str, n: int, params=(), x: str = "x"):
    """Summands of the family's hypergeometric representation as RatFuncs.

    Term j is prefactor * prod (a)_j / prod (b)_j * z^j / j! for j = 0..n.
    """
    from .expr import parse_expr, to_ratfunc, subs
    fam = family(name)
    if fam.hyper is None:
        raise ValueError(f"{fam.name} has no registered hypergeometric form")
    P = _params_for(fam, params)
    names = sorted(set(v for v in P.values() if isinstance(v, str)) | {x})
    ring = tuple(names)
    one = RatFunc.const(1, ring)
    Pr = {k: (RatFunc.var(v, ring) if isinstance(v, str) else one * Fraction(v))
          for k, v in P.items()}
    pre, ups, downs, z = fam.hyper(n, Pr)

    def conv(v):
        if isinstance(v, str):
            return to_ratfunc(subs(parse_expr(v), {"x": x}), ring)
        return v if isinstance(v, RatFunc) else one * v

    pre = conv(pre)
    ups = [conv(a) for a in ups]
    downs = [conv(b) for b in downs]
    z = conv(z)
    out, term = [], pre
    for j in range(n + 1):
        out.append(term)
        num = one
        for a in ups:
            num = num * (a + j)
        den = one * (j + 1)
        for b in downs:
            den = den * (b + j)
        if num.is_zero():
            break
        term = term * num / den * z
    return out


# ---------------------------------------------------------------------------
# numerics
# ---------------------------------------------------------------------------

def _to_mpfr(x, prec: int):
    with gmpy2.context(precision=prec):
        if isinstance(x, Fraction):
            return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
        if isinstance(x, str):
            try:
                f = Fraction(x)
                return gmpy2.mpfr(gmpy2.mpq(f.numerator, f.denominator))
            except ValueError:
                return gmpy2.mpfr(x)
        return gmpy2.mpfr(x)


def chebyshev_doubling(n: int, x):
    """T_n(x) from the pair (T_m, T_{m+1}) by binary decomposition of n.

    Works for any ring element supporting +, -, * (Fraction, RatFunc, mpfr).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    one = x * 0 + 1
    a, b = one, x  # T_0, T_1
    for bit in bin(n)[2:]:
        if bit == "0":
            a, b = 2 * a * a - one, 2 * a * b - x
        else:
            a, b = 2 * a * b - x, 2 * b * b - one
    return a


def guard_bits(n: int) -> int:
    return 32 + 2 * max(n, 1).bit_length()


def ortho_numeric_eval(name: str, n: int, params=(), x="0", digits: int | None = None,
                       precision: int | None = None):
    """Value as a gmpy2 mpfr rounded to the requested precision.

    ``digits`` (decimal) or ``precision`` (bits) fixes the target; the work is
    done with ``guard_bits(n)`` extra bits.
    """
    if precision is None:
        if digits is None:
            raise ValueError("give digits or precision")
        precision = int(digits * 3.3219280948873626) + 4
    if precision < 16:
        raise PrecisionError("precision must be at least 16 bits")
    fam = family(name)
    work = precision + guard_bits(n)
    with gmpy2.context(precision=work):
        xv = _to_mpfr(x if not isinstance(x, (int, float)) else str(x), work)
        if fam.name == "chebyshev_t":
            val = chebyshev_doubling(n, xv)
        else:
            if n > 10 ** 7:
                raise PrecisionError(f"forward recurrence for {fam.name} is limited to n <= 10^7")
            P = {k: _to_mpfr(str(v), work) for k, v in _params_for(fam, params).items()}
            val = fam._run(n, P, xv, gmpy2.mpfr(1), gmpy2.mpfr(0))
    with gmpy2.context(precision=precision):
        return +val


def format_mpfr(v, digits: int) -> str:
    """Decimal scientific notation with ``digits`` significant digits (round half even)."""
    q = Fraction(*v.as_integer_ratio())
    if q == 0:
        return "0." + "0" * (digits - 1) + "e+00"
    sign = "-" if q < 0 else ""
    q = abs(q)
    e = len(str(q.numerator)) - len(str(q.denominator))
    if q >= Fraction(10) ** e:
        e += 0
    else:
        e -= 1
    scaled = q * Fraction(10) ** (digits - 1 - e)
    m = round(scaled)
    if m >= 10 ** digits:
        m //= 10
        e += 1
    s = str(m)
    return f"{sign}{s[0]}.{s[1:]}e{e:+03d}"


def ortho_recurrence(name: str, params=(), direction: str = "n", index: str | None = None,
                     arg: str = "x"):
    """Registered recurrence of the family, normalized, as a HolonomicRE."""
    from .holonomic import family_re
    return family_re(family(name), params, direction, index, arg)
