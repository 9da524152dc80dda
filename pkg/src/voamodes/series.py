"""Exact formal Laurent/log series calculus over the rationals.

A series is a finite map from (exponent, logpow) keys to coefficients.
Exponents are `Fraction`s (so x^(1/8) is a legal monomial), logpow is the
power of log x.  Coefficients live in any abelian group written
additively in Python: `Fraction`s, or the sparse vectors from the
oscillator modules.  Nothing here is ever rounded; zero coefficients are
dropped eagerly so equality is plain dict equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import LogPresent

Q = Fraction


def rat(value) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def rat_str(value: Fraction) -> str:
    """Render a rational as 'p' or 'p/q' (lowest terms, q > 0)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def gen_binomial(a, m: int) -> Fraction:
    """Generalized binomial a(a-1)...(a-m+1)/m! for integer or rational a.

    For integer a >= 0 and m > a this vanishes; for negative or fractional
    a it never does.
    """
    if m < 0:
        raise ValueError("lower index of a binomial must be a natural number")
    return _binom_cached(rat(a), m)


@lru_cache(maxsize=None)
def _binom_cached(a: Fraction, m: int) -> Fraction:
    num = Fraction(1)
    for i in range(m):
        num *= a - i
    return num / factorial(m)


class LogLaurent:
    """Finitely supported sum  c_{s,k} * x^s * (log x)^k.

    Immutable; arithmetic returns new instances.  `terms` maps
    (Fraction exponent, int logpow) to a nonzero coefficient.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for (exp, logpow), coeff in terms.items():
                if _is_zero(coeff):
                    continue
                cleaned[(Q(exp), int(logpow))] = coeff
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, *a):
        raise AttributeError("LogLaurent is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def monomial(cls, coeff, exponent, logpow: int = 0):
        return cls({(rat(exponent), logpow): coeff})

    # -- ring-module structure --------------------------------------------

    def __add__(self, other: "LogLaurent") -> "LogLaurent":
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            cur = out.get(key)
            out[key] = coeff if cur is None else cur + coeff
        return LogLaurent(out)

    def __sub__(self, other: "LogLaurent") -> "LogLaurent":
        return self + other.scale(Q(-1))

    def scale(self, scalar) -> "LogLaurent":
        scalar = rat(scalar)
        if scalar == 0:
            return LogLaurent()
        return LogLaurent({k: _scale_coeff(c, scalar) for k, c in self.terms.items()})

    def shift(self, exponent) -> "LogLaurent":
        """Multiply by x^exponent."""
        d = rat(exponent)
        return LogLaurent({(e + d, k): c for (e, k), c in self.terms.items()})

    def mul_scalar_series(self, other: "LogLaurent") -> "LogLaurent":
        """Multiply by a series with Fraction coefficients (on the left)."""
        out = {}
        for (e1, k1), c1 in other.terms.items():
            if not isinstance(c1, Fraction) and not isinstance(c1, int):
                raise TypeError("left factor must have scalar coefficients")
            for (e2, k2), c2 in self.terms.items():
                key = (e1 + e2, k1 + k2)
                piece = _scale_coeff(c2, Q(c1))
                cur = out.get(key)
                out[key] = piece if cur is None else cur + piece
        return LogLaurent(out)

    # -- queries -----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, LogLaurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exponent, logpow: int = 0):
        return self.terms.get((rat(exponent), logpow))

    def exponents(self):
        return sorted({e for e, _ in self.terms})

    def max_logpow(self) -> int:
        return max((k for _, k in self.terms), default=0)

    def truncate_above(self, exponent) -> "LogLaurent":
        """Drop all terms with exponent strictly above the given bound."""
        bound = rat(exponent)
        return LogLaurent({k: c for k, c in self.terms.items() if k[0] <= bound})

    def __repr__(self):
        if not self.terms:
            return "LogLaurent(0)"
        bits = []
        for (e, k) in sorted(self.terms):
            mono = f"x^{rat_str(e)}" + (f"(log x)^{k}" if k else "")
            bits.append(f"[{self.terms[(e, k)]}]*{mono}")
        return "LogLaurent(" + " + ".join(bits) + ")"


def _is_zero(coeff) -> bool:
    if isinstance(coeff, (int, Fraction)):
        return coeff == 0
    return coeff.is_zero()


def _scale_coeff(coeff, scalar: Fraction):
    if isinstance(coeff, (int, Fraction)):
        return coeff * scalar
    return coeff.scale(scalar)


def residue(series: LogLaurent, zero=Q(0)):
    """Coefficient of x^-1.  Rejects series still carrying log x.

    `zero` is returned when the term is absent; pass the zero of the
    coefficient space for vector-valued series.
    """
    if series.max_logpow() > 0:
        raise LogPresent("extract a log coefficient before taking residues")
    value = series.coeff(Q(-1), 0)
    return zero if value is None else value


def coeff_log(series: LogLaurent, k: int) -> LogLaurent:
    """The plain Laurent series multiplying (log x)^k."""
    return LogLaurent(
        {(e, 0): c for (e, kk), c in series.terms.items() if kk == k}
    )


def truncated_taylor(alpha: int, order: int) -> LogLaurent:
    """Taylor polynomial in x^-1 of the given order of (x+1)^alpha.

    Expanding (x+1)^alpha = sum_m C(alpha,m) x^(alpha-m), the term x^(alpha-m)
    carries x^-1 to the power m-alpha; keeping powers of x^-1 at most `order`
    means keeping m <= alpha + order.  When alpha + order < 0 the polynomial
    is empty.
    """
    out = {}
    for m in range(0, alpha + order + 1):
        c = gen_binomial(alpha, m)
        if c != 0:
            out[(Q(alpha - m), 0)] = c
    return LogLaurent(out)


def taylor_bound_variants(alpha: int, order: int, alt_top: int):
    """Diagnostic: the order-based truncation vs an explicit top index.

    Returns (order_rule, alt_rule, agree).  The alternative keeps
    m = 0..alt_top regardless of `order`; useful for comparing the two
    inner-sum bounds that appear in the matrix-product literature.
    """
    order_rule = truncated_taylor(alpha, order)
    out = {}
    for m in range(0, alt_top + 1):
        c = gen_binomial(alpha, m)
        if c != 0:
            out[(Q(alpha - m), 0)] = c
    alt_rule = LogLaurent(out)
    return order_rule, alt_rule, order_rule == alt_rule


def binom_series(alpha, maxdeg: int) -> LogLaurent:
    """(1+x)^alpha as a power series in x, truncated at degree maxdeg.

    alpha may be any exact rational; the coefficients are the generalized
    binomials C(alpha, m).
    """
    alpha = rat(alpha)
    out = {}
    for m in range(0, maxdeg + 1):
        c = gen_binomial(alpha, m)
        if c != 0:
            out[(Q(m), 0)] = c
    return LogLaurent(out)
