"""Laurent polynomials and the expansion of their ratios into series."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import RankMismatch, ZeroDenominator
from .lattice import lex_key, lex_min, vadd
from .series import EXACT, TruncatedSeries, invert, make_series, mul, scale, shift

LOG = "log"
TOP = "top"


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    n: int
    terms: Mapping[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.n:
                raise RankMismatch(f"exponent {e} has rank {len(e)}, expected {self.n}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    @classmethod
    def constant(cls, n, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n, i):
        """The variable ``x_i`` (1-based)."""
        return cls(n, {tuple(int(j == i - 1) for j in range(n)): 1})

    def is_zero(self):
        return not self.terms

    def valuation(self) -> tuple:
        """Lex-minimal exponent of the support."""
        if not self.terms:
            raise ZeroDenominator("valuation of the zero polynomial")
        return lex_min(self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def to_series(self, precision=EXACT) -> TruncatedSeries:
        return make_series(self.terms, precision, n=self.n)

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.n == other.n and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            return other
        return LaurentPolynomial.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(self.n, out)

    def __neg__(self):
        return LaurentPolynomial(self.n, {e: -c for e, c in self.terms.items()})

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return LaurentPolynomial(self.n, {e: c * other for e, c in self.terms.items()})
        out: dict = {}
        for e, c in self.terms.items():
            for f, d in other.terms.items():
                k = vadd(e, f)
                out[k] = out.get(k, 0) + c * d
        return LaurentPolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms.items()
            return LaurentPolynomial(self.n, {tuple(k * x for x in e): Fraction(c) ** k})
        out = LaurentPolynomial.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        body = ", ".join(f"{e}: {c}" for e, c in sorted(self.terms.items(), key=lambda t: lex_key(t[0])))
        return f"LaurentPolynomial({self.n}, {{{body}}})"


def expand_rational(num: LaurentPolynomial, den: LaurentPolynomial, precision) -> TruncatedSeries:
    """The series of ``num / den`` in the lex-ordered field.

    The chart of ``den`` comes from the minimal element of its support.  When
    the truncated quotient turns out to be an exact Laurent polynomial, the
    exact result is returned.
    """
    if den.n != num.n:
        raise RankMismatch("numerator and denominator ranks differ")
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if num.is_zero():
        return TruncatedSeries.zero(num.n)
    if den.is_monomial():
        (e, c), = den.terms.items()
        return scale(shift(num.to_series(), tuple(-x for x in e)), 1 / Fraction(c))
    q = mul(num.to_series(), invert(den.to_series(), precision))
    candidate = LaurentPolynomial(num.n, q.terms())
    if candidate * den == num:
        return candidate.to_series()
    return q


def expand_form(h_num: LaurentPolynomial, h_den: LaurentPolynomial, measure: str, precision):
    """Logarithmic form for ``h * dx_1/x_1 ^ ...`` (LOG) or ``h * dx_1 ^ ...`` (TOP)."""
    from .calculus import LogDifferentialForm

    if measure == TOP:
        h_num = h_num * LaurentPolynomial(h_num.n, {(1,) * h_num.n: 1})
    elif measure != LOG:
        raise ValueError(f"unknown measure {measure!r}")
    return LogDifferentialForm(expand_rational(h_num, h_den, precision))
