"""Truncated iterated Laurent series with exact rational coefficients.

A :class:`TruncatedSeries` lives in a *chart* ``(offset p, cone G)``: its
terms sit at exponents ``p + G @ a`` with ``a`` a nonnegative integer vector,
and ``deg a = sum(a)``.  Precision ``N`` means every term of degree ``< N``
is stored exactly and every unknown term has degree ``>= N`` inside the same
chart.  ``EXACT`` (infinite precision) means nothing is unknown.

Charts are changed only in sound directions: re-expressing a series in a
chart whose region contains the old one bounds the new precision from the
vertices ``p + N g_j`` of the old unknown region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .cone import SimpleCone, common_cone, cone_coordinates, minimal_element
from .errors import InsufficientPrecision, RankMismatch
from .lattice import (
    FlagOfLattices,
    is_positive,
    lex_key,
    lex_min,
    semigroup_contains,
    vadd,
    vsub,
)

EXACT = math.inf


def _deg(a) -> int:
    return sum(a)


def _is_exact(precision) -> bool:
    return precision == EXACT


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    cone: SimpleCone
    offset: tuple
    coeffs: Mapping[tuple, Fraction] = field(default_factory=dict)
    precision: float | int = EXACT

    def __post_init__(self):
        n = self.cone.n
        if len(self.offset) != n:
            raise RankMismatch("offset rank differs from cone rank")
        clean = {}
        for a, c in self.coeffs.items():
            a = tuple(a)
            if len(a) != n or any(x < 0 for x in a):
                raise ValueError(f"bad cone coordinates {a}")
            if _deg(a) >= self.precision:
                raise ValueError(f"term {a} lies beyond precision {self.precision}")
            if c:
                clean[a] = Fraction(c)
        object.__setattr__(self, "offset", tuple(self.offset))
        object.__setattr__(self, "coeffs", clean)

    # -- construction ---------------------------------------------------

    @classmethod
    def zero(cls, n: int, precision=EXACT) -> "TruncatedSeries":
        return cls(SimpleCone.standard(n), (0,) * n, {}, precision)

    @classmethod
    def constant(cls, n: int, c) -> "TruncatedSeries":
        return cls.monomial((0,) * n, c)

    @classmethod
    def monomial(cls, exponent: Sequence[int], c=1) -> "TruncatedSeries":
        n = len(exponent)
        if not c:
            return cls.zero(n)
        return cls(SimpleCone.standard(n), tuple(exponent), {(0,) * n: Fraction(c)})

    # -- inspection -----------------------------------------------------

    @property
    def n(self) -> int:
        return self.cone.n

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.precision)

    def is_zero(self) -> bool:
        """No stored terms (an exact zero, or a truncated one)."""
        return not self.coeffs

    def exponent(self, a: Sequence[int]) -> tuple:
        return vadd(self.offset, self.cone.point(a))

    def terms(self) -> dict:
        """Stored terms keyed by exponent vector."""
        return {self.exponent(a): c for a, c in self.coeffs.items()}

    def sorted_terms(self) -> list:
        return sorted(self.terms().items(), key=lambda kv: lex_key(kv[0]))

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        """Coefficient at ``exponent``; raises if it is not known."""
        a = cone_coordinates(self.cone, vsub(exponent, self.offset))
        if any(x < 0 for x in a):
            return Fraction(0)
        if _deg(a) >= self.precision:
            raise InsufficientPrecision(
                f"coefficient at {tuple(exponent)} has degree {_deg(a)} "
                f">= precision {self.precision}"
            )
        return self.coeffs.get(a, Fraction(0))

    def __repr__(self):
        from .cli import format_series

        return f"TruncatedSeries({format_series(self)})"

    def __str__(self):
        from .cli import format_series

        return format_series(self)

    # -- operators ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Rational)):
            return TruncatedSeries.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return scale(self, other)
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return scale(self, Fraction(1) / Fraction(other))
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else mul(self, invert(other))

    def __pow__(self, k: int):
        return power(self, k)


@dataclass(frozen=True)
class Valuation:
    exponent: tuple
    coefficient: Fraction

    def __post_init__(self):
        if not self.coefficient:
            raise ValueError("valuation coefficient must be nonzero")


# -- charts ---------------------------------------------------------------


def _express(f: TruncatedSeries, offset, cone: SimpleCone):
    """Coordinates and precision of ``f`` in the chart ``(offset, cone)``.

    Raises ValueError when the chart does not contain the region of ``f``.
    """
    n = f.n
    b = cone_coordinates(cone, vsub(f.offset, offset))
    T = [cone_coordinates(cone, g) for g in f.cone.generators]
    coeffs = {}
    for a, c in f.coeffs.items():
        new = list(b)
        for aj, col in zip(a, T):
            if aj:
                for i in range(n):
                    new[i] += aj * col[i]
        if any(x < 0 for x in new):
            raise ValueError("chart does not contain the stored support")
        coeffs[tuple(new)] = c
    if f.is_exact:
        return coeffs, EXACT
    N = f.precision
    if any(x < 0 for col in T for x in col):
        raise ValueError("chart cone does not contain the series cone")
    for col in T:
        if any(N * x + y < 0 for x, y in zip(col, b)):
            raise ValueError("chart does not contain the unknown region")
    new_N = min(N * _deg(col) for col in T) + _deg(b)
    return {a: c for a, c in coeffs.items() if _deg(a) < new_N}, new_N


def rebase(f: TruncatedSeries, offset: Sequence[int], cone: SimpleCone) -> TruncatedSeries:
    """Re-express ``f`` in a chart whose region contains that of ``f``.

    The result is generally not canonical; :func:`canonical` restores that.
    """
    coeffs, N = _express(f, tuple(offset), cone)
    return TruncatedSeries(cone, tuple(offset), coeffs, N)


def _chart_vectors(f: TruncatedSeries, base) -> list:
    """Lex-positive vectors a cone must contain to hold ``f`` above ``base``."""
    vecs = []
    d = vsub(f.offset, base)
    if any(d):
        vecs.append(d)
    if f.is_exact:
        vecs.extend(f.cone.point(a) for a in f.coeffs if any(a))
    else:
        vecs.extend(f.cone.generators)
    return vecs


def _common_chart(series: Sequence[TruncatedSeries]):
    live = [f for f in series if not (f.is_exact and f.is_zero())]
    if not live:
        return None
    base = lex_min([f.offset for f in live])
    seed = live[0].cone
    vecs = []
    for f in live:
        vecs.extend(_chart_vectors(f, base))
    return base, common_cone(vecs, seed)


def canonical(
    offset: Sequence[int], cone: SimpleCone, coeffs: Mapping, precision
) -> TruncatedSeries:
    """Move the chart offset onto the lex-minimal stored term when that is sound.

    If the leading term of a truncated series has cancelled and some unknown
    term could undercut the smallest stored one, the chart is kept as is and
    the valuation stays undetermined.
    """
    offset = tuple(offset)
    n = cone.n
    coeffs = {a: c for a, c in coeffs.items() if c}
    if not coeffs:
        if _is_exact(precision):
            return TruncatedSeries.zero(n)
        return TruncatedSeries(cone, offset, {}, precision)
    lead = min(coeffs, key=lex_key)
    if not any(lead):
        return TruncatedSeries(cone, offset, coeffs, precision)
    s = vadd(offset, cone.point(lead))
    if _is_exact(precision):
        exps = {vadd(offset, cone.point(a)): c for a, c in coeffs.items()}
        s_min, new_cone = minimal_element(
            [vsub(e, offset) for e in exps], ambient=cone
        )
        new = {cone_coordinates(new_cone, vsub(e, s)): c for e, c in exps.items()}
        return TruncatedSeries(new_cone, s, new, EXACT)
    # vertices p + N g_j of the unknown region must stay above the new offset
    vecs = [vsub(vadd(offset, tuple(precision * x for x in g)), s) for g in cone.generators]
    vecs += [vsub(vadd(offset, cone.point(a)), s) for a in coeffs if a != lead]
    if any(not is_positive(v) for v in vecs):
        return TruncatedSeries(cone, offset, coeffs, precision)
    _, seed = minimal_element([cone.point(lead)], ambient=cone)
    new_cone = common_cone(vecs, seed)
    raw = TruncatedSeries(cone, offset, coeffs, precision)
    new, N = _express(raw, s, new_cone)
    return TruncatedSeries(new_cone, s, new, N)


def _canon(f: TruncatedSeries) -> TruncatedSeries:
    return canonical(f.offset, f.cone, f.coeffs, f.precision)


# -- public construction ----------------------------------------------------


def make_series(terms: Mapping[Sequence[int], object], precision=EXACT, n: int | None = None):
    """Series from an exponent -> coefficient map, charted at its minimal element.

    Terms whose degree in that chart reaches ``precision`` are dropped.
    """
    terms = {tuple(e): Fraction(c) for e, c in terms.items() if c}
    if not terms:
        if n is None:
            raise ValueError("rank needed for an empty series")
        return TruncatedSeries.zero(n, precision)
    s_min, cone = minimal_element(list(terms))
    coeffs = {}
    for e, c in terms.items():
        a = cone_coordinates(cone, vsub(e, s_min))
        if _deg(a) < precision:
            coeffs[a] = c
    return TruncatedSeries(cone, s_min, coeffs, precision)


# -- arithmetic -------------------------------------------------------------


def scale(f: TruncatedSeries, c) -> TruncatedSeries:
    c = Fraction(c)
    if not c:
        return TruncatedSeries.zero(f.n, f.precision) if f.is_exact else TruncatedSeries(
            f.cone, f.offset, {}, f.precision
        )
    return TruncatedSeries(f.cone, f.offset, {a: c * v for a, v in f.coeffs.items()}, f.precision)


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    if f.n != g.n:
        raise RankMismatch("series ranks differ")
    return sum_series([f, g], f.n)


def sum_series(series: Iterable[TruncatedSeries], n: int) -> TruncatedSeries:
    series = [s for s in series if not (s.is_exact and s.is_zero())]
    if not series:
        return TruncatedSeries.zero(n)
    base, cone = _common_chart(series)
    total: dict = {}
    N = EXACT
    for h in series:
        coeffs, hN = _express(h, base, cone)
        N = min(N, hN)
        for a, c in coeffs.items():
            total[a] = total.get(a, 0) + c
    total = {a: c for a, c in total.items() if c and _deg(a) < N}
    return canonical(base, cone, total, N)


def _mul_coeffs(fa: Mapping, ga: Mapping, N) -> dict:
    """Truncated product of coordinate dictionaries (degrees add)."""
    out: dict = {}
    gl = sorted(((_deg(b), b, c) for b, c in ga.items()), key=lambda t: t[0])
    for a, ca in fa.items():
        da = _deg(a)
        if da >= N:
            continue
        for db, b, cb in gl:
            if da + db >= N:
                break
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out.get(k, 0) + ca * cb
    return out


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    if f.n != g.n:
        raise RankMismatch("series ranks differ")
    if (f.is_exact and f.is_zero()) or (g.is_exact and g.is_zero()):
        return TruncatedSeries.zero(f.n)
    vecs = _chart_vectors(f, f.offset) + _chart_vectors(g, g.offset)
    cone = common_cone(vecs, f.cone)
    fc, fN = _express(f, f.offset, cone)
    gc, gN = _express(g, g.offset, cone)
    N = min(fN, gN)
    return canonical(vadd(f.offset, g.offset), cone, _mul_coeffs(fc, gc, N), N)


def valuation(f: TruncatedSeries) -> Valuation:
    lead = f.coeffs.get((0,) * f.n)
    if lead is None:
        if f.is_zero():
            raise InsufficientPrecision("valuation of a (truncated) zero series")
        raise InsufficientPrecision(
            "leading term cancelled; the valuation is not determined at this precision"
        )
    return Valuation(f.offset, lead)


def truncate(f: TruncatedSeries, precision) -> TruncatedSeries:
    """Forget every term of chart degree ``>= precision``."""
    N = min(f.precision, precision)
    if N == f.precision:
        return f
    return TruncatedSeries(
        f.cone, f.offset, {a: c for a, c in f.coeffs.items() if _deg(a) < N}, N
    )


def invert(f: TruncatedSeries, precision=None) -> TruncatedSeries:
    """Multiplicative inverse.

    With ``f = x^p c0 (1 + u)`` this is ``x^-p c0^-1 sum_k (-u)^k``, computed
    degree by degree.  An exact non-monomial needs an explicit ``precision``.
    """
    v = valuation(f)
    N = f.precision if precision is None else min(f.precision, precision)
    c0 = v.coefficient
    n = f.n
    zero = (0,) * n
    if len(f.coeffs) == 1 and f.is_exact:
        return TruncatedSeries(f.cone, tuple(-x for x in f.offset), {zero: 1 / c0}, EXACT)
    if _is_exact(N):
        raise ValueError("inverting an exact non-monomial series needs a precision")
    u = [(a, c / c0) for a, c in f.coeffs.items() if a != zero and _deg(a) < N]
    h = {zero: Fraction(1)}
    buckets: dict = {}
    for a, _ in u:
        buckets.setdefault(_deg(a), set()).add(a)
    for d in range(1, N):
        for a in sorted(buckets.get(d, ()), key=lex_key):
            total = 0
            for b, cb in u:
                r = tuple(x - y for x, y in zip(a, b))
                if min(r) >= 0:
                    hr = h.get(r)
                    if hr:
                        total -= cb * hr
            if total:
                h[a] = total
                for b, _ in u:
                    k = tuple(x + y for x, y in zip(a, b))
                    dk = _deg(k)
                    if dk < N:
                        buckets.setdefault(dk, set()).add(k)
    inv_c0 = 1 / c0
    return TruncatedSeries(
        f.cone, tuple(-x for x in f.offset), {a: inv_c0 * c for a, c in h.items()}, N
    )


def power(f: TruncatedSeries, k: int, precision=None) -> TruncatedSeries:
    if k < 0:
        return power(invert(f, precision), -k)
    result = TruncatedSeries.constant(f.n, 1)
    base = f
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def shift(f: TruncatedSeries, exponent: Sequence[int]) -> TruncatedSeries:
    """Multiply by the monomial ``x^exponent``."""
    return TruncatedSeries(f.cone, vadd(f.offset, exponent), f.coeffs, f.precision)


def in_O_L(f: TruncatedSeries, flag: FlagOfLattices) -> bool:
    return all(semigroup_contains(flag, e) for e in f.terms())


def equal_up_to(f: TruncatedSeries, g: TruncatedSeries, N) -> bool:
    """Whether ``f`` and ``g`` agree on all known terms of degree ``< N``.

    Both are re-expressed in a common chart; degrees are measured there and
    capped by the precision each series carries in that chart.
    """
    chart = _common_chart([f, g])
    if chart is None:
        return True
    base, cone = chart
    fc, fN = _express(f, base, cone)
    gc, gN = _express(g, base, cone)
    limit = min(N, fN, gN)
    keys = {a for a in fc if _deg(a) < limit} | {a for a in gc if _deg(a) < limit}
    return all(fc.get(a, 0) == gc.get(a, 0) for a in keys)
