"""Puiseux roots of polynomial equations with series coefficients.

Roots are found in three steps: ramify ``x_i -> z_i^N`` so that the Newton
polygon slopes become integral, pick leading terms ``c z^m`` from each slope
by rational-root search on its edge polynomial, then Newton-iterate each
simple leading term to the requested precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InsufficientPrecision, NonSimpleRoot
from .lattice import lex_key
from .rational import LaurentPolynomial
from .series import (
    EXACT,
    TruncatedSeries,
    add,
    invert,
    mul,
    scale,
    truncate,
    valuation,
)


def _as_series(c, n: int) -> TruncatedSeries:
    if isinstance(c, TruncatedSeries):
        return c
    if isinstance(c, LaurentPolynomial):
        return c.to_series()
    return TruncatedSeries.constant(n, c)


@dataclass(frozen=True)
class PolynomialOverSeries:
    """``g_0 + g_1 t + ... + g_k t^k`` with ``g_k`` of known valuation."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = list(self.coefficients)
        n = next(c.n for c in coeffs if isinstance(c, (TruncatedSeries, LaurentPolynomial)))
        coeffs = [_as_series(c, n) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1].is_exact and coeffs[-1].is_zero():
            coeffs.pop()
        valuation(coeffs[-1])
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def n(self) -> int:
        return self.coefficients[0].n

    def derivative(self) -> "PolynomialOverSeries":
        return PolynomialOverSeries(
            tuple(scale(c, i) for i, c in enumerate(self.coefficients) if i)
        )


def evaluate_poly(g: PolynomialOverSeries, t: TruncatedSeries) -> TruncatedSeries:
    acc = g.coefficients[-1]
    for c in reversed(g.coefficients[:-1]):
        acc = add(mul(acc, t), c)
    return acc


def ramify(obj, N: int):
    """Substitute ``x_i = z_i^N``: every exponent and the precision scale by N."""
    if N < 1:
        raise ValueError("ramification index must be positive")
    if isinstance(obj, PolynomialOverSeries):
        return PolynomialOverSeries(tuple(ramify(c, N) for c in obj.coefficients))
    if N == 1:
        return obj
    return TruncatedSeries(
        obj.cone,
        tuple(N * x for x in obj.offset),
        {tuple(N * x for x in a): c for a, c in obj.coeffs.items()},
        obj.precision * N,
    )


@dataclass(frozen=True)
class Slope:
    """Candidate root valuation ``exponent`` with its edge polynomial.

    ``leading_poly[i]`` is the coefficient of ``c^i``.
    """

    exponent: tuple
    leading_poly: tuple

    @property
    def integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.exponent)


class RequiresRamification(Slope):
    """A slope whose exponent is not integral in the current lattice."""


def newton_slopes(g: PolynomialOverSeries) -> list[Slope]:
    """All slopes of the Newton polygon, in descending lex order.

    A vector ``m`` is a slope when the minimum over i of ``v(g_i) + i m`` is
    attained at two or more indices.  Non-integral slopes come back as
    :class:`RequiresRamification`.
    """
    vals = {}
    lcs = {}
    for i, c in enumerate(g.coefficients):
        if c.is_exact and c.is_zero():
            continue
        v = valuation(c)
        vals[i] = tuple(Fraction(x) for x in v.exponent)
        lcs[i] = v.coefficient
    if len(vals) < 2:
        raise ValueError("need at least two nonzero coefficients")
    seen = {}
    idx = sorted(vals)
    for a_pos, i in enumerate(idx):
        for j in idx[a_pos + 1:]:
            m = tuple((x - y) / (j - i) for x, y in zip(vals[i], vals[j]))
            if m in seen:
                continue
            values = {l: tuple(x + l * y for x, y in zip(vals[l], m)) for l in idx}
            low = min(values.values(), key=lex_key)
            hit = [l for l in idx if values[l] == low]
            if i in hit and j in hit:
                poly = [Fraction(0)] * (max(hit) + 1)
                for l in hit:
                    poly[l] = lcs[l]
                seen[m] = tuple(poly)
    out = []
    for m in sorted(seen, key=lex_key, reverse=True):
        exponent = tuple(int(x) if x.denominator == 1 else x for x in m)
        cls = Slope if all(x.denominator == 1 for x in m) else RequiresRamification
        out.append(cls(exponent, seen[m]))
    return out


def _divisors(k: int) -> list[int]:
    k = abs(k)
    small = [d for d in range(1, math.isqrt(k) + 1) if k % d == 0]
    return sorted(set(small + [k // d for d in small]))


def _poly_eval(poly: Sequence[Fraction], c: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(poly):
        acc = acc * c + a
    return acc


def rational_roots(poly: Sequence[Fraction]) -> dict:
    """Nonzero rational roots of ``sum poly[i] c^i`` with multiplicities."""
    poly = [Fraction(a) for a in poly]
    while poly and poly[-1] == 0:
        poly.pop()
    while poly and poly[0] == 0:
        poly.pop(0)
    if len(poly) < 2:
        return {}
    scale_ = math.lcm(*(a.denominator for a in poly))
    ints = [int(a * scale_) for a in poly]
    roots = {}
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in roots:
                    continue
                work = ints
                mult = 0
                while len(work) > 1 and _poly_eval(work, cand) == 0:
                    mult += 1
                    work = _deflate(work, cand)
                if mult:
                    roots[cand] = mult
    return roots


def _deflate(poly, r):
    """Divide by ``(c - r)``; coefficients low to high."""
    out = [Fraction(0)] * (len(poly) - 1)
    carry = Fraction(0)
    for i in range(len(poly) - 1, 0, -1):
        carry = poly[i] + carry * r
        out[i - 1] = carry
    return out


def _slope_minimum(g: PolynomialOverSeries, m: Sequence[int]) -> tuple:
    values = []
    for i, c in enumerate(g.coefficients):
        if c.is_exact and c.is_zero():
            continue
        e = valuation(c).exponent
        values.append(tuple(x + i * y for x, y in zip(e, m)))
    return min(values, key=lex_key)


def hensel_lift(
    g: PolynomialOverSeries,
    t0: TruncatedSeries,
    precision,
    max_iterations: int | None = None,
) -> TruncatedSeries:
    """Newton iteration ``t <- t - g(t)/g'(t)`` from a simple leading term ``t0``.

    Returns an exact root as soon as one is hit; otherwise iterates until the
    correction vanishes to ``precision``.
    """
    dg = g.derivative()
    m = valuation(t0).exponent
    expected = tuple(x - y for x, y in zip(_slope_minimum(g, m), m))
    try:
        lead = valuation(evaluate_poly(dg, t0))
    except InsufficientPrecision as exc:
        raise NonSimpleRoot(f"g'(t0) has no determined leading term: {exc}") from exc
    if lead.exponent != expected:
        raise NonSimpleRoot(
            f"g'(t0) has valuation {lead.exponent}, a simple root needs {expected}"
        )
    if max_iterations is None:
        max_iterations = 2 * max(1, math.ceil(math.log2(max(precision, 2)))) + 4
    t = t0
    for _ in range(max_iterations):
        r = evaluate_poly(g, t)
        if r.is_exact and r.is_zero():
            return t
        delta = mul(r, invert(evaluate_poly(dg, t), precision))
        t_next = add(t, scale(delta, -1))
        if delta.is_zero():
            return t_next
        t = truncate(t_next, precision)
    raise ArithmeticError(f"Newton iteration did not settle within {max_iterations} steps")


@dataclass(frozen=True)
class PuiseuxRoot:
    """A root ``series(z)`` where ``x_i = z_i^ramification``."""

    ramification: int
    series: TruncatedSeries


@dataclass(frozen=True)
class Unresolved:
    exponent: tuple
    leading_poly: tuple
    count: int
    reason: str


@dataclass
class Solutions:
    roots: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)
    ramification: int = 1
    all_slopes_integral: bool = True

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


def default_ramification(g: PolynomialOverSeries) -> int:
    """Least common denominator of the slopes; always divides ``k!``."""
    dens = [1]
    for s in newton_slopes(g):
        dens.extend(Fraction(x).denominator for x in s.exponent)
    return math.lcm(*dens)


def solve_roots(g: PolynomialOverSeries, precision, ramification: int | None = None) -> Solutions:
    if g.degree < 1:
        raise ValueError("equation must have degree at least 1")
    out = Solutions()
    coeffs = list(g.coefficients)
    n = g.n
    zero_roots = 0
    while coeffs[0].is_exact and coeffs[0].is_zero():
        coeffs.pop(0)
        zero_roots += 1
    if coeffs[0].is_zero():
        raise InsufficientPrecision("constant coefficient is a truncated zero")
    g = PolynomialOverSeries(tuple(coeffs))
    R = ramification if ramification is not None else (
        default_ramification(g) if g.degree >= 1 else 1
    )
    out.ramification = R
    for _ in range(zero_roots):
        out.roots.append(PuiseuxRoot(R, TruncatedSeries.zero(n)))
    if g.degree < 1:
        return out
    gr = ramify(g, R)
    for s in newton_slopes(gr):
        nonzero = [i for i, a in enumerate(s.leading_poly) if a]
        count = nonzero[-1] - nonzero[0]
        if isinstance(s, RequiresRamification):
            out.all_slopes_integral = False
            out.unresolved.append(Unresolved(s.exponent, s.leading_poly, count, "requires ramification"))
            continue
        found = 0
        for c, mult in sorted(rational_roots(s.leading_poly).items()):
            found += mult
            if mult > 1:
                out.unresolved.append(
                    Unresolved(s.exponent, s.leading_poly, mult, f"multiple leading coefficient {c}")
                )
                continue
            t0 = TruncatedSeries.monomial(s.exponent, c)
            out.roots.append(PuiseuxRoot(R, hensel_lift(gr, t0, precision)))
        if found < count:
            out.unresolved.append(
                Unresolved(s.exponent, s.leading_poly, count - found, "leading coefficient not rational")
            )
    return out
