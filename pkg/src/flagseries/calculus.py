"""Logarithmic n-forms, formal residues and monomial changes of variables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cone import SimpleCone, common_cone, cone_contains, cone_coordinates
from .errors import InsufficientPrecision, RankMismatch
from .lattice import FlagOfLattices, vsub
from .series import (
    EXACT,
    TruncatedSeries,
    add,
    canonical,
    in_O_L,
    invert,
    mul,
    sum_series,
    valuation,
)


@dataclass(frozen=True)
class LogDifferentialForm:
    """``density * dx_1/x_1 ^ ... ^ dx_n/x_n`` (ascending variable order)."""

    density: TruncatedSeries

    @property
    def n(self):
        return self.density.n

    def __add__(self, other):
        return LogDifferentialForm(add(self.density, other.density))

    def scaled(self, c):
        return LogDifferentialForm(self.density * Fraction(c))

    @classmethod
    def permuted(cls, density: TruncatedSeries, order: Sequence[int]):
        """Form given against ``dx_{order[0]}/x ^ ...``, normalized to ascending order."""
        sign = _permutation_sign([i - 1 for i in order])
        return cls(density * sign)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class ChangeOfVariables:
    """``y_i = images[i]`` as series in ``x``.

    The valuations of the images, as columns, must form a unit upper
    triangular matrix.  ``precision`` is the working precision used when an
    exact image has to be inverted.
    """

    images: tuple
    precision: float | int | None = None

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        n = images[0].n
        if len(images) != n or any(f.n != n for f in images):
            raise RankMismatch("a change of variables needs n images in n variables")
        SimpleCone(self.valuation_matrix_columns())

    @property
    def n(self):
        return len(self.images)

    def valuation_matrix_columns(self) -> tuple:
        return tuple(valuation(f).exponent for f in self.images)

    def validate(self, flag: FlagOfLattices) -> bool:
        """Finite check that the images and their inverses have stored terms in O(L)."""
        return all(in_O_L(f, flag) and in_O_L(self._inverse(i), flag) for i, f in enumerate(self.images))

    def _inverse(self, i: int) -> TruncatedSeries:
        return invert(self.images[i], self.precision)

    def power(self, i: int, k: int, cache: dict) -> TruncatedSeries:
        key = (i, k)
        if key not in cache:
            if k == 0:
                cache[key] = TruncatedSeries.constant(self.n, 1)
            elif k == 1:
                cache[key] = self.images[i]
            elif k == -1:
                cache[key] = self._inverse(i)
            else:
                step = 1 if k > 0 else -1
                cache[key] = mul(self.power(i, k - step, cache), self.power(i, step, cache))
        return cache[key]


def log_derivative(f: TruncatedSeries, i: int) -> TruncatedSeries:
    """``x_i * d f / d x_i``: multiplies each term by its i-th exponent."""
    terms = {a: c * f.exponent(a)[i - 1] for a, c in f.coeffs.items()}
    return canonical(f.offset, f.cone, terms, f.precision)


def partial_derivative(f: TruncatedSeries, i: int) -> TruncatedSeries:
    if not 1 <= i <= f.n:
        raise ValueError(f"variable index {i} outside 1..{f.n}")
    g = log_derivative(f, i)
    offset = list(g.offset)
    offset[i - 1] -= 1
    return canonical(tuple(offset), g.cone, g.coeffs, g.precision)


def substitute(g: TruncatedSeries, cv: ChangeOfVariables) -> TruncatedSeries:
    """``g(y)`` with ``y_i`` replaced by the i-th image of ``cv``."""
    if g.n != cv.n:
        raise RankMismatch("series and change of variables have different ranks")
    cache: dict = {}
    parts = []
    for e, c in g.terms().items():
        term = TruncatedSeries.constant(g.n, c)
        for i, k in enumerate(e):
            if k:
                term = mul(term, cv.power(i, k, cache))
        parts.append(term)
    if not g.is_exact:
        parts.append(_remainder_placeholder(g, cv))
    return sum_series(parts, g.n)


def _remainder_placeholder(g: TruncatedSeries, cv: ChangeOfVariables) -> TruncatedSeries:
    """Truncated zero covering the images of the unknown terms of ``g``.

    An unknown term ``y^(q + H a)`` with ``deg a >= N`` maps into
    ``x^(V q) * x^(V H a) * (product of unit series)``.
    """
    n = g.n
    V = SimpleCone(cv.valuation_matrix_columns())
    vecs = [V.point(h) for h in g.cone.generators]
    for f in cv.images:
        if f.is_exact:
            vecs.extend(f.cone.point(a) for a in f.coeffs if any(a))
        else:
            vecs.extend(f.cone.generators)
    cone = common_cone(vecs, SimpleCone.standard(n))
    return TruncatedSeries(cone, V.point(g.offset), {}, g.precision)


def log_jacobian(cv: ChangeOfVariables) -> list:
    """``M[i][j] = x_j * d f_i / d x_j / f_i`` as series."""
    n = cv.n
    cache: dict = {}
    rows = []
    for i in range(n):
        inv = cv.power(i, -1, cache)
        rows.append([mul(log_derivative(cv.images[i], j + 1), inv) for j in range(n)])
    return rows


def determinant(matrix: Sequence[Sequence[TruncatedSeries]]) -> TruncatedSeries:
    """Leibniz expansion over the series ring."""
    n = len(matrix)
    rank = matrix[0][0].n
    terms = []
    for perm in itertools.permutations(range(n)):
        prod = TruncatedSeries.constant(rank, _permutation_sign(perm))
        for i, j in enumerate(perm):
            prod = mul(prod, matrix[i][j])
            if prod.is_exact and prod.is_zero():
                break
        terms.append(prod)
    return sum_series(terms, rank)


def pullback(omega: LogDifferentialForm, cv: ChangeOfVariables) -> LogDifferentialForm:
    density = substitute(omega.density, cv)
    return LogDifferentialForm(mul(density, determinant(log_jacobian(cv))))


def _identity_coordinates(f: TruncatedSeries):
    """Chart coordinates of the exponent 0, or None if it lies outside the chart."""
    a = cone_coordinates(f.cone, tuple(-x for x in f.offset))
    if any(x < 0 for x in a):
        return None
    if sum(a) >= f.precision:
        raise InsufficientPrecision(
            f"identity monomial has degree {sum(a)} in the chart, precision is {f.precision}"
        )
    return a


def residue(omega: LogDifferentialForm) -> Fraction:
    """Coefficient of the identity monomial in the density."""
    f = omega.density
    a = _identity_coordinates(f)
    if a is None:
        return Fraction(0)
    return f.coeffs.get(a, Fraction(0))


def residue_iterated(omega: LogDifferentialForm, order: Sequence[int]) -> Fraction:
    """Residue by extracting the ``x_k^0`` coefficient one variable at a time."""
    f = omega.density
    n = f.n
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"{order} is not a permutation of 1..{n}")
    _identity_coordinates(f)
    layer = [(e, c) for e, c in f.terms().items()]
    for k in order:
        layer = [(e, c) for e, c in layer if e[k - 1] == 0]
    return sum((c for _, c in layer), Fraction(0))
