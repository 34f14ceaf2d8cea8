"""Simple cones adapted to a flag, and their non-normal intersections with L.

A simple cone is stored by its generator matrix: column ``i`` is the
generator ``g_i``, which lies in ``Z^i`` with last entry 1.  The matrix is
therefore unit upper-triangular, so every lattice point has unique integer
coordinates in the cone basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NotContained, NotPositive, RankMismatch
from .lattice import (
    FlagOfLattices,
    is_positive,
    lex_key,
    lex_min,
    semigroup_contains,
    vadd,
    vscale,
    vsub,
)


@dataclass(frozen=True)
class SimpleCone:
    generators: tuple  # tuple of n column tuples

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        n = len(gens)
        for j, g in enumerate(gens):
            if len(g) != n:
                raise ValueError("generator matrix must be square")
            if g[j] != 1 or any(g[i] for i in range(j + 1, n)):
                raise ValueError(
                    f"generator {j + 1} = {g} breaks the unit upper-triangular shape"
                )

    @classmethod
    def standard(cls, n: int) -> "SimpleCone":
        return _standard(n)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SimpleCone":
        n = len(rows)
        return cls(tuple(tuple(rows[i][j] for i in range(n)) for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.generators)

    def rows(self) -> tuple:
        n = self.n
        return tuple(tuple(self.generators[j][i] for j in range(n)) for i in range(n))

    def point(self, coords: Sequence[int]) -> tuple:
        """The lattice point ``G @ coords``."""
        n = self.n
        out = [0] * n
        for c, g in zip(coords, self.generators):
            if c:
                for i in range(n):
                    out[i] += c * g[i]
        return tuple(out)

    def __repr__(self):
        return f"SimpleCone({list(self.generators)})"


@lru_cache(maxsize=None)
def _standard(n: int) -> SimpleCone:
    return SimpleCone(tuple(tuple(int(i == j) for i in range(n)) for j in range(n)))


def cone_coordinates(cone: SimpleCone, a: Sequence[int]) -> tuple:
    """The unique integer ``c`` with ``G @ c == a`` (back-substitution)."""
    n = cone.n
    if len(a) != n:
        raise RankMismatch(f"vector of rank {len(a)} against cone of rank {n}")
    gens = cone.generators
    c = [0] * n
    for i in range(n - 1, -1, -1):
        s = a[i]
        for j in range(i + 1, n):
            if c[j]:
                s -= gens[j][i] * c[j]
        c[i] = s
    return tuple(c)


def cone_contains(cone: SimpleCone, a: Sequence[int]) -> bool:
    return all(c >= 0 for c in cone_coordinates(cone, a))


def extend_cone(cone: SimpleCone, a: Sequence[int]) -> SimpleCone:
    """Smallest modification of ``cone`` that also contains the positive ``a``.

    Replaces the generator ``g_j`` at the level ``j`` of ``a`` by
    ``g_j + sum_{i<j} min(k_i, 0) g_i`` where ``k`` are the coordinates of
    ``a``.  The old cone stays inside the new one.
    """
    if not is_positive(a):
        raise NotPositive(f"{tuple(a)} is not lex-positive")
    k = cone_coordinates(cone, a)
    if all(c >= 0 for c in k):
        return cone
    j = max(i for i, c in enumerate(k) if c)
    new_gen = cone.generators[j]
    for i in range(j):
        if k[i] < 0:
            new_gen = vadd(new_gen, vscale(k[i], cone.generators[i]))
    gens = list(cone.generators)
    gens[j] = new_gen
    return SimpleCone(tuple(gens))


def common_cone(vectors: Iterable[Sequence[int]], seed: SimpleCone) -> SimpleCone:
    """Fold :func:`extend_cone` over ``vectors`` in order, starting at ``seed``."""
    cone = seed
    for a in vectors:
        cone = extend_cone(cone, a)
    return cone


def minimal_element(
    S: Iterable[Sequence[int]], ambient: SimpleCone | None = None
) -> tuple[tuple, SimpleCone]:
    """Lex-minimum of ``S`` and a simple cone ``C`` with ``S - s_min`` inside ``C``.

    With ``m`` the coordinates of ``s_min`` in the ambient cone (standard by
    default), the cone has generators ``y_k = x_k - sum_{i<k} m_i x_i``.  When
    ``S`` is not contained in the ambient cone this need not cover every
    difference, and the cone is then enlarged by :func:`common_cone`.
    """
    S = [tuple(s) for s in S]
    if not S:
        raise ValueError("minimal_element of an empty set")
    n = len(S[0])
    if ambient is None:
        ambient = SimpleCone.standard(n)
    s_min = lex_min(S)
    m = cone_coordinates(ambient, s_min)
    gens = []
    for k, x_k in enumerate(ambient.generators):
        y = x_k
        for i in range(k):
            if m[i]:
                y = vsub(y, vscale(m[i], ambient.generators[i]))
        gens.append(y)
    cone = SimpleCone(tuple(gens))
    missing = []
    for s in S:
        d = vsub(s, s_min)
        if not cone_contains(cone, d):
            missing.append(d)
    return s_min, common_cone(missing, cone)


def nonnormal_generators(cone: SimpleCone, flag: FlagOfLattices) -> list[tuple]:
    """A finite generating set of the semigroup ``cone ∩ L``.

    For each generator the least ``k_i >= 1`` with ``k_i g_i`` in L is found by
    linear search; the result is every nonzero point of the box
    ``{sum d_i g_i : 0 <= d_i <= k_i}`` that lies in L, sorted by the lattice
    order.  Not minimal in general.  A saturated cone (every ``k_i = 1``)
    returns its own generators.
    """
    if cone.n != flag.n:
        raise RankMismatch("cone and flag ranks differ")
    bounds = []
    for g in cone.generators:
        k = 1
        while not semigroup_contains(flag, vscale(k, g)):
            k += 1
        bounds.append(k)
    if all(k == 1 for k in bounds):
        return sorted(cone.generators, key=lex_key)
    points = set()
    for d in itertools.product(*(range(k + 1) for k in bounds)):
        if any(d):
            p = cone.point(d)
            if semigroup_contains(flag, p):
                points.add(p)
    return sorted(points, key=lex_key)


def decompose(target: Sequence[int], generators: Sequence[Sequence[int]]) -> tuple | None:
    """Nonnegative integer multipliers expressing ``target`` over ``generators``.

    All vectors are in the coordinates of a common cone (entrywise
    nonnegative), so the search is finite.  Returns None if impossible.
    """
    gens = [tuple(g) for g in generators if any(g)]
    target = tuple(target)

    @lru_cache(maxsize=None)
    def search(rest, start):
        if not any(rest):
            return ()
        for idx in range(start, len(gens)):
            g = gens[idx]
            nxt = tuple(r - x for r, x in zip(rest, g))
            if all(x >= 0 for x in nxt):
                tail = search(nxt, idx)
                if tail is not None:
                    return (idx,) + tail
        return None

    if any(x < 0 for x in target):
        return None
    picks = search(target, 0)
    if picks is None:
        return None
    mult = [0] * len(gens)
    for idx in picks:
        mult[idx] += 1
    return tuple(mult)


def minimize_generators(cone: SimpleCone, generating_set: Sequence[Sequence[int]]) -> list[tuple]:
    """Greedily drop generators that decompose over the remaining ones."""
    coords = {tuple(g): cone_coordinates(cone, g) for g in generating_set}
    kept = sorted(coords, key=lex_key)
    for g in sorted(coords, key=lex_key, reverse=True):
        rest = [coords[h] for h in kept if h != g]
        if decompose(coords[g], rest) is not None:
            kept.remove(g)
    return kept


@dataclass(frozen=True)
class NonNormalCone:
    """``cone ∩ L`` together with a finite generating set."""

    cone: SimpleCone
    flag: FlagOfLattices
    generating_set: tuple

    @classmethod
    def build(cls, cone: SimpleCone, flag: FlagOfLattices, minimize: bool = False):
        gens = nonnormal_generators(cone, flag)
        if minimize:
            gens = minimize_generators(cone, gens)
        return cls(cone, flag, tuple(gens))

    def contains(self, a: Sequence[int]) -> bool:
        return cone_contains(self.cone, a) and semigroup_contains(self.flag, a)


def transition_matrix(inner: SimpleCone, outer: SimpleCone) -> tuple:
    """Row-major matrix whose column i is the ``outer``-coordinates of ``inner``'s g_i."""
    if inner.n != outer.n:
        raise RankMismatch("cone ranks differ")
    columns = []
    for g in inner.generators:
        c = cone_coordinates(outer, g)
        if any(x < 0 for x in c):
            raise NotContained(f"generator {g} of the inner cone is not in the outer cone")
        columns.append(c)
    n = inner.n
    return tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
