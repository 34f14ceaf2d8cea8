"""The ordered lattice Z^n and the non-normal semigroup cut out by a flag.

Exponent vectors are plain tuples of ints.  The order is lexicographic in a
flag-adapted basis and compares the *last* entry first: ``x_n`` dominates
``x_{n-1}``, which dominates ``x_{n-2}``, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import RankMismatch

ExponentVector = tuple


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def lex_key(a: Sequence[int]) -> tuple:
    """Sort key realizing the lattice order (last entry most significant)."""
    return tuple(reversed(a))


def lex_compare(a: Sequence[int], b: Sequence[int]) -> Ordering:
    if len(a) != len(b):
        raise RankMismatch(f"cannot compare vectors of rank {len(a)} and {len(b)}")
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return Ordering.LT if x < y else Ordering.GT
    return Ordering.EQ


def level(a: Sequence[int]) -> int:
    """Index (1-based) of the last nonzero entry; 0 for the zero vector."""
    for i in range(len(a), 0, -1):
        if a[i - 1]:
            return i
    return 0


def is_positive(a: Sequence[int]) -> bool:
    k = level(a)
    return k > 0 and a[k - 1] > 0


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(k, a):
    return tuple(k * x for x in a)


def lex_min(vectors):
    return min(vectors, key=lex_key)


def solve_exact(rows: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Solve the square system ``rows @ c == v`` by exact elimination.

    Returns None when the matrix is singular.
    """
    k = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(v[i])] for i, row in enumerate(rows)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        for r in range(k):
            if r != col and m[r][col] != 0:
                factor = m[r][col] / p
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[i][k] / m[i][i] for i in range(k)]


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    k = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(k):
        pivot = next((r for r in range(col, k) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, k):
            factor = m[r][col] / m[col][col]
            if factor:
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return int(det)


def _identity(k: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


@dataclass(frozen=True)
class FlagOfLattices:
    """Sublattices ``L^k`` of the isolated subgroups ``Z^k``, k = 1..n-1.

    ``sublattice_bases[k]`` is a k x k integer matrix given row-major whose
    *columns* span ``L^k``.  Missing levels default to the identity, and
    ``L^n`` is always all of ``Z^n``.
    """

    n: int
    sublattice_bases: Mapping[int, tuple] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank must be positive")
        bases = {}
        for k, rows in dict(self.sublattice_bases).items():
            k = int(k)
            if not 1 <= k <= self.n - 1:
                raise ValueError(f"sublattice level {k} outside 1..{self.n - 1}")
            rows = tuple(tuple(int(x) for x in row) for row in rows)
            if len(rows) != k or any(len(row) != k for row in rows):
                raise ValueError(f"basis of L^{k} must be {k}x{k}")
            if integer_determinant(rows) == 0:
                raise ValueError(f"basis of L^{k} is singular")
            bases[k] = rows
        object.__setattr__(self, "sublattice_bases", bases)
        for k in range(2, self.n):
            below = self.basis(k - 1)
            for j in range(k - 1):
                column = tuple(below[i][j] for i in range(k - 1)) + (0,)
                if not self.lattice_contains(k, column):
                    raise ValueError(f"L^{k - 1} is not contained in L^{k}")

    @classmethod
    def normal(cls, n: int) -> "FlagOfLattices":
        return cls(n)

    def basis(self, k: int) -> tuple:
        if k >= self.n:
            return _identity(k)
        return self.sublattice_bases.get(k, _identity(k))

    def index(self, k: int) -> int:
        """Index of ``L^k`` in ``Z^k``."""
        return abs(integer_determinant(self.basis(k)))

    def lattice_contains(self, k: int, v: Sequence[int]) -> bool:
        """Whether the length-k vector ``v`` lies in ``L^k``."""
        if k == 0:
            return True
        if k >= self.n or k not in self.sublattice_bases:
            return True
        sol = solve_exact(self.basis(k), v)
        return sol is not None and all(c.denominator == 1 for c in sol)


def semigroup_contains(flag: FlagOfLattices, a: Sequence[int]) -> bool:
    """Membership in the semigroup L = H^0_+ u ... u H^n_+."""
    if len(a) != flag.n:
        raise RankMismatch(f"vector of rank {len(a)} against flag of rank {flag.n}")
    k = level(a)
    if k == 0:
        return True
    if a[k - 1] < 0:
        return False
    return flag.lattice_contains(k, a[:k])
