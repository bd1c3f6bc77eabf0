"""Exact linear algebra over Q.

Matrices are small (a few hundred columns at most) and sparse, so rows are
plain lists of Fractions and elimination skips zero entries.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import StructuralError
from .rational import as_rational, clear_denominators


class RationalMatrix:
    """Immutable rows x cols matrix of Fractions."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(as_rational(v) for v in row) for row in rows)
        if ncols is None:
            if not rows:
                raise StructuralError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise StructuralError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def zero(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def stack(self, other: RationalMatrix) -> RationalMatrix:
        if other.ncols != self.ncols:
            raise StructuralError("column counts differ")
        return RationalMatrix(self.rows + other.rows, self.ncols)

    def rank(self) -> int:
        return rational_rank(self)

    def nullspace(self):
        return rational_nullspace(self)

    def rref(self):
        return rref(self.rows, self.ncols)


def rref(rows, ncols):
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        pivot = next((i for i in range(r, len(work)) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        prow = work[r]
        inv = 1 / Fraction(prow[c])
        nz = [j for j in range(c, ncols) if prow[j]]
        for j in nz:
            prow[j] = prow[j] * inv
        for i in range(len(work)):
            if i != r:
                f = work[i][c]
                if f:
                    row = work[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in work[:r]], pivots


def _integer_rows(rows):
    return [clear_denominators(r) for r in rows if any(r)]


def rational_rank(m) -> int:
    """Rank by fraction-free (Bareiss) elimination on integer-scaled rows."""
    rows = m.rows if isinstance(m, RationalMatrix) else m
    work = _integer_rows(rows)
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == len(work):
            break
        pivot = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        p = work[rank][c]
        for i in range(rank + 1, len(work)):
            a = work[i][c]
            row = work[i]
            prow = work[rank]
            work[i] = [(p * row[j] - a * prow[j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
    return rank


def rational_nullspace(m, ncols=None):
    """Basis of {v : M v = 0}, one vector per free column, cleared to coprime integers.

    Each basis vector has a 1 (before clearing) at its free column and zeros at
    the other free columns, so the basis is canonical for the given matrix.
    """
    if isinstance(m, RationalMatrix):
        rows, ncols = m.rows, m.ncols
    else:
        rows = m
        if ncols is None:
            ncols = len(rows[0])
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[free]
        basis.append(tuple(Fraction(i) for i in clear_denominators(v)))
    return basis


def row_spaces_equal(a, b, ncols) -> bool:
    a = [tuple(r) for r in a]
    b = [tuple(r) for r in b]
    ra = rational_rank(a) if a else 0
    rb = rational_rank(b) if b else 0
    if ra != rb:
        return False
    if not a and not b:
        return True
    return rational_rank(a + b) == ra


def determinant(rows) -> Fraction:
    """Determinant of a square rational matrix by Gaussian elimination."""
    work = [[Fraction(v) for v in r] for r in rows]
    n = len(work)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if work[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            det = -det
        p = work[c][c]
        det *= p
        for i in range(c + 1, n):
            f = work[i][c] / p
            if f:
                for j in range(c, n):
                    work[i][j] -= f * work[c][j]
    return det
