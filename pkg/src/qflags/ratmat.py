"""Exact linear algebra over the rationals with ``fractions.Fraction``.

Rows are handled sparsely (dicts column -> nonzero value) during elimination,
since the operator matrices fed in here carry q + 1 nonzeros per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import SingularMatrix

SparseRow = dict[int, Fraction]


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> "RationalMatrix":
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(rows, ncols)

    @classmethod
    def from_sparse(cls, rows: Iterable[Mapping[int, Fraction]], ncols: int) -> "RationalMatrix":
        dense = []
        for r in rows:
            d = [Fraction(0)] * ncols
            for c, v in r.items():
                d[c] = Fraction(v)
            dense.append(tuple(d))
        return cls(tuple(dense), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def sparse_rows(self) -> list[SparseRow]:
        return [{c: v for c, v in enumerate(r) if v} for r in self.rows]


def _to_sparse(rows) -> list[SparseRow]:
    out = []
    for r in rows:
        if isinstance(r, Mapping):
            out.append({c: Fraction(v) for c, v in r.items() if v})
        else:
            out.append({c: Fraction(v) for c, v in enumerate(r) if v})
    return out


def rref(rows, ncols: int) -> list[tuple[int, SparseRow]]:
    """Reduced row echelon form as (pivot column, row) pairs, pivots ascending.

    Among candidate pivot rows the sparsest is taken to limit fill-in.
    """
    pending = [r for r in _to_sparse(rows) if r]
    done: list[tuple[int, SparseRow]] = []
    for col in range(ncols):
        best = None
        for idx, r in enumerate(pending):
            if col in r and (best is None or len(r) < len(pending[best])):
                best = idx
        if best is None:
            continue
        prow = pending.pop(best)
        s = prow[col]
        if s != 1:
            prow = {c: v / s for c, v in prow.items()}
        keep = []
        for r in pending:
            f = r.get(col)
            if f is not None:
                for c, v in prow.items():
                    nv = r.get(c, 0) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
            if r:
                keep.append(r)
        pending = keep
        done.append((col, prow))
    # back substitution, last pivot first
    for i in range(len(done) - 1, -1, -1):
        col, prow = done[i]
        for k in range(i):
            r = done[k][1]
            f = r.get(col)
            if f is not None:
                for c, v in prow.items():
                    nv = r.get(c, 0) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
    return done


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols))


def nullspace_with_free(rows, ncols: int) -> tuple[RationalMatrix, list[int]]:
    """Nullspace basis plus the free columns it is the identity on."""
    reduced = rref(rows, ncols)
    pivots = {col for col, _ in reduced}
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec: SparseRow = {f: Fraction(1)}
        for col, r in reduced:
            v = r.get(f)
            if v is not None:
                vec[col] = -v
        basis.append(vec)
    return RationalMatrix.from_sparse(basis, ncols), free


def nullspace(rows, ncols: int) -> RationalMatrix:
    """Basis of {x : A x = 0}; basis vector i is 1 on the i-th free column."""
    return nullspace_with_free(rows, ncols)[0]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve the square nonsingular system a x = b exactly."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("system matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        s = prow[col]
        prow[:] = [x / s for x in prow]
        for r in range(n):
            if r != col:
                f = aug[r][col]
                if f:
                    aug[r] = [x - f * y for x, y in zip(aug[r], prow)]
    return [row[n] for row in aug]


def mat_vec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> list[Fraction]:
    return [sum((u * v for u, v in zip(row, x) if u and v), Fraction(0)) for row in a]


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        s = m[col][col]
        det *= s
        for r in range(col + 1, n):
            f = m[r][col] / s
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det
