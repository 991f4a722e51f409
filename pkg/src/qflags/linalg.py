"""Exact linear algebra over F_q on element codes.

Rows are tuples of element codes (see :mod:`qflags.gfq`).  A
:class:`Subspace` always stores its basis in reduced row echelon form, which
makes equality and hashing of subspaces a plain tuple comparison.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import AmbientMismatch, SingularMatrix, SpecMismatch
from .gfq import FieldElement, FieldSpec

Row = tuple[int, ...]


# --- raw row reduction --------------------------------------------------------

def rref_rows(spec: FieldSpec, rows: Iterable[Sequence[int]], width: int) -> tuple[Row, ...]:
    """Reduced row echelon form of the row space, zero rows dropped."""
    mul, sub, inv = spec.mul_table, spec.sub_table, spec.inv_table
    work = [list(r) for r in rows]
    for r in work:
        if len(r) != width:
            raise AmbientMismatch(f"row of length {len(r)} in width {width}")
    out: list[list[int]] = []
    for col in range(width):
        piv = None
        for idx, r in enumerate(work):
            if r[col]:
                piv = idx
                break
        if piv is None:
            continue
        prow = work.pop(piv)
        s = prow[col]
        if s != 1:
            m = mul[inv[s]]
            prow = [m[x] for x in prow]
        for r in work:
            f = r[col]
            if f:
                mf = mul[f]
                r[:] = [sub[x][mf[y]] for x, y in zip(r, prow)]
        for r in out:
            f = r[col]
            if f:
                mf = mul[f]
                r[:] = [sub[x][mf[y]] for x, y in zip(r, prow)]
        out.append(prow)
    return tuple(tuple(r) for r in out)


def rank_rows(spec: FieldSpec, rows: Iterable[Sequence[int]], width: int) -> int:
    """Rank by forward elimination only."""
    mul, sub, inv = spec.mul_table, spec.sub_table, spec.inv_table
    work = [list(r) for r in rows]
    rank = 0
    for col in range(width):
        piv = None
        for idx in range(rank, len(work)):
            if work[idx][col]:
                piv = idx
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        m = mul[inv[prow[col]]]
        for idx in range(rank + 1, len(work)):
            r = work[idx]
            f = r[col]
            if f:
                mf = mul[m[f]]
                work[idx] = [sub[x][mf[y]] for x, y in zip(r, prow)]
        rank += 1
    return rank


def vec_mat(spec: FieldSpec, x: Sequence[int], g: Sequence[Sequence[int]]) -> Row:
    """Row vector times matrix, ``x g``."""
    mul, add = spec.mul_table, spec.add_table
    out = [0] * len(g[0])
    for xi, grow in zip(x, g):
        if xi:
            m = mul[xi]
            out = [add[o][m[y]] for o, y in zip(out, grow)]
    return tuple(out)


def mat_mul(spec: FieldSpec, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> tuple[Row, ...]:
    return tuple(vec_mat(spec, row, b) for row in a)


def mat_inverse(spec: FieldSpec, g: Sequence[Sequence[int]]) -> tuple[Row, ...]:
    n = len(g)
    aug = [tuple(row) + tuple(int(i == j) for j in range(n)) for i, row in enumerate(g)]
    red = rref_rows(spec, aug, 2 * n)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise SingularMatrix("matrix is not invertible")
    return tuple(r[n:] for r in red)


# --- value types ------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixGF:
    """A dense matrix over F_q, entries stored as element codes."""

    spec: FieldSpec
    entries: tuple[Row, ...]

    def __post_init__(self):
        q = self.spec.q
        width = len(self.entries[0]) if self.entries else 0
        for r in self.entries:
            if len(r) != width:
                raise ValueError("ragged matrix")
            if any(not 0 <= c < q for c in r):
                raise ValueError(f"entry out of range for {self.spec!r}")

    @classmethod
    def from_values(cls, spec: FieldSpec, rows) -> "MatrixGF":
        return cls(spec, tuple(tuple(spec.encode(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "MatrixGF":
        return cls(spec, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.spec, self.entries[i][j])

    @cached_property
    def rank(self) -> int:
        return rank_rows(self.spec, self.entries, self.cols)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank == self.rows

    def inverse(self) -> "MatrixGF":
        return MatrixGF(self.spec, mat_inverse(self.spec, self.entries))

    def __matmul__(self, other: "MatrixGF") -> "MatrixGF":
        if other.spec != self.spec:
            raise SpecMismatch("matrices over different fields")
        if self.cols != other.rows:
            raise AmbientMismatch("inner dimensions differ")
        return MatrixGF(self.spec, mat_mul(self.spec, self.entries, other.entries))

    def is_lower_triangular(self) -> bool:
        return all(self.entries[i][j] == 0 for i in range(self.rows) for j in range(i + 1, self.cols))


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^n given by its RREF basis."""

    spec: FieldSpec
    n: int
    basis: tuple[Row, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, spec: FieldSpec, n: int, rows: Iterable[Sequence[int]]) -> "Subspace":
        return cls(spec, n, rref_rows(spec, rows, n))

    @classmethod
    def coordinate(cls, spec: FieldSpec, n: int, coords: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors e_c, c 1-based."""
        rows = [tuple(int(j == c - 1) for j in range(n)) for c in coords]
        return cls.span(spec, n, rows)

    def contains(self, v: Sequence[int]) -> bool:
        return rank_rows(self.spec, list(self.basis) + [tuple(v)], self.n) == self.dim

    def is_subspace_of(self, other: "Subspace") -> bool:
        return intersect_dim(self, other) == self.dim

    def vectors(self) -> list[Row]:
        """Every vector of the subspace (q**dim of them)."""
        from itertools import product

        spec = self.spec
        out = []
        for coeffs in product(range(spec.q), repeat=self.dim):
            v = tuple([0] * self.n)
            for c, b in zip(coeffs, self.basis):
                if c:
                    v = tuple(spec.add_table[x][spec.mul_table[c][y]] for x, y in zip(v, b))
            out.append(v)
        return out


def rref_canonicalize(m: Union[MatrixGF, Sequence[Sequence[int]]], spec: FieldSpec | None = None,
                      n: int | None = None) -> Subspace:
    """Row space of ``m`` as a canonical :class:`Subspace`."""
    if isinstance(m, MatrixGF):
        if spec is not None and spec != m.spec:
            raise SpecMismatch("matrix field differs from requested field")
        spec, rows = m.spec, m.entries
        width = m.cols if n is None else n
    else:
        if spec is None or n is None:
            raise ValueError("raw rows need an explicit field and width")
        rows, width = m, n
    return Subspace(spec, width, rref_rows(spec, rows, width))


def _check_pair(a: Subspace, b: Subspace) -> None:
    if a.spec != b.spec:
        raise SpecMismatch(f"{a.spec!r} vs {b.spec!r}")
    if a.n != b.n:
        raise AmbientMismatch(f"ambient dimensions {a.n} and {b.n}")


def intersect_dim(a: Subspace, b: Subspace) -> int:
    """dim(a ∩ b) = dim a + dim b - rank of the stacked bases."""
    _check_pair(a, b)
    return a.dim + b.dim - rank_rows(a.spec, a.basis + b.basis, a.n)


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """The subspace a ∩ b itself, via the Zassenhaus stacking trick."""
    _check_pair(a, b)
    n = a.n
    zero = (0,) * n
    rows = [r + r for r in a.basis] + [r + zero for r in b.basis]
    red = rref_rows(a.spec, rows, 2 * n)
    meet = [r[n:] for r in red if not any(r[:n])]
    return Subspace.span(a.spec, n, meet)


def row_action(x, g: MatrixGF, check: bool = True):
    """Right action ``x -> x g`` on a row vector or on a Subspace."""
    if check and not g.is_invertible():
        raise SingularMatrix("row action needs an invertible matrix")
    if isinstance(x, Subspace):
        if x.spec != g.spec:
            raise SpecMismatch(f"{x.spec!r} vs {g.spec!r}")
        if x.n != g.rows:
            raise AmbientMismatch(f"subspace in dimension {x.n}, matrix of order {g.rows}")
        return Subspace.span(x.spec, x.n, (vec_mat(x.spec, r, g.entries) for r in x.basis))
    x = tuple(x)
    if len(x) != g.rows:
        raise AmbientMismatch(f"vector of length {len(x)}, matrix of order {g.rows}")
    return vec_mat(g.spec, x, g.entries)


# --- random group elements ---------------------------------------------------------

def random_invertible(spec: FieldSpec, n: int, rng: random.Random) -> MatrixGF:
    while True:
        rows = tuple(tuple(rng.randrange(spec.q) for _ in range(n)) for _ in range(n))
        if rank_rows(spec, rows, n) == n:
            return MatrixGF(spec, rows)


def random_lower_triangular(spec: FieldSpec, n: int, rng: random.Random) -> MatrixGF:
    """A uniformly random element of the Borel subgroup B(n)."""
    rows = []
    for i in range(n):
        row = [0] * n
        for j in range(i):
            row[j] = rng.randrange(spec.q)
        row[i] = rng.randrange(1, spec.q)
        rows.append(tuple(row))
    return MatrixGF(spec, tuple(rows))


def permutation_matrix(spec: FieldSpec, word: Sequence[int]) -> MatrixGF:
    """Matrix whose j-th row is e_{word[j]} (1-based word)."""
    n = len(word)
    return MatrixGF(spec, tuple(tuple(int(c == w - 1) for c in range(n)) for w in word))
