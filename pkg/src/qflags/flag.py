"""Complete and incomplete flags in F_q^n and the Schubert cell decomposition.

A :class:`Flag` keeps the intermediate subspaces V_1 .. V_{n-1} in canonical
RREF form (V_0 = 0 and V_n = F_q^n are implicit), so flags compare and hash
by value.  Every flag also carries an *adapted basis*: an invertible n x n
matrix whose first j rows span V_j.  Right-multiplying the standard flag by
that matrix gives the flag back, which is how relative positions of two flags
are reduced to echelon computations in :func:`relative_pivots`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from .errors import BudgetExceeded, IndexOutOfRange, InvalidFlag, SpecMismatch
from .gfq import FieldSpec
from .linalg import Row, Subspace, intersect_dim, mat_inverse, mat_mul, rank_rows, rref_rows
from .perm import Permutation, enumerate_sn, poincare_sum

DEFAULT_BUDGET = 10 ** 6


def default_budget() -> int:
    """Flag-count budget; the STEINBERG_BUDGET environment variable overrides it."""
    raw = os.environ.get("STEINBERG_BUDGET")
    if raw:
        value = int(raw)
        if value < 1:
            raise ValueError("STEINBERG_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


def _unit(n: int, c: int) -> Row:
    return tuple(int(i == c) for i in range(n))


def _prefix_spans(spec: FieldSpec, rows: Sequence[Row], n: int) -> tuple[Subspace, ...]:
    out = []
    basis: tuple[Row, ...] = ()
    for row in rows[: n - 1]:
        basis = rref_rows(spec, basis + (row,), n)
        out.append(Subspace(spec, n, basis))
    return tuple(out)


@dataclass(frozen=True)
class Flag:
    """A complete flag 0 = V_0 < V_1 < ... < V_n = F_q^n."""

    spec: FieldSpec
    n: int
    subspaces: tuple[Subspace, ...]

    @classmethod
    def from_subspaces(cls, spec: FieldSpec, n: int, subspaces: Sequence[Subspace]) -> "Flag":
        subspaces = tuple(subspaces)
        if len(subspaces) != n - 1:
            raise InvalidFlag(f"a complete flag in dimension {n} has {n - 1} intermediate subspaces")
        for j, v in enumerate(subspaces, 1):
            if v.spec != spec:
                raise SpecMismatch(f"V_{j} lives over {v.spec!r}, expected {spec!r}")
            if v.n != n or v.dim != j:
                raise InvalidFlag(f"V_{j} has dimension {v.dim} in F^{v.n}")
            if j > 1 and intersect_dim(subspaces[j - 2], v) != j - 1:
                raise InvalidFlag(f"V_{j - 1} is not contained in V_{j}")
        return cls(spec, n, subspaces)

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[int]]) -> "Flag":
        """Flag whose V_j is spanned by the first j of n independent rows."""
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if rank_rows(spec, rows, n) != n:
            raise InvalidFlag("rows of an adapted basis must be independent")
        flag = cls(spec, n, _prefix_spans(spec, rows, n))
        flag.__dict__["adapted_basis"] = rows
        return flag

    def subspace(self, j: int) -> Subspace:
        """V_j for 0 <= j <= n, including the implicit ends."""
        if j <= 0:
            return Subspace(self.spec, self.n, ())
        if j >= self.n:
            return Subspace(self.spec, self.n, tuple(_unit(self.n, c) for c in range(self.n)))
        return self.subspaces[j - 1]

    @cached_property
    def adapted_basis(self) -> tuple[Row, ...]:
        spec, n = self.spec, self.n
        rows: list[Row] = []
        for j in range(1, n + 1):
            candidates = self.subspace(j).basis
            for cand in candidates:
                if rank_rows(spec, rows + [cand], n) == j:
                    rows.append(cand)
                    break
        return tuple(rows)

    @cached_property
    def adapted_inverse(self) -> tuple[Row, ...]:
        return mat_inverse(self.spec, self.adapted_basis)

    def key(self) -> tuple:
        """Concatenated canonical bases; stable sort key."""
        return tuple(s.basis for s in self.subspaces)


@dataclass(frozen=True)
class IncompleteFlag:
    """A flag with the dimension-``omitted`` subspace left out."""

    spec: FieldSpec
    n: int
    omitted: int
    subspaces: tuple[Subspace, ...]

    def subspace(self, i: int) -> Subspace:
        if i == self.omitted:
            raise IndexOutOfRange(f"V_{i} is the omitted subspace")
        if i <= 0:
            return Subspace(self.spec, self.n, ())
        if i >= self.n:
            return Subspace(self.spec, self.n, tuple(_unit(self.n, c) for c in range(self.n)))
        return self.subspaces[i - 1 if i < self.omitted else i - 2]


@dataclass(frozen=True)
class RankMatrix:
    """table[i][j] = dim(E_i ∩ V_j) for 0 <= i, j <= n."""

    n: int
    table: tuple[tuple[int, ...], ...]

    def permutation(self) -> Permutation:
        r = self.table
        word = []
        for j in range(1, self.n + 1):
            hits = [i for i in range(1, self.n + 1)
                    if r[i][j] - r[i - 1][j] - r[i][j - 1] + r[i - 1][j - 1] == 1]
            if len(hits) != 1:
                raise AssertionError(f"malformed rank matrix at column {j}")
            word.append(hits[0])
        return Permutation(tuple(word))


# --- constructors -----------------------------------------------------------------

def standard_flag(n: int, spec: FieldSpec) -> Flag:
    if n < 1:
        raise ValueError("n must be at least 1")
    return Flag.from_rows(spec, [_unit(n, c) for c in range(n)])


def flag_from_perm(sigma: Permutation, spec: FieldSpec) -> Flag:
    """E^sigma with E^sigma_j spanned by e_sigma(1), ..., e_sigma(j)."""
    return Flag.from_rows(spec, [_unit(sigma.n, v - 1) for v in sigma.word])


def star_positions(sigma: Permutation) -> list[tuple[int, int]]:
    """Free entries (row, column), 0-based, of the cell pattern of sigma.

    Row j holds e_sigma(j); column c < sigma(j) is free exactly when c is the
    unit column of a later row, so each position is one inversion pair.
    """
    w = sigma.word
    out = []
    for j in range(len(w)):
        later = set(w[j + 1:])
        for c in range(1, w[j]):
            if c in later:
                out.append((j, c - 1))
    return out


def cell_size(sigma: Permutation, q: int) -> int:
    return q ** len(star_positions(sigma))


def iter_cell_points(sigma: Permutation, spec: FieldSpec) -> Iterator[Flag]:
    n = sigma.n
    stars = star_positions(sigma)
    base = [list(_unit(n, v - 1)) for v in sigma.word]
    for params in product(range(spec.q), repeat=len(stars)):
        rows = [r[:] for r in base]
        for (j, c), t in zip(stars, params):
            rows[j][c] = t
        yield Flag.from_rows(spec, rows)


def cell_points(sigma: Permutation, spec: FieldSpec, budget: int | None = None) -> list[Flag]:
    """All q^I(sigma) flags of the Schubert cell of sigma."""
    budget = default_budget() if budget is None else budget
    size = cell_size(sigma, spec.q)
    if size > budget:
        raise BudgetExceeded(size, budget, "cell points")
    return list(iter_cell_points(sigma, spec))


def flag_count(n: int, q: int) -> int:
    return poincare_sum(n, q)


def enumerate_flags(n: int, spec: FieldSpec, budget: int | None = None) -> list[Flag]:
    """Fl(n, q) as the disjoint union of the Schubert cells, sigma in lex order."""
    budget = default_budget() if budget is None else budget
    total = poincare_sum(n, spec.q)
    if total > budget:
        raise BudgetExceeded(total, budget)
    out: list[Flag] = []
    for sigma in enumerate_sn(n):
        out.extend(iter_cell_points(sigma, spec))
    return out


def enumerate_cells(n: int, spec: FieldSpec, budget: int | None = None) -> dict[Permutation, list[Flag]]:
    budget = default_budget() if budget is None else budget
    total = poincare_sum(n, spec.q)
    if total > budget:
        raise BudgetExceeded(total, budget)
    return {sigma: list(iter_cell_points(sigma, spec)) for sigma in enumerate_sn(n)}


# --- relative position ----------------------------------------------------------------

def relative_pivots(spec: FieldSpec, rows: Sequence[Sequence[int]]) -> list[int]:
    """Echelon pivots of independent rows against the standard flag.

    Each row is reduced by earlier rows until its rightmost nonzero column is
    new; that column (0-based) is returned.  Afterwards
    dim(E_i ∩ span(rows[:j])) = #{l < j : pivot[l] < i}.
    """
    mul, sub, inv = spec.mul_table, spec.sub_table, spec.inv_table
    by_col: dict[int, list[int]] = {}
    out = []
    for row in rows:
        r = list(row)
        while True:
            c = len(r) - 1
            while c >= 0 and r[c] == 0:
                c -= 1
            if c < 0:
                raise InvalidFlag("rows are dependent")
            prow = by_col.get(c)
            if prow is None:
                break
            f = mul[r[c]][inv[prow[c]]]
            mf = mul[f]
            r = [sub[x][mf[y]] for x, y in zip(r, prow)]
        by_col[c] = r
        out.append(c)
    return out


def rank_table_from_pivots(pivots: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    n = len(pivots)
    return tuple(
        tuple(sum(1 for l in range(j) if pivots[l] < i) for j in range(n + 1))
        for i in range(n + 1)
    )


def rank_matrix(v: Flag) -> RankMatrix:
    return RankMatrix(v.n, rank_table_from_pivots(relative_pivots(v.spec, v.adapted_basis)))


def rank_matrix_reference(v: Flag) -> RankMatrix:
    """Same table through intersect_dim on every (E_i, V_j); slow, for checking."""
    e = standard_flag(v.n, v.spec)
    table = tuple(
        tuple(intersect_dim(e.subspace(i), v.subspace(j)) for j in range(v.n + 1))
        for i in range(v.n + 1)
    )
    return RankMatrix(v.n, table)


def cell_of(v: Flag) -> Permutation:
    """The permutation sigma with v in the Schubert cell X^sigma."""
    return rank_matrix(v).permutation()


# --- forgetting maps -------------------------------------------------------------------

def _check_j(n: int, j: int) -> None:
    if not 1 <= j <= n - 1:
        raise IndexOutOfRange(f"j = {j} outside 1..{n - 1}")


def forget_j(v: Flag, j: int) -> IncompleteFlag:
    _check_j(v.n, j)
    subs = v.subspaces[: j - 1] + v.subspaces[j:]
    return IncompleteFlag(v.spec, v.n, j, subs)


def fiber_of(w: IncompleteFlag) -> list[Flag]:
    """The q + 1 completions of w, one per line in W_{j+1}/W_{j-1}."""
    spec, n, j = w.spec, w.n, w.omitted
    _check_j(n, j)
    lower = w.subspace(j - 1)
    upper = w.subspace(j + 1)
    extra: list[Row] = []
    base = list(lower.basis)
    for row in upper.basis:
        if rank_rows(spec, base + extra + [row], n) > len(base) + len(extra):
            extra.append(row)
    if len(extra) != 2:
        raise InvalidFlag(f"W_{j + 1}/W_{j - 1} is not two-dimensional")
    u, v = extra
    add, mul = spec.add_table, spec.mul_table
    lines = [tuple(add[a][mul[t][b]] for a, b in zip(u, v)) for t in range(spec.q)] + [v]
    out = []
    for line in lines:
        middle = Subspace(spec, n, rref_rows(spec, base + [line], n))
        subs = w.subspaces[: j - 1] + (middle,) + w.subspaces[j - 1:]
        out.append(Flag(spec, n, subs))
    return out


def act(v: Flag, g_rows: Sequence[Sequence[int]]) -> Flag:
    """V g for an invertible matrix given as rows of codes (no invertibility check)."""
    return Flag.from_rows(v.spec, mat_mul(v.spec, v.adapted_basis, g_rows))
