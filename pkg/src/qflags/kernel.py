"""The pair count k(V, W), the kernel K = (-q)^(-k) and exact Gram matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, SpecMismatch
from .flag import Flag, rank_table_from_pivots, relative_pivots, standard_flag
from .linalg import intersect_dim, mat_mul


def _check(v: Flag, w: Flag) -> None:
    if v.spec != w.spec:
        raise SpecMismatch(f"{v.spec!r} vs {w.spec!r}")
    if v.n != w.n:
        raise DimensionMismatch(f"flags in dimensions {v.n} and {w.n}")


def intersection_table(v: Flag, w: Flag) -> tuple[tuple[int, ...], ...]:
    """table[i][j] = dim(V_i ∩ W_j), 0 <= i, j <= n.

    W's adapted basis is rewritten in coordinates of V's adapted basis, in
    which V becomes the standard flag; the echelon pivots of the rewritten
    rows then give every intersection dimension at once.
    """
    _check(v, w)
    coords = mat_mul(v.spec, w.adapted_basis, v.adapted_inverse)
    return rank_table_from_pivots(relative_pivots(v.spec, coords))


def intersection_table_reference(v: Flag, w: Flag) -> tuple[tuple[int, ...], ...]:
    """The same table from (n+1)^2 independent rank computations."""
    _check(v, w)
    return tuple(
        tuple(intersect_dim(v.subspace(i), w.subspace(j)) for j in range(v.n + 1))
        for i in range(v.n + 1)
    )


def count_pairs(table: Sequence[Sequence[int]]) -> int:
    """#{(i, j) in [0, n)^2 : table[i][j] == table[i+1][j+1]}."""
    n = len(table) - 1
    return sum(1 for i in range(n) for j in range(n) if table[i][j] == table[i + 1][j + 1])


def k_pairs(v: Flag, w: Flag) -> int:
    return count_pairs(intersection_table(v, w))


def k_pairs_reference(v: Flag, w: Flag) -> int:
    return count_pairs(intersection_table_reference(v, w))


@dataclass(frozen=True)
class KernelValue:
    """(-q)^(-k), kept as the exponent until a rational is needed."""

    k: int
    q: int

    @property
    def sign(self) -> int:
        return -1 if self.k % 2 else 1

    @property
    def value(self) -> Fraction:
        return Fraction(self.sign, self.q ** self.k)

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def kernel_value(v: Flag, w: Flag) -> KernelValue:
    return KernelValue(k_pairs(v, w), v.spec.q)


def kappa(w: Flag) -> int:
    """k(E, W) against the standard flag."""
    return k_pairs(standard_flag(w.n, w.spec), w)


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[Fraction, ...], ...]
    labels: tuple[Flag, ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_symmetric(self) -> bool:
        m = self.entries
        return all(m[a][b] == m[b][a] for a in range(len(m)) for b in range(a))

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def gram_matrix(flags: Sequence[Flag], full: bool = False) -> GramMatrix:
    """Exact Gram matrix K(flags[a], flags[b]).

    Only the upper triangle is evaluated and mirrored unless ``full`` is set,
    in which case every entry is computed independently.
    """
    flags = tuple(flags)
    m = len(flags)
    if m:
        for f in flags[1:]:
            _check(flags[0], f)
        q = flags[0].spec.q
        powers = [Fraction((-1) ** k, q ** k) for k in range(flags[0].n ** 2 + 1)]
    rows = [[Fraction(0)] * m for _ in range(m)]
    for a in range(m):
        for b in range(m if full else a + 1):
            val = powers[k_pairs(flags[a], flags[b])]
            rows[a][b] = val
            if not full:
                rows[b][a] = val
    return GramMatrix(tuple(tuple(r) for r in rows), flags)
