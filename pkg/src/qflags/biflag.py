"""Flags of the two-sided infinite space, kept in windowed normal form.

A :class:`BiFlag` agrees with the standard flag E (E_j = sequences supported
at indices <= j) outside a window (M, N).  Inside the window it is given by a
complete flag of the quotient E_N / E_M, identified with F_q^(N-M) through
the images of e_{M+1}, ..., e_N.  The ambient space itself is never built.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Literal

from .errors import DimensionMismatch, SingularMatrix, SpecMismatch
from .flag import Flag, standard_flag
from .gfq import FieldSpec
from .kernel import KernelValue, k_pairs
from .linalg import MatrixGF, Subspace, mat_mul, random_invertible


def _empty(spec: FieldSpec) -> Flag:
    return Flag(spec, 0, ())


def _is_standard(interior: Flag) -> bool:
    return interior.n <= 1 or interior == standard_flag(interior.n, interior.spec)


def _drop_first(interior: Flag) -> Flag:
    """F_alpha / F_1 for a flag with F_1 = <e_1>."""
    spec, d = interior.spec, interior.n
    subs = tuple(
        Subspace.span(spec, d - 1, (r[1:] for r in interior.subspace(a).basis))
        for a in range(2, d)
    )
    return Flag(spec, d - 1, subs)


def _drop_last(interior: Flag) -> Flag:
    """Restriction to E_{d-1} for a flag with F_{d-1} = <e_1..e_{d-1}>."""
    spec, d = interior.spec, interior.n
    subs = tuple(
        Subspace(spec, d - 1, tuple(r[:-1] for r in interior.subspace(a).basis))
        for a in range(1, d - 1)
    )
    return Flag(spec, d - 1, subs)


@dataclass(frozen=True)
class BiFlag:
    spec: FieldSpec
    M: int
    N: int
    interior: Flag

    @property
    def is_standard(self) -> bool:
        return self.M == self.N

    def padded(self, lo: int, hi: int) -> Flag:
        """The interior re-expressed on a window (lo, hi) enclosing this one."""
        if self.is_standard:
            return standard_flag(hi - lo, self.spec) if hi > lo else _empty(self.spec)
        if lo > self.M or hi < self.N:
            raise DimensionMismatch(f"window ({lo},{hi}) does not enclose ({self.M},{self.N})")
        d, a, total = self.N - self.M, self.M - lo, hi - lo
        rows = [tuple(int(c == b) for c in range(total)) for b in range(a)]
        rows += [(0,) * a + r + (0,) * (hi - self.N) for r in self.interior.adapted_basis]
        rows += [tuple(int(c == b) for c in range(total)) for b in range(a + d, total)]
        return Flag.from_rows(self.spec, rows)


def normalize(spec: FieldSpec, M: int, N: int, interior: Flag) -> BiFlag:
    if interior.spec != spec:
        raise SpecMismatch(f"{interior.spec!r} vs {spec!r}")
    if interior.n != N - M:
        raise DimensionMismatch(f"interior of dimension {interior.n} on window ({M},{N})")
    while N - M >= 2:
        d = N - M
        if interior.subspace(1) == Subspace.coordinate(spec, d, [1]):
            interior, M = _drop_first(interior), M + 1
        elif interior.subspace(d - 1) == Subspace.coordinate(spec, d, range(1, d)):
            interior, N = _drop_last(interior), N - 1
        else:
            return BiFlag(spec, M, N, interior)
    return biflag_standard(spec)


def biflag_standard(spec: FieldSpec) -> BiFlag:
    return BiFlag(spec, 0, 0, _empty(spec))


def biflag_from_window(M: int, N: int, interior: Flag) -> BiFlag:
    if M > N:
        raise DimensionMismatch(f"empty window ({M},{N})")
    return normalize(interior.spec, M, N, interior)


def _common_window(*flags: BiFlag) -> tuple[int, int]:
    live = [f for f in flags if not f.is_standard]
    if not live:
        return 0, 0
    return min(f.M for f in live), max(f.N for f in live)


def _k_on_window(v: BiFlag, w: BiFlag, lo: int, hi: int) -> int:
    if hi - lo <= 0:
        return 0
    return k_pairs(v.padded(lo, hi), w.padded(lo, hi))


def k_infinite(v: BiFlag, w: BiFlag, check_margin: bool = True) -> int:
    """Number of (i, j) in Z x Z with V_{i+1} ∩ W_{j+1} = V_i ∩ W_j.

    Outside the common window both flags equal E, whose intersections grow
    strictly along the diagonal shift, so only the finitely many pairs inside
    the window count.  With ``check_margin`` that claim is re-checked by
    recounting on the window widened by one step each side.
    """
    if v.spec != w.spec:
        raise SpecMismatch(f"{v.spec!r} vs {w.spec!r}")
    lo, hi = _common_window(v, w)
    k = _k_on_window(v, w, lo, hi)
    if check_margin:
        wider = _k_on_window(v, w, lo - 1, hi + 1)
        if wider != k:
            raise AssertionError(f"pairs outside window ({lo},{hi}): {k} vs {wider}")
    return k


def kernel_infinite(v: BiFlag, w: BiFlag) -> KernelValue:
    return KernelValue(k_infinite(v, w), v.spec.q)


@dataclass(frozen=True)
class WindowedOperator:
    """A group element acting through an invertible block on E_N / E_M.

    ``finitary`` elements are the identity outside the block.  A
    ``lower`` element stands for any lower-triangular infinite matrix whose
    diagonal block on (M, N) is ``block``; its action is only determined on
    flags whose window lies inside (M, N).
    """

    M: int
    N: int
    block: MatrixGF
    kind: Literal["finitary", "lower"] = "finitary"

    def __post_init__(self):
        if self.block.rows != self.N - self.M or self.block.cols != self.N - self.M:
            raise DimensionMismatch(f"block of order {self.block.rows} on window ({self.M},{self.N})")
        if not self.block.is_invertible():
            raise SingularMatrix("block is not invertible")
        if self.kind not in ("finitary", "lower"):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind == "lower" and not self.block.is_lower_triangular():
            raise ValueError("lower-kind operators need a lower-triangular block")


def act_window(g: WindowedOperator, v: BiFlag) -> BiFlag:
    """The flag V g, renormalized."""
    spec = g.block.spec
    if spec != v.spec:
        raise SpecMismatch(f"{spec!r} vs {v.spec!r}")
    if g.kind == "lower" and not v.is_standard and (v.M < g.M or v.N > g.N):
        raise DimensionMismatch(
            f"a lower-triangular block on ({g.M},{g.N}) does not determine the action "
            f"on a flag with window ({v.M},{v.N})")
    lo, hi = (g.M, g.N) if v.is_standard else (min(g.M, v.M), max(g.N, v.N))
    if hi == lo:
        return v
    total, a = hi - lo, g.M - lo
    full = [list(int(i == j) for j in range(total)) for i in range(total)]
    for i, row in enumerate(g.block.entries):
        full[a + i][a:a + len(row)] = row
    rows = mat_mul(spec, v.padded(lo, hi).adapted_basis, full)
    return normalize(spec, lo, hi, Flag.from_rows(spec, rows))


def random_biflag(spec: FieldSpec, rng: random.Random, lo: int = -3, hi: int = 3) -> BiFlag:
    """Normal form of a uniformly random interior on a random sub-window of (lo, hi)."""
    M = rng.randint(lo, hi - 1)
    N = rng.randint(M + 1, hi)
    interior = Flag.from_rows(spec, random_invertible(spec, N - M, rng).entries)
    return biflag_from_window(M, N, interior)


def random_finitary(spec: FieldSpec, rng: random.Random, lo: int = -3, hi: int = 3) -> WindowedOperator:
    M = rng.randint(lo, hi - 1)
    N = rng.randint(M + 1, hi)
    return WindowedOperator(M, N, random_invertible(spec, N - M, rng), "finitary")
