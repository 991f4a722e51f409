"""Averaging operators over the forgetting maps, the Steinberg subspace,
the Borel-invariant function eta, and exact PSD certificates.

Everything here is exact: functions on Fl(n) take ``Fraction`` values and no
floating point enters any verification path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from . import ratmat
from .errors import BudgetExceeded, IndexOutOfRange, NotSymmetric
from .flag import (Flag, IncompleteFlag, act, cell_of, default_budget, enumerate_flags, flag_from_perm,
                   forget_j, standard_flag)
from .gfq import FieldSpec, field_new
from .kernel import GramMatrix, k_pairs, kappa, kernel_value
from .linalg import random_invertible, random_lower_triangular
from .perm import Permutation, enumerate_sn, inversions, left_mul_tau, poincare_sum


class FlagSpace:
    """Fl(n, q) enumerated once, with an index map and cached operators."""

    def __init__(self, n: int, spec: FieldSpec, budget: int | None = None):
        self.n = n
        self.spec = spec
        self.flags: list[Flag] = enumerate_flags(n, spec, budget)
        self.index = {f: i for i, f in enumerate(self.flags)}

    @property
    def q(self) -> int:
        return self.spec.q

    def __len__(self):
        return len(self.flags)

    @cached_property
    def standard_index(self) -> int:
        return self.index[standard_flag(self.n, self.spec)]

    @cached_property
    def cells(self) -> list[Permutation]:
        return [cell_of(f) for f in self.flags]

    def fibers(self, j: int) -> dict[IncompleteFlag, list[int]]:
        """Incomplete flags of Fl_j(n) with the indices of their completions."""
        if not 1 <= j <= self.n - 1:
            raise IndexOutOfRange(f"j = {j} outside 1..{self.n - 1}")
        return self._fibers[j]

    @cached_property
    def _fibers(self) -> dict[int, dict[IncompleteFlag, list[int]]]:
        out = {}
        for j in range(1, self.n):
            groups: dict[IncompleteFlag, list[int]] = {}
            for i, f in enumerate(self.flags):
                groups.setdefault(forget_j(f, j), []).append(i)
            out[j] = groups
        return out

    def operator_rows(self) -> list[dict[int, Fraction]]:
        """Stacked Pi_j over all j, each row a sparse 0/1 fiber indicator."""
        one = Fraction(1)
        return [
            {i: one for i in members}
            for j in range(1, self.n)
            for members in self.fibers(j).values()
        ]

    def permutation_of(self, g_rows) -> list[int]:
        """Index map i -> index of flags[i] g."""
        return [self.index[act(f, g_rows)] for f in self.flags]


@lru_cache(maxsize=16)
def _space(n: int, q: int) -> FlagSpace:
    return FlagSpace(n, field_new(q), budget=poincare_sum(n, q))


def flag_space(n: int, q: int, budget: int | None = None) -> FlagSpace:
    """Cached :class:`FlagSpace`; the budget is enforced on every call."""
    budget = default_budget() if budget is None else budget
    total = poincare_sum(n, q)
    if total > budget:
        raise BudgetExceeded(total, budget)
    return _space(n, q)


@dataclass(frozen=True)
class FlFunction:
    """A rational-valued function on the flags of a FlagSpace."""

    base: FlagSpace = field(repr=False, compare=False)
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(self.base):
            raise ValueError("one value per flag is required")

    def __call__(self, flag: Flag) -> Fraction:
        return self.values[self.base.index[flag]]

    @classmethod
    def delta(cls, base: FlagSpace, flag: Flag) -> "FlFunction":
        vals = [Fraction(0)] * len(base)
        vals[base.index[flag]] = Fraction(1)
        return cls(base, tuple(vals))

    @classmethod
    def constant(cls, base: FlagSpace, c=1) -> "FlFunction":
        return cls(base, tuple(Fraction(c) for _ in range(len(base))))


def pi_j_apply(f: FlFunction, j: int) -> dict[IncompleteFlag, Fraction]:
    """Average of f over each fiber of the map forgetting V_j."""
    q = f.base.q
    return {
        w: sum((f.values[i] for i in members), Fraction(0)) / (q + 1)
        for w, members in f.base.fibers(j).items()
    }


def eta(n: int, q: int, budget: int | None = None) -> FlFunction:
    """W -> (-q)^(-kappa(W))."""
    space = flag_space(n, q, budget)
    e = standard_flag(n, space.spec)
    return FlFunction(space, tuple(Fraction((-1) ** k, q ** k)
                                   for k in (k_pairs(e, w) for w in space.flags)))


def eta_on_cells(n: int, q: int, budget: int | None = None) -> dict[Permutation, Fraction]:
    """Value of eta at E^sigma for each sigma; eta is read off the function, not the formula."""
    space = flag_space(n, q, budget)
    values = eta(n, q, budget)
    return {s: values(flag_from_perm(s, space.spec)) for s in enumerate_sn(n)}


def recurrence_failures(n: int, q: int, budget: int | None = None) -> list[tuple[int, Permutation]]:
    """(j, sigma) with I(tau_j sigma) > I(sigma) violating q eta[tau_j sigma] + eta[sigma] = 0."""
    cell_eta = eta_on_cells(n, q, budget)
    bad = []
    for sigma in enumerate_sn(n):
        for j in range(1, n):
            up = left_mul_tau(j, sigma)
            if inversions(up) > inversions(sigma) and q * cell_eta[up] + cell_eta[sigma] != 0:
                bad.append((j, sigma))
    return bad


@lru_cache(maxsize=16)
def _steinberg(n: int, q: int) -> tuple[ratmat.RationalMatrix, tuple[int, ...]]:
    space = _space(n, q)
    basis, free = ratmat.nullspace_with_free(space.operator_rows(), len(space))
    return basis, tuple(free)


def steinberg_basis(n: int, q: int, budget: int | None = None) -> ratmat.RationalMatrix:
    """Rows span the joint kernel of all Pi_j (the 1/(q+1) factor is irrelevant)."""
    flag_space(n, q, budget)
    return _steinberg(n, q)[0]


def in_steinberg(n: int, q: int, values: Sequence[Fraction]) -> bool:
    """Exact membership: f equals the combination read off the free columns."""
    basis, free = _steinberg(n, q)
    recon = [Fraction(0)] * basis.ncols
    for row, c in zip(basis.rows, free):
        coef = values[c]
        if coef:
            recon = [x + coef * y for x, y in zip(recon, row)]
    return recon == list(values)


def b_invariant_solutions(n: int, q: int, budget: int | None = None) -> ratmat.RationalMatrix:
    """Cell-constant functions in the joint kernel, as vectors indexed by S_n."""
    space = flag_space(n, q, budget)
    perms = enumerate_sn(n)
    col = {s: i for i, s in enumerate(perms)}
    cells = space.cells
    rows = set()
    for j in range(1, n):
        for members in space.fibers(j).values():
            counts: dict[int, int] = {}
            for i in members:
                c = col[cells[i]]
                counts[c] = counts.get(c, 0) + 1
            rows.add(tuple(sorted(counts.items())))
    return ratmat.nullspace([dict(r) for r in sorted(rows)], len(perms))


def b_invariant_dim_in_steinberg(n: int, q: int, budget: int | None = None) -> int:
    return b_invariant_solutions(n, q, budget).nrows


# --- PSD certification ------------------------------------------------------------

@dataclass(frozen=True)
class PSDCertificate:
    """Outcome of congruence elimination.

    ``witness`` is None for PSD input; otherwise it names a principal
    submatrix (original indices) whose determinant ``minor`` is negative.
    """

    is_psd: bool
    rank: int
    pivots: tuple[Fraction, ...]
    witness: dict | None = None

    def __iter__(self):
        return iter((self.is_psd, self.rank, self.witness))


def psd_rank(g: GramMatrix | Sequence[Sequence[Fraction]]) -> PSDCertificate:
    """Exact symmetric elimination deciding positive semidefiniteness.

    Diagonal pivots are taken in index order.  A positive pivot is eliminated;
    a zero pivot requires its residual row to vanish; anything else is a
    certificate of indefiniteness.
    """
    rows = g.entries if isinstance(g, GramMatrix) else g
    m = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    for i in range(m):
        if len(a[i]) != m:
            raise NotSymmetric("matrix is not square")
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
    used: list[int] = []
    pivots: list[Fraction] = []
    alive = list(range(m))
    for i in range(m):
        alive.remove(i)
        d = a[i][i]
        pivots.append(d)
        if d < 0:
            det = _prod(p for p in pivots if p)
            return PSDCertificate(False, len(used), tuple(pivots),
                                  {"kind": "negative_pivot", "indices": used + [i], "minor": det})
        if d == 0:
            for j in alive:
                b = a[i][j]
                if b:
                    det = _prod(p for p in pivots if p) * (-b * b)
                    return PSDCertificate(False, len(used), tuple(pivots),
                                          {"kind": "zero_pivot", "indices": used + [i, j], "minor": det})
            continue
        used.append(i)
        ri = a[i]
        col = [(j, ri[j]) for j in alive if ri[j]]
        for x, (j, aij) in enumerate(col):
            f = aij / d
            rj = a[j]
            for k, aik in col[x:]:
                v = rj[k] - f * aik
                rj[k] = v
                a[k][j] = v
    return PSDCertificate(True, len(used), tuple(pivots), None)


def _prod(xs) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


# --- reproducing kernel of the Steinberg subspace ------------------------------------------

def project_delta(n: int, q: int, budget: int | None = None, check: bool = True) -> tuple[Fraction, Fraction]:
    """Orthogonal projection of the delta function at E onto the Steinberg subspace.

    Returns (s, residual) with P delta_E = s * eta exactly when residual == 0.
    With ``check`` an AssertionError is raised unless s == dim / |Fl(n)|.
    """
    space = flag_space(n, q, budget)
    basis = steinberg_basis(n, q, budget).rows
    e = space.standard_index
    gram = [[sum((x * y for x, y in zip(u, v) if x and y), Fraction(0)) for v in basis] for u in basis]
    coeffs = ratmat.solve(gram, [u[e] for u in basis])
    proj = [Fraction(0)] * len(space)
    for c, u in zip(coeffs, basis):
        if c:
            proj = [x + c * y for x, y in zip(proj, u)]
    values = eta(n, q, budget).values
    s = proj[e] / values[e]
    residual = max(abs(p - s * v) for p, v in zip(proj, values))
    if check and s != Fraction(len(basis), len(space)):
        raise AssertionError(f"s = {s} differs from dim/|Fl| = {len(basis)}/{len(space)}")
    return s, residual


# --- invariance ----------------------------------------------------------------

def invariance_suite(n: int, q: int, samples: int, seed: int = 0,
                     budget: int | None = None) -> dict:
    """Random checks of GL(n)-invariance of K and B(n)-invariance of eta.

    Failures are counted and reported, never raised.  eta o g = eta is tested
    on every flag of Fl(n) when it fits the budget, else on ``samples`` flags.
    """
    spec = field_new(q)
    rng = random.Random(seed)
    kernel_failures = []
    for t in range(samples):
        g = random_invertible(spec, n, rng).entries
        v = Flag.from_rows(spec, random_invertible(spec, n, rng).entries)
        w = Flag.from_rows(spec, random_invertible(spec, n, rng).entries)
        if kernel_value(act(v, g), act(w, g)) != kernel_value(v, w):
            kernel_failures.append(t)
    try:
        pool = flag_space(n, q, budget).flags
    except BudgetExceeded:
        pool = None
    eta_failures = []
    for t in range(samples):
        g = random_lower_triangular(spec, n, rng).entries
        targets = pool if pool is not None else [
            Flag.from_rows(spec, random_invertible(spec, n, rng).entries) for _ in range(samples)]
        if any(kappa(act(w, g)) != kappa(w) for w in targets):
            eta_failures.append(t)
    return {
        "n": n,
        "q": q,
        "samples": samples,
        "kernel_failures": len(kernel_failures),
        "eta_failures": len(eta_failures),
        "passed": not kernel_failures and not eta_failures,
    }


def steinberg_invariance_failures(n: int, q: int, samples: int, seed: int = 0,
                                  budget: int | None = None) -> int:
    """Number of sampled g whose action moves some basis vector out of the subspace."""
    space = flag_space(n, q, budget)
    basis = steinberg_basis(n, q, budget).rows
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        g = random_invertible(space.spec, n, rng).entries
        moved = space.permutation_of(g)
        if not all(in_steinberg(n, q, [u[moved[i]] for i in range(len(space))]) for u in basis):
            failures += 1
    return failures
