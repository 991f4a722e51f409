"""The full verification suite for one instance Fl(n, q), producing a Report."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import steinberg
from .errors import BudgetExceeded, NotSymmetric
from .flag import cell_size, default_budget
from .kernel import gram_matrix, kappa
from .perm import enumerate_sn, inversions, poincare_sum
from .serialize import rational_str


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


@dataclass
class Report:
    n: int
    q: int
    flag_count: int
    cell_sizes: dict[str, int]
    gram_rank: int | None
    steinberg_dim: int
    is_psd: bool
    s: str | None
    b_invariant_dim: int
    checks: list[Check] = field(default_factory=list)
    timings: dict[str, float] | None = None

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        out = asdict(self)
        out["checks"] = [c.to_json() for c in self.checks]
        return out


def check_budget(n: int, q: int, budget: int | None = None) -> int:
    """Size Fl(n, q) from the Poincaré sum, before anything is enumerated.

    The dense exact Gram matrix dominates the cost, so the budget caps its
    m^2 entries as well as the flag count m.
    """
    budget = default_budget() if budget is None else budget
    m = poincare_sum(n, q)
    if m > budget:
        raise BudgetExceeded(m, budget)
    if m * m > budget:
        raise BudgetExceeded(m * m, budget, "Gram matrix entries")
    return m


def run_verification(n: int, q: int, budget: int | None = None, samples: int = 100,
                     seed: int = 0, timings: bool = False) -> Report:
    check_budget(n, q, budget)
    clock: dict[str, float] = {}
    t0 = time.perf_counter()

    def lap(name):
        nonlocal t0
        now = time.perf_counter()
        clock[name] = round(now - t0, 4)
        t0 = now

    checks: list[Check] = []
    space = steinberg.flag_space(n, q, budget)
    flags = space.flags
    perms = enumerate_sn(n)
    m = len(flags)

    poincare = sum(q ** inversions(s) for s in perms)
    checks.append(Check("flag_count_poincare", m == poincare == poincare_sum(n, q) == len(set(flags)),
                        f"|Fl| = {m}, sum q^I = {poincare}"))

    sizes: dict[str, int] = {}
    bad_cells = []
    for c in space.cells:
        sizes[str(c)] = sizes.get(str(c), 0) + 1
    for s in perms:
        if sizes.get(str(s), 0) != cell_size(s, q) or cell_size(s, q) != q ** inversions(s):
            bad_cells.append(str(s))
    checks.append(Check("cell_sizes", not bad_cells and sum(sizes.values()) == m,
                        "all |X^s| = q^I(s)" if not bad_cells else f"mismatch at {bad_cells}"))

    bad_kappa = sum(1 for f, c in zip(flags, space.cells) if kappa(f) != inversions(c))
    checks.append(Check("kappa_equals_inversions", bad_kappa == 0, f"{bad_kappa} flags disagree"))
    lap("cells")

    gram = gram_matrix(flags)
    unit = all(gram.entries[i][i] == 1 for i in range(m))
    checks.append(Check("gram_unit_diagonal", unit, "K(V,V) = 1" if unit else "diagonal entry != 1"))
    lap("gram")

    try:
        cert = steinberg.psd_rank(gram)
        is_psd, gram_rank = cert.is_psd, cert.rank
        checks.append(Check("gram_psd", is_psd, "congruence pivots nonnegative" if is_psd
                            else f"witness {cert.witness['kind']} on {len(cert.witness['indices'])} indices"))
    except NotSymmetric as exc:
        is_psd, gram_rank = False, None
        checks.append(Check("gram_psd", False, f"not symmetric: {exc}"))
    lap("psd")

    basis = steinberg.steinberg_basis(n, q, budget)
    dim = basis.nrows
    expected = q ** (n * (n - 1) // 2)
    checks.append(Check("rank_equals_steinberg_dim", gram_rank == dim == expected,
                        f"gram rank {gram_rank}, joint kernel dim {dim}, q^(n(n-1)/2) = {expected}"))

    stray = 0
    for j in range(1, n):
        for members in space.fibers(j).values():
            for row in gram.entries:
                if sum(row[i] for i in members) != 0:
                    stray += 1
    checks.append(Check("kernel_rows_in_steinberg", stray == 0, f"{stray} nonzero fiber sums"))
    lap("steinberg")

    eta_fn = steinberg.eta(n, q, budget)
    nonzero = sum(1 for j in range(1, n) for v in steinberg.pi_j_apply(eta_fn, j).values() if v != 0)
    checks.append(Check("eta_annihilated", nonzero == 0, f"{nonzero} nonzero averages"))
    rec = steinberg.recurrence_failures(n, q, budget)
    checks.append(Check("eta_recurrence", not rec, f"{len(rec)} ascent pairs violate it"))

    s_val, residual = steinberg.project_delta(n, q, budget, check=False)
    s_ok = residual == 0 and s_val == Fraction(dim, m)
    checks.append(Check("projection_delta", s_ok, f"s = {rational_str(s_val)}, residual = {rational_str(residual)}"))

    sols = steinberg.b_invariant_solutions(n, q, budget)
    b_dim = sols.nrows
    proportional = False
    if b_dim == 1:
        cell_eta = steinberg.eta_on_cells(n, q, budget)
        vec = sols.rows[0]
        ref = vec[0] / cell_eta[perms[0]]
        proportional = all(vec[i] == ref * cell_eta[s] for i, s in enumerate(perms))
    checks.append(Check("b_invariant_unique", b_dim == 1 and proportional,
                        f"dimension {b_dim}, spanned by eta: {proportional}"))
    lap("eta")

    inv = steinberg.invariance_suite(n, q, samples, seed, budget)
    checks.append(Check("gl_invariance", inv["kernel_failures"] == 0,
                        f"{inv['kernel_failures']} of {samples} triples"))
    checks.append(Check("eta_borel_invariance", inv["eta_failures"] == 0,
                        f"{inv['eta_failures']} of {samples} lower-triangular g"))
    moves = min(samples, 10)
    moved = steinberg.steinberg_invariance_failures(n, q, moves, seed, budget)
    checks.append(Check("steinberg_gl_stable", moved == 0, f"{moved} of {moves} sampled g"))
    lap("invariance")

    return Report(
        n=n, q=q, flag_count=m,
        cell_sizes={str(s): sizes.get(str(s), 0) for s in perms},
        gram_rank=gram_rank, steinberg_dim=dim, is_psd=is_psd,
        s=rational_str(s_val), b_invariant_dim=b_dim, checks=checks,
        timings=clock if timings else None,
    )
