import random

import pytest

from qflags.errors import BudgetExceeded, IndexOutOfRange, InvalidFlag
from qflags.flag import (Flag, act, cell_of, cell_points, enumerate_cells, enumerate_flags, fiber_of,
                         flag_from_perm, forget_j, rank_matrix, rank_matrix_reference, standard_flag,
                         star_positions)
from qflags.gfq import field_new
from qflags.linalg import Subspace, random_lower_triangular
from qflags.perm import Permutation, enumerate_sn, identity, inversions, poincare_sum

from conftest import brute_flags

SIGMA6 = Permutation((4, 2, 5, 1, 6, 3))

# normal form of a cell in n = 6: S marks a free entry
PATTERN6 = [
    "SSS100",
    "S10000",
    "S0S010",
    "100000",
    "00S001",
    "001000",
]


def test_standard_flag(gf2):
    assert standard_flag(1, gf2).subspaces == ()
    assert standard_flag(2, gf2).subspace(1) == Subspace.span(gf2, 2, [(1, 0)])
    assert standard_flag(3, gf2).subspace(2).basis == ((1, 0, 0), (0, 1, 0))


def test_flag_from_perm(gf2):
    assert flag_from_perm(identity(4), gf2) == standard_flag(4, gf2)
    assert flag_from_perm(Permutation((2, 1)), gf2).subspace(1) == Subspace.span(gf2, 2, [(0, 1)])
    v = flag_from_perm(SIGMA6, gf2)
    assert v.subspace(1) == Subspace.coordinate(gf2, 6, [4])
    assert v.subspace(2) == Subspace.coordinate(gf2, 6, [4, 2])
    assert v.subspace(5) == Subspace.coordinate(gf2, 6, [4, 2, 5, 1, 6])


def test_star_positions_match_pattern():
    expected = [(r, c) for r, line in enumerate(PATTERN6) for c, ch in enumerate(line) if ch == "S"]
    assert sorted(star_positions(SIGMA6)) == expected
    assert len(expected) == inversions(SIGMA6) == 7


def test_six_dim_cell_has_128_points(gf2):
    points = cell_points(SIGMA6, gf2)
    assert len(points) == 128 == len(set(points))
    assert all(cell_of(v) == SIGMA6 for v in points[:: 9])


def test_cell_points_examples(gf2):
    assert cell_points(identity(3), gf2) == [standard_flag(3, gf2)]
    pts = cell_points(Permutation((2, 1)), gf2)
    assert {v.subspace(1) for v in pts} == {Subspace.span(gf2, 2, [(0, 1)]), Subspace.span(gf2, 2, [(1, 1)])}


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3), (2, 4)])
def test_enumeration_matches_chain_oracle(n, q):
    spec = field_new(q)
    flags = enumerate_flags(n, spec)
    oracle = brute_flags(spec, n)
    as_sets = {tuple(frozenset(s.vectors()) for s in f.subspaces) for f in flags}
    assert len(flags) == len(as_sets) == len(oracle) == poincare_sum(n, q)
    assert as_sets == oracle


def test_flag_counts(gf2):
    assert len(enumerate_flags(1, gf2)) == 1
    assert len(enumerate_flags(2, gf2)) == 3
    assert len(enumerate_flags(3, gf2)) == 21


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2), (4, 3)])
def test_cells_partition(n, q):
    spec = field_new(q)
    cells = enumerate_cells(n, spec)
    seen = set()
    for sigma, pts in cells.items():
        assert len(pts) == q ** inversions(sigma)
        assert all(cell_of(v) == sigma for v in pts)
        assert seen.isdisjoint(pts)
        seen.update(pts)
    assert len(seen) == poincare_sum(n, q)


@pytest.mark.parametrize("q", [2, 3])
def test_cell_of_roundtrip(q):
    spec = field_new(q)
    for sigma in enumerate_sn(4):
        assert cell_of(flag_from_perm(sigma, spec)) == sigma


def test_cell_of_nonstandard_line(gf2):
    v = Flag.from_subspaces(gf2, 2, [Subspace.span(gf2, 2, [(1, 1)])])
    assert rank_matrix(v).table[1][1] == 0
    assert cell_of(v) == Permutation((2, 1))


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_rank_matrix_matches_intersect_dim(n, q):
    for v in enumerate_flags(n, field_new(q))[::3]:
        rm = rank_matrix(v)
        assert rm == rank_matrix_reference(v)
        t = rm.table
        assert all(t[n][j] == j and t[j][n] == j for j in range(n + 1))
        assert all(0 <= t[i + 1][j] - t[i][j] <= 1 and 0 <= t[i][j + 1] - t[i][j] <= 1
                   for i in range(n) for j in range(n))


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_cells_are_borel_stable(n, q):
    spec = field_new(q)
    rng = random.Random(n * 10 + q)
    flags = enumerate_flags(n, spec)
    for _ in range(50):
        g = random_lower_triangular(spec, n, rng).entries
        for v in rng.sample(flags, min(10, len(flags))):
            assert cell_of(act(v, g)) == cell_of(v)


def test_fiber_examples(gf2, gf3):
    flags2 = enumerate_flags(2, gf2)
    assert set(fiber_of(forget_j(flags2[0], 1))) == set(flags2)
    for v in enumerate_flags(3, gf2):
        for j in (1, 2):
            fib = fiber_of(forget_j(v, j))
            assert len(fib) == 3 == len(set(fib)) and v in fib
            assert all(forget_j(u, j) == forget_j(v, j) for u in fib)
    for v in enumerate_flags(3, gf3)[::5]:
        assert len(set(fiber_of(forget_j(v, 2)))) == 4


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_fibers_partition(n, q):
    flags = enumerate_flags(n, field_new(q))
    for j in range(1, n):
        groups = {}
        for v in flags:
            groups.setdefault(forget_j(v, j), set()).add(v)
        assert all(len(g) == q + 1 for g in groups.values())
        assert sum(len(g) for g in groups.values()) == len(flags)
        w = next(iter(groups))
        assert set(fiber_of(w)) == groups[w]


def test_errors(gf2):
    with pytest.raises(IndexOutOfRange):
        forget_j(standard_flag(3, gf2), 3)
    with pytest.raises(BudgetExceeded):
        enumerate_flags(4, gf2, budget=100)
    with pytest.raises(BudgetExceeded):
        cell_points(SIGMA6, gf2, budget=10)
    with pytest.raises(InvalidFlag):
        Flag.from_subspaces(gf2, 3, [Subspace.span(gf2, 3, [(1, 0, 0)]),
                                     Subspace.span(gf2, 3, [(0, 1, 0), (0, 0, 1)])])
    with pytest.raises(InvalidFlag):
        Flag.from_rows(gf2, [(1, 0), (1, 0)])


def test_budget_env_override(gf2, monkeypatch):
    monkeypatch.setenv("STEINBERG_BUDGET", "20")
    with pytest.raises(BudgetExceeded):
        enumerate_flags(3, gf2)
    monkeypatch.setenv("STEINBERG_BUDGET", "21")
    assert len(enumerate_flags(3, gf2)) == 21
