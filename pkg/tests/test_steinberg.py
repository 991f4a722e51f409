import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qflags.errors import BudgetExceeded, IndexOutOfRange, NotSymmetric
from qflags.flag import flag_from_perm, standard_flag
from qflags.kernel import gram_matrix
from qflags.perm import enumerate_sn, inversions, left_mul_tau
from qflags.ratmat import determinant, rank
from qflags.steinberg import (FlFunction, b_invariant_dim_in_steinberg, b_invariant_solutions, eta,
                              eta_on_cells, flag_space, in_steinberg, invariance_suite, pi_j_apply,
                              project_delta, psd_rank, recurrence_failures, steinberg_basis,
                              steinberg_invariance_failures)

from conftest import SMALL_INSTANCES


def test_pi_j_constant_and_delta():
    space = flag_space(2, 2)
    assert set(pi_j_apply(FlFunction.constant(space), 1).values()) == {1}
    delta = FlFunction.delta(space, standard_flag(2, space.spec))
    assert list(pi_j_apply(delta, 1).values()) == [Fraction(1, 3)]
    space3 = flag_space(3, 3)
    for j in (1, 2):
        out = pi_j_apply(FlFunction.constant(space3, 5), j)
        assert len(out) == 52 // 4 and set(out.values()) == {5}
    with pytest.raises(IndexOutOfRange):
        pi_j_apply(FlFunction.constant(space3), 3)


@pytest.mark.parametrize("n,q", SMALL_INSTANCES + [(4, 2)])
def test_eta_is_annihilated(n, q):
    f = eta(n, q)
    for j in range(1, n):
        assert set(pi_j_apply(f, j).values()) == {0}


def test_eta_values_n3_q2():
    cells = eta_on_cells(3, 2)
    assert [cells[s] for s in enumerate_sn(3)] == [Fraction(x) for x in ("1", "-1/2", "-1/2", "1/4", "1/4", "-1/8")]
    space = flag_space(3, 2)
    f = eta(3, 2)
    assert f(standard_flag(3, space.spec)) == 1
    for flag, sigma in zip(space.flags, space.cells):
        assert f(flag) == cells[sigma]


@pytest.mark.parametrize("n,q", SMALL_INSTANCES + [(4, 2)])
def test_recurrence(n, q):
    assert recurrence_failures(n, q) == []
    cells = eta_on_cells(n, q)
    ascents = 0
    for sigma in enumerate_sn(n):
        for j in range(1, n):
            up = left_mul_tau(j, sigma)
            if inversions(up) > inversions(sigma):
                assert q * cells[up] + cells[sigma] == 0
                ascents += 1
    assert ascents == len(enumerate_sn(n)) * (n - 1) // 2


@pytest.mark.parametrize("n,q,dim", [(2, 2, 2), (2, 3, 3), (2, 4, 4), (3, 2, 8), (3, 3, 27)])
def test_steinberg_dimension(n, q, dim):
    basis = steinberg_basis(n, q)
    assert basis.nrows == dim == q ** (n * (n - 1) // 2)
    space = flag_space(n, q)
    for row in basis.rows:
        f = FlFunction(space, row)
        assert all(v == 0 for j in range(1, n) for v in pi_j_apply(f, j).values())


@pytest.mark.parametrize("n,q", SMALL_INSTANCES)
def test_b_invariant_unique_and_eta(n, q):
    assert b_invariant_dim_in_steinberg(n, q) == 1
    vec = b_invariant_solutions(n, q).rows[0]
    cells = eta_on_cells(n, q)
    perms = enumerate_sn(n)
    scale = vec[0]
    assert all(vec[i] == scale * cells[s] for i, s in enumerate(perms))


def test_psd_examples():
    cert = psd_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert (cert.is_psd, cert.rank) == (True, 3)
    g = gram_matrix(flag_space(2, 2).flags)
    cert = psd_rank(g)
    assert (cert.is_psd, cert.rank) == (True, 2)
    assert cert.pivots == (1, Fraction(3, 4), 0)
    cert = psd_rank(gram_matrix(flag_space(3, 2).flags))
    assert (cert.is_psd, cert.rank) == (True, 8)


def test_psd_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        psd_rank([[1, 2], [3, 4]])


def _check_witness(a, cert):
    idx = cert.witness["indices"]
    minor = determinant([[a[i][j] for j in idx] for i in idx])
    assert minor == cert.witness["minor"] and minor < 0


def test_psd_witnesses():
    a = [[1, 2], [2, 1]]
    cert = psd_rank(a)
    assert not cert.is_psd and cert.witness["kind"] == "negative_pivot"
    _check_witness(a, cert)
    a = [[0, 1, 0], [1, 5, 0], [0, 0, 1]]
    cert = psd_rank(a)
    assert not cert.is_psd and cert.witness["kind"] == "zero_pivot"
    _check_witness(a, cert)
    a = [[1, 1, 0], [1, 1, 1], [0, 1, 1]]
    cert = psd_rank(a)
    assert not cert.is_psd
    _check_witness(a, cert)


_small = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_psd_on_gram_products(m, r, data):
    b = [[data.draw(_small) for _ in range(r)] for _ in range(m)]
    a = [[sum((x * y for x, y in zip(u, v)), Fraction(0)) for v in b] for u in b]
    cert = psd_rank(a)
    assert cert.is_psd and cert.rank == rank(b, r)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.data())
def test_psd_agrees_with_principal_minors(m, data):
    a = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            a[i][j] = a[j][i] = data.draw(_small)
    cert = psd_rank(a)
    from itertools import combinations
    minors_ok = all(determinant([[a[i][j] for j in s] for i in s]) >= 0
                    for k in range(1, m + 1) for s in combinations(range(m), k))
    assert cert.is_psd == minors_ok
    if not cert.is_psd:
        _check_witness(a, cert)
    else:
        assert cert.rank == rank(a, m)


@pytest.mark.parametrize("n,q", SMALL_INSTANCES)
def test_random_subsets_psd(n, q):
    flags = flag_space(n, q).flags
    rng = random.Random(n * q)
    for _ in range(10):
        subset = rng.sample(flags, rng.randint(1, len(flags)))
        assert psd_rank(gram_matrix(subset)).is_psd


@pytest.mark.parametrize("n,q,s", [(2, 2, Fraction(2, 3)), (3, 2, Fraction(8, 21)), (3, 3, Fraction(27, 52))])
def test_project_delta(n, q, s):
    assert project_delta(n, q) == (s, 0)


def test_project_delta_by_hand():
    # P delta_E = delta_E - (1/3) * ones on the three flags of Fl(2, 2)
    space = flag_space(2, 2)
    e = space.standard_index
    expected = [Fraction(2, 3) if i == e else Fraction(-1, 3) for i in range(3)]
    s, _ = project_delta(2, 2)
    assert [s * v for v in eta(2, 2).values] == expected


def test_invariance_suite():
    rep = invariance_suite(3, 2, samples=100, seed=1)
    assert rep["passed"] and rep["kernel_failures"] == 0 and rep["eta_failures"] == 0
    rep = invariance_suite(3, 3, samples=20, seed=2, budget=10)
    assert rep["passed"]


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (3, 3)])
def test_steinberg_subspace_is_gl_stable(n, q):
    assert steinberg_invariance_failures(n, q, samples=5, seed=3) == 0


def test_membership_rejects_non_members():
    space = flag_space(3, 2)
    assert not in_steinberg(3, 2, FlFunction.constant(space).values)
    assert in_steinberg(3, 2, eta(3, 2).values)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        steinberg_basis(4, 2, budget=100)
    with pytest.raises(BudgetExceeded):
        eta(3, 3, budget=10)
