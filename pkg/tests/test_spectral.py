import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.bisimplicial import beta, normalized_cochains_bi, serre_bisimplicial
from artifact.fibrations import product_fibration
from artifact.io import resolve_entry
from artifact.linalg import Field, SparseMatrix, betti_numbers
from artifact.simplicial import NormalizedCochains, boundary_simplex, circle_1, standard_simplex
from artifact.spectral import (INF, FilteredComplex, SpectralSequence, WindowError, first_filtration_ss,
                               serre_pipeline)

F2, F3, QQ = Field(2), Field(3), Field(0)


def test_two_cell_cancellation():
    # a (filtration 0) -> b (filtration 1): E_1 = E_0, d_1 kills both
    F = QQ
    C = FilteredComplex(F, {0: 1, 1: 1}, {0: SparseMatrix.from_dense(F, [[1]])}, {0: [0], 1: [1]}, 1)
    ss = SpectralSequence(C)
    assert ss.page(1) == {(0, 0): 1, (1, 0): 1}
    assert ss.d_r(1, 0, 0).to_dense() == [[1]]
    assert ss.page(2) == {} and ss.page(INF) == {}
    assert ss.converges() and not ss.recomputation_failures()


def test_filtration_validation():
    F = QQ
    with pytest.raises(ValueError):
        FilteredComplex(F, {0: 2}, {}, {0: [1, 0]}, 0)
    C = FilteredComplex(F, {0: 1, 1: 1}, {0: SparseMatrix.from_dense(F, [[1]])}, {0: [1], 1: [0]}, 1)
    with pytest.raises(ValueError):
        SpectralSequence(C)
    with pytest.raises(WindowError):
        FilteredComplex(F, {0: 1, 1: 1}, {}, {0: [0], 1: [0]}, 1)


@st.composite
def filtered_two_term(draw):
    F = draw(st.sampled_from([F2, F3, QQ]))
    n0, n1 = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    f0 = sorted(draw(st.lists(st.integers(0, 3), min_size=n0, max_size=n0)))
    f1 = sorted(draw(st.lists(st.integers(0, 3), min_size=n1, max_size=n1)))
    rows = [[draw(st.integers(0, 2)) if f1[r] >= f0[c] else 0 for c in range(n0)] for r in range(n1)]
    d = SparseMatrix.from_dense(F, rows)
    return FilteredComplex(F, {0: n0, 1: n1}, {0: d}, {0: f0, 1: f1}, 1)


@given(filtered_two_term())
def test_random_filtered_complexes(C):
    ss = SpectralSequence(C, r_max=5)
    assert not ss.recomputation_failures(4)
    assert ss.converges()
    # E_0 is the associated graded
    assert sum(ss.page(0).values()) == C.dim(0) + C.dim(1)


def test_beta_of_simplex_is_contractible():
    b = normalized_cochains_bi(beta(standard_simplex(2), 3), F2, 3)
    assert b.violation() is None
    ss = first_filtration_ss(b, 2)
    assert ss.page(INF) == {(0, 0): 1}


@pytest.mark.parametrize("F", [F2, QQ], ids=str)
def test_product_bundle_degenerates(F):
    fib = product_fibration(boundary_simplex(3), circle_1())
    P = serre_pipeline(fib.f, F, 3)
    assert all(P.checks(3).values())
    assert P.ss.page(2) == {(0, 0): 1, (0, 1): 1, (2, 0): 1, (2, 1): 1}
    assert P.ss.degenerates_at(2)


def test_serre_bisimplicial_identities():
    fib = product_fibration(standard_simplex(1), circle_1())
    S = serre_bisimplicial(fib.f, 3)
    assert S.identity_violation() is None


@pytest.fixture(scope="module")
def hopf():
    e = resolve_entry("hopf")
    return e, e.load()


@pytest.mark.parametrize("F", [F2, QQ], ids=str)
def test_hopf_pages(hopf, F):
    e, fib = hopf
    P = serre_pipeline(fib.f, F, e.window)
    assert all(P.checks(3).values())
    assert P.ss.page(2) == {(0, 0): 1, (0, 1): 1, (2, 0): 1, (2, 1): 1}
    d2 = P.ss.d_r(2, 0, 1)
    assert d2.nrows == d2.ncols == 1 and d2.to_dense()[0][0] != 0
    assert P.ss.page(INF) == {(0, 0): 1, (2, 1): 1}
    assert {n: a for n, (a, _) in P.ss.convergence().items()} == {0: 1, 1: 0, 2: 0, 3: 1, 4: 0}
    (t,) = P.transgression(1)
    assert any(t.fiber_class) and t.preimages


def test_hopf_total_space_is_s3(hopf):
    e, fib = hopf
    N = NormalizedCochains(fib.f.source, F2)
    assert betti_numbers(N.complex, 3) == [1, 0, 0, 1]


def test_window_errors(hopf):
    e, fib = hopf
    P = serre_pipeline(fib.f, F2, 2)
    with pytest.raises(WindowError):
        P.ss.d_r(2, 0, 2)
    with pytest.raises(WindowError):
        P.transgression(2)


def test_universal_bundle_local_system():
    e = resolve_entry("w-z2")
    P = serre_pipeline(e.load().f, F2, 4)
    c = P.checks(3, simple=False)
    assert all(c.values())
    # the fibre has two points but the local system is twisted: E_2 is a point
    assert P.fiber_basis(0).dim == 2
    assert P.ss.page(2) == {(0, 0): 1}


def test_local_system_functorial(hopf):
    e, fib = hopf
    P = serre_pipeline(fib.f, F2, 3)
    for s in range(2):
        assert P.local.functoriality_violation(s) is None
