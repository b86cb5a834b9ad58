import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.acyclic import (LiftError, NaturalOperation, acyclic_models_lift, cone_contraction,
                              cup_i_operation, homotopy_between, iterated_cup, lift_defect, mu_family,
                              sigma, tau)
from artifact.cochains import CochainAlgebra
from artifact.linalg import Field
from artifact.simplicial import NormalizedCochains, WBar, circle_1, cyclic_group, product, rp2, standard_simplex

F2 = Field(2)


@pytest.fixture(scope="module")
def mu2():
    return mu_family(2, 3, 4)


def test_mu_recursion_and_normalization(mu2):
    assert mu2.check() is None
    for i, m in enumerate(mu2.mu):
        assert m.degree == -i


def test_mu1_lifts_tau_mu0(mu2):
    assert lift_defect(mu2.mu[1], tau(mu2.mu[0])).is_zero()
    assert lift_defect(mu2.mu[2].scale(-1), sigma(mu2.mu[1])).is_zero()


def test_cup0_is_mu0():
    assert iterated_cup(F2, 2, 4) == cup_i_operation(F2, 0, 4)


def test_cup1_is_another_lift(mu2):
    c1 = cup_i_operation(F2, 1, 4)
    assert c1.naturality_violation() is None
    assert lift_defect(c1, tau(mu2.mu[0])).is_zero()
    # two lifts of the same cycle differ by a boundary
    assert homotopy_between(mu2.mu[1], c1) is not None


def test_lift_of_non_boundary_fails():
    with pytest.raises(LiftError):
        acyclic_models_lift(iterated_cup(F2, 2, 3))


def test_corrupted_operation_not_normalized():
    op = iterated_cup(F2, 2, 3)
    bad = op + NaturalOperation(F2, 2, 0, 3, {2: {((0, 2), (0, 1)): 1}})
    assert bad.naturality_violation() is not None


def test_odd_prime_family():
    fam = mu_family(3, 2, 3)
    assert fam.check() is None
    with pytest.raises(ValueError):
        fam.sq(CochainAlgebra(rp2(), Field(3), 2), 1, 1, [])


SPACES = [rp2(), product(circle_1(), circle_1()), product(rp2(), circle_1())]


@pytest.mark.parametrize("X", SPACES, ids=lambda X: X.name)
def test_sq_via_mu_matches_cup_i(mu2, X):
    A = CochainAlgebra(X, F2, min(X.dim, 4))
    for q in range(1, A.top + 1):
        for s in range(0, q + 1):
            if q + s > A.top:
                continue
            for j in range(A.H(q).dim):
                e = [int(i == j) for i in range(A.H(q).dim)]
                assert mu2.sq(A, s, q, e) == A.sq(s, q, e)


def test_sq_via_mu_on_rp_infinity(mu2):
    A = CochainAlgebra(WBar(cyclic_group(2)), F2, 4)
    x2 = A.cup_classes(1, [1], 1, [1])
    assert mu2.sq(A, 1, 1, [1]) == [1]
    assert mu2.sq(A, 2, 2, x2) == [1]
    assert mu2.sq(A, 1, 2, x2) == [0]


@given(st.integers(1, 3), st.data())
def test_cone_contraction(q, data):
    F = Field(3)
    n = 3
    N = NormalizedCochains(standard_simplex(n), F)
    index = {k: {x[1]: i for i, x in enumerate(N.basis[k])} for k in N.basis}
    c = {i: data.draw(st.integers(0, 2)) for i in range(len(N.basis[q]))}
    c = {i: v for i, v in c.items() if v}
    d = N.complex.diff
    hc = cone_contraction(F, n, q, c, index)
    lhs = d(q - 1).apply(hc)
    dc = d(q).apply(c) if q < n else {}
    hdc = cone_contraction(F, n, q + 1, dc, index) if q < n else {}
    for k, v in hdc.items():
        lhs[k] = (lhs.get(k, 0) + v) % 3
    assert {k: v for k, v in lhs.items() if v} == c
