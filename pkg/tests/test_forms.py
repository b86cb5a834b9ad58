from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.forms import (FormError, FormSpace, LocalForms, Presheaf, assoc_level, closed_preimage,
                            constant_presheaf, contract_model, extend_form, lemma_acyclicity, omega_level,
                            path_object, phi_chain_map_violation, phi_comparison, radial_homotopy_violation,
                            simplicially_homotopic, volume_form)
from artifact.gca import GCA
from artifact.linalg import Field, SparseMatrix
from artifact.simplicial import NormalizedCochains, boundary_simplex, circle_1, rp2, standard_simplex

QQ, F3, F5 = Field(0), Field(3), Field(5)


def test_interval_phi():
    # on Delta[1]: Phi(t) is 0 at vertex 0 and 1 at vertex 1, Phi(dt) is 1 on the edge
    X = standard_simplex(1)
    S, N = FormSpace(X), NormalizedCochains(X, QQ)
    L0, L1 = omega_level(0), omega_level(1)
    t = {(0,): {}, (1,): L0.A.one(), (0, 1): L1.x(1)}
    assert S.violation(t) is None
    assert S.phi(t, 0, N) == {1: 1}
    assert S.phi(S.d(t), 1, N) == {0: 1}


def test_units_agree():
    # the unit on a point and on an interval are both the constant 1
    assert omega_level(0).integrate(omega_level(0).A.one()) == 1
    L1 = omega_level(1)
    assert L1.face(0)(L1.A.one()) == omega_level(0).A.one()


def test_interval_faces():
    # face j sets x_j = 0
    L = omega_level(1)
    one = omega_level(0).A.one()
    assert L.face(0)(L.x(0)) == {} and L.face(1)(L.x(0)) == one
    assert L.face(0)(L.x(1)) == one and L.face(1)(L.x(1)) == {}


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_simplicial_identities_on_levels(n):
    assert omega_level(n).identity_violation() is None


def test_capped_acyclicity_over_q():
    for n in range(4):
        assert lemma_acyclicity(n, 3) == {k: int(k == 0) for k in range(n + 1)}
    for n in range(3):
        assert radial_homotopy_violation(n, 3) is None


def test_capped_acyclicity_needs_small_cap_mod_p():
    assert lemma_acyclicity(2, 1, F3) == {0: 1, 1: 0, 2: 0}
    assert lemma_acyclicity(2, 3, F5) == {0: 1, 1: 0, 2: 0}
    # t^3 is closed but not exact in characteristic 3
    assert lemma_acyclicity(1, 3, F3)[0] > 1


def test_contract_model_first_step():
    lam = omega_level(0).A.const(Fraction(3, 2))
    theta = contract_model(lam, 1)
    L = omega_level(1)
    assert L.face(0)(theta) == lam
    assert L.face(1)(theta) == {}


@given(st.integers(2, 3), st.data())
def test_contract_model_top_forms(s, data):
    src = omega_level(s - 1)
    k = s - 1
    basis = src.basis(k, 2)
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(basis), max_size=len(basis)))
    omega = src.A.clean(dict(zip(basis, coeffs)))
    theta = contract_model(omega, s)
    tgt = omega_level(s)
    assert tgt.face(0)(theta) == omega
    for i in range(1, s + 1):
        assert tgt.face(i)(theta) == {}


def test_contract_model_rejects_nonzero_faces():
    with pytest.raises(FormError):
        contract_model(omega_level(1).x(1), 2)


@given(st.integers(1, 3), st.data())
def test_stokes(n, data):
    L = omega_level(n)
    basis = L.basis(n - 1, 3)
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(basis), max_size=len(basis)))
    w = L.A.clean(dict(zip(basis, coeffs)))
    lhs = L.integrate(L.A.d(w))
    rhs = sum((-1) ** i * omega_level(n - 1).integrate(L.face(i)(w)) for i in range(n + 1))
    assert lhs == rhs


def test_volume_form_integrates_to_one():
    for n in range(4):
        assert omega_level(n).integrate(volume_form(n)) == 1


def test_form_space_dimensions():
    S = FormSpace(standard_simplex(2))
    L = omega_level(2)
    for k in range(3):
        assert S.dim(k, 2) == len(L.basis(k, 2))
    # functions on the one-vertex circle: p(t) with p(0) = p(1)
    C = FormSpace(circle_1())
    for D in range(1, 5):
        assert C.dim(0, D) == D


@pytest.mark.parametrize("X", [circle_1(), standard_simplex(2), boundary_simplex(3), rp2()], ids=lambda X: X.name)
def test_phi_chain_map(X):
    S, N = FormSpace(X), NormalizedCochains(X, QQ)
    for k in range(X.dim):
        assert phi_chain_map_violation(S, k, 2, N) is None


@pytest.mark.parametrize("X", [circle_1(), boundary_simplex(2), rp2()], ids=lambda X: X.name)
def test_phi_comparison_small(X):
    rep = phi_comparison(X, D=2)
    assert rep.ok, rep.degrees


def test_closed_preimage_on_circle():
    X = circle_1()
    S, N = FormSpace(X), NormalizedCochains(X, QQ)
    w = closed_preimage(S, {0: 1}, 1, N)
    assert S.violation(w) is None and not S.d(w)
    assert S.phi(w, 1, N) == {0: 1}


def test_extend_form_from_vertices():
    X = standard_simplex(2)
    S = FormSpace(X)
    one = omega_level(0).A.one()
    given_ = {(0,): {}, (1,): one, (2,): omega_level(0).A.const(2)}
    w = extend_form(S, given_, [(0,), (1,), (2,)], 0, 1)
    assert S.violation(w) is None
    N = NormalizedCochains(X, QQ)
    assert S.phi(w, 0, N) == {1: 1, 2: 2}


def test_non_ez_rejected():
    with pytest.raises(FormError):
        FormSpace(object())
    with pytest.raises(FormError):
        omega_level(1, QQ, "rb")


def test_associative_forms():
    for n in range(3):
        L = assoc_level(n)
        assert L.identity_violation() is None
        for k in (0, 1):
            for w in L.basis(k, 2):
                assert not L.d(L.d({w: 1}))
    L = assoc_level(1)
    t, dt = L.x(1), L.dx(1)
    assert L.mul(t, dt) != L.mul(dt, t)
    assert L.d(L.mul(t, t)) == {**L.mul(dt, t), **L.mul(t, dt)}


def test_path_object_cohomology():
    S2 = GCA(QQ, ["e", "x"], [2, 3], {"x": "e^2"})
    PO = path_object(S2)
    assert [PO.capped_cohomology(k, 2) for k in range(5)] == [1, 0, 1, 0, 0]
    one = PO.P.one()
    assert PO.d0(one) == S2.one() and PO.d1(PO.P.gen("t")) == S2.one()


def test_homotopy_search():
    S2 = GCA(QQ, ["e", "x"], [2, 3], {"x": "e^2"})
    ident = {"e": S2.gen("e"), "x": S2.gen("x")}
    assert simplicially_homotopic(S2, S2, ident, ident).found
    double = {"e": S2.scale(2, S2.gen("e")), "x": S2.scale(4, S2.gen("x"))}
    res = simplicially_homotopic(S2, S2, ident, double)
    assert not res.found and "[e]" in res.obstruction


def _sign_circle(F):
    X = circle_1()
    R = SparseMatrix.from_dense(F, [[-1]])
    return Presheaf(X, F, {"v": {0: 1}, "e": {0: 1}}, {"v": {}, "e": {}},
                    {"e": {0: {0: SparseMatrix.identity(F, 1)}, 1: {0: R}}})


def test_local_coefficients_on_circle():
    # trivial coefficients: H = (1, 1); sign monodromy with 2 invertible: H = (0, 0)
    for F, cap in ((QQ, 2), (F3, 1), (F5, 2)):
        L = LocalForms(constant_presheaf(circle_1(), F, {0: 1}), cap)
        assert [L.form_cohomology(r, 0) for r in (0, 1)] == [1, 1]
        T = LocalForms(_sign_circle(F), cap)
        assert T.P.violation() is None
        assert [T.form_cohomology(r, 0) for r in (0, 1)] == [0, 0]


def test_local_coefficients_cap_too_large_mod_p():
    # over F_3 with cap 2, t^2 dt is closed and not exact: spurious H^1
    T = LocalForms(_sign_circle(F3), 2)
    assert T.form_cohomology(1, 0) == 1


def test_presheaf_violation_detected():
    F = QQ
    X = circle_1()
    d = SparseMatrix.from_dense(F, [[1]])
    P = Presheaf(X, F, {"v": {0: 1, 1: 1}, "e": {0: 1, 1: 1}}, {"v": {0: d}, "e": {}},
                 {"e": {0: {0: SparseMatrix.identity(F, 1), 1: SparseMatrix.identity(F, 1)},
                        1: {0: SparseMatrix.identity(F, 1), 1: SparseMatrix.identity(F, 1)}}})
    assert P.violation() is not None
