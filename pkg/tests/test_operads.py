import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.linalg import Field, betti_numbers
from artifact.operads import (BarResolutionOperad, ComOperad, Generators, IdentityOperad, acyclicity_report,
                              all_perms, bar_resolution_operad, block_relabel, com_operad, free_algebra,
                              koszul_sign, map_generators, operad_axiom_check, perm_inv, perm_mul, perm_sign,
                              substitute)

F2, F3, QQ = Field(2), Field(3), Field(0)


@st.composite
def perms(draw, n=None):
    n = draw(st.integers(1, 5)) if n is None else n
    return tuple(draw(st.permutations(range(n))))


@given(st.data())
def test_permutation_group_laws(data):
    n = data.draw(st.integers(1, 5))
    a, b, c = (data.draw(perms(n)) for _ in range(3))
    e = tuple(range(n))
    assert perm_mul(a, perm_mul(b, c)) == perm_mul(perm_mul(a, b), c)
    assert perm_mul(a, perm_inv(a)) == e
    assert perm_sign(perm_mul(a, b)) == perm_sign(a) * perm_sign(b)


@given(st.data())
def test_koszul_sign_even_degrees(data):
    n = data.draw(st.integers(1, 5))
    pi = data.draw(perms(n))
    assert koszul_sign([2] * n, pi) == 1
    assert koszul_sign([1] * n, pi) == perm_sign(pi)


def test_substitute_blocks():
    # the word (1 0) reads block 1 (shifted past block 0) first
    assert substitute((1, 0), [(0, 1), (0,)]) == (2, 0, 1)
    assert substitute((0, 1), [(0,), (0,)]) == (0, 1)
    assert len(block_relabel((1, 0), [2, 1])) == 3


@pytest.mark.parametrize("O", [com_operad(QQ, 4), com_operad(F2, 4), com_operad(F3, 4)], ids=str)
def test_com_axioms(O):
    rep = operad_axiom_check(O)
    assert rep.ok, rep.failure
    assert rep.checked["associativity"] > 0


@pytest.mark.parametrize("F", [F2, F3, QQ], ids=str)
def test_bar_resolution_axioms_depth1(F):
    rep = operad_axiom_check(bar_resolution_operad(F, 3, 1))
    assert rep.ok, rep.failure
    assert rep.checked["d-gamma"] > 0 and rep.checked["equivariance"] > 0


@pytest.mark.parametrize("F", [F2, QQ], ids=str)
def test_bar_resolution_is_acyclic(F):
    O = bar_resolution_operad(F, 3, 2)
    for n in (1, 2, 3):
        assert acyclicity_report(O, n) == {0: 1, 1: 0}


def test_bar_resolution_dims():
    O = bar_resolution_operad(F2, 3, 2)
    assert [len(O.basis(3, k)) for k in range(3)] == [6, 30, 150]
    assert O.eps(O.section(3)) == 1
    with pytest.raises(ValueError):
        O.basis(4, 0)


class _BadCom(ComOperad):
    def gamma(self, x, ys):
        return {k: 2 * v for k, v in super().gamma(x, ys).items()}


class _BadBar(BarResolutionOperad):
    def gamma(self, x, ys):
        out = super().gamma(x, ys)
        if len(x) == 2 and len(ys) == 2:
            return {k: self.F(-v) for k, v in out.items()}
        return out


def test_corrupted_gamma_detected():
    rep = operad_axiom_check(_BadCom(QQ, 3))
    assert not rep.ok and rep.failure[0] == "left unit"
    rep = operad_axiom_check(_BadBar(QQ, 3, 1))
    assert not rep.ok


def test_identity_operad_free_algebra():
    # I(M) = R (+) M
    M = Generators(["a", "b"], {"a": 1, "b": 2})
    A = free_algebra(IdentityOperad(QQ), M, 3, (-2, 5))
    flat = sorted(e for bs in A.basis.values() for e in bs)
    assert flat == [(("id", 0), ()), (("id", 1), ("a",)), (("id", 1), ("b",))]


def test_com_free_algebra_on_odd_generator():
    M = Generators(["x"], {"x": 1})
    A = free_algebra(com_operad(F2, 3), M, 3, (0, 3))
    assert {k: len(v) for k, v in A.basis.items()} == {0: 1, 1: 1, 2: 1, 3: 1}
    # over Q an odd generator squares to zero
    B = free_algebra(com_operad(QQ, 3), M, 3, (0, 3))
    assert {k: len(v) for k, v in B.basis.items()} == {0: 1, 1: 1}


def test_com_free_algebra_polynomial_counts():
    # Sym on generators of degree 2 and 4: monomials e^i f^j of weight <= 3
    M = Generators(["e", "f"], {"e": 2, "f": 4})
    A = free_algebra(com_operad(QQ, 3), M, 3, (0, 12))
    assert {k: len(v) for k, v in sorted(A.basis.items())} == {0: 1, 2: 1, 4: 2, 6: 2, 8: 2, 10: 1, 12: 1}


@pytest.mark.parametrize("O", [com_operad(QQ, 3), bar_resolution_operad(F2, 3, 1), bar_resolution_operad(QQ, 3, 1)],
                         ids=["Com", "RB-F2", "RB-Q"])
def test_free_algebra_d_squared_and_unit(O):
    M = Generators(["a", "b", "c"], {"a": 1, "b": 2, "c": 3}, {"b": {"c": 1}})
    A = free_algebra(O, M, 3, (-1, 6))
    assert A.d_squared_violations() == []
    one, mu = A.unit(), O.section(2)
    for bs in A.basis.values():
        for e in bs:
            assert A.theta(mu, [one, {e: A.F.one}]) == {e: A.F.one}


def test_free_com_algebra_cohomology():
    # d b = c with |b| = 2, |c| = 3 kills everything but the unit and a
    M = Generators(["a", "b", "c"], {"a": 1, "b": 2, "c": 3}, {"b": {"c": 1}})
    A = free_algebra(com_operad(QQ, 3), M, 3, (0, 5))
    assert betti_numbers(A.complex(), 4)[:4] == [1, 1, 0, 0]


def test_map_generators_is_multiplicative():
    M = Generators(["x", "y"], {"x": 2, "y": 2})
    A = free_algebra(com_operad(QQ, 3), M, 2, (0, 4))
    img = map_generators(A, A, {"x": {"y": 1}, "y": {"x": 1}}, (("com", 2), ("x", "x")))
    assert img == A.element(("com", 2), ("y", "y"))


def test_perm_enumeration():
    assert len(all_perms(4)) == 24
