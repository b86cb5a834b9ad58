import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.gca import GCA, GCAError, tensor
from artifact.linalg import Field

QQ = Field(0)
A = GCA(QQ, ["a", "b", "c", "e"], [1, 1, 2, 3], {"e": "c^2", "c": "0"})
B = GCA(Field(3), ["a", "b", "c", "e"], [1, 1, 2, 3], {"e": "c^2"})



@st.composite
def homogeneous(draw, G, max_degree=5):
    k = draw(st.integers(0, max_degree))
    basis = G.basis(k)
    coeffs = draw(st.lists(st.integers(-2, 2), min_size=len(basis), max_size=len(basis)))
    return k, G.clean({m: c for m, c in zip(basis, coeffs)})


@pytest.mark.parametrize("G", [A, B], ids=["Q", "F3"])
@given(data=st.data())
def test_graded_commutative_and_associative(G, data):
    (p, x), (q, y), (_, z) = (data.draw(homogeneous(G)) for _ in range(3))
    sign = -1 if (p * q) % 2 else 1
    assert G.mul(x, y) == G.scale(sign, G.mul(y, x))
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))


@pytest.mark.parametrize("G", [A, B], ids=["Q", "F3"])
@given(data=st.data())
def test_leibniz_and_d_squared(G, data):
    (p, x), (q, y) = (data.draw(homogeneous(G)) for _ in range(2))
    lhs = G.d(G.mul(x, y))
    rhs = G.add(G.mul(G.d(x), y), G.mul(x, G.d(y)), -1 if p % 2 else 1)
    assert lhs == rhs
    assert G.d(G.d(x)) == {}


def test_odd_squares_vanish():
    assert A.mul(A.gen("a"), A.gen("a")) == {}
    assert A.mul(A.gen("a"), A.gen("b")) == A.scale(-1, A.mul(A.gen("b"), A.gen("a")))


def test_parse_format_round_trip():
    x = A.parse("2*a*b - 1/2*c^2 + 1")
    assert A.parse(A.format(x).replace(" + -", " - ")) == x
    with pytest.raises(GCAError):
        A.parse("q")
    with pytest.raises(GCAError):
        GCA(QQ, ["x", "x"], [1, 1])
    with pytest.raises(GCAError):
        GCA(QQ, ["x", "y"], [1, 2], {"x": "x"})


def test_sphere_models():
    # S^2: e in degree 2, x in degree 3 with dx = e^2
    S2 = GCA(QQ, ["e", "x"], [2, 3], {"x": "e^2"})
    assert S2.cohomology_dims(0, 6) == {0: 1, 1: 0, 2: 1, 3: 0, 4: 0, 5: 0, 6: 0}
    # S^3 as the total space of the Hopf model
    S3 = GCA(QQ, ["e", "x", "v"], [2, 3, 1], {"x": "e^2", "v": "e"})
    assert S3.cohomology_dims(0, 5) == {0: 1, 1: 0, 2: 0, 3: 1, 4: 0, 5: 0}


def test_tensor_product():
    S2 = GCA(QQ, ["e", "x"], [2, 3], {"x": "e^2"})
    S1 = GCA(QQ, ["v"], [1])
    T, ia, ib = tensor(S2, S1)
    assert T.cohomology_dims(0, 4) == {0: 1, 1: 1, 2: 1, 3: 1, 4: 0}
    assert ia(S2.gen("x")) == T.gen("x")


def test_hom_is_multiplicative():
    S2 = GCA(QQ, ["e", "x"], [2, 3], {"x": "e^2"})
    f = A.hom(S2, {"c": S2.gen("e"), "e": S2.gen("x")})
    assert f(A.parse("c^2")) == S2.parse("e^2")
    assert f(A.parse("a*c")) == {}


def test_degree_zero_needs_cap():
    G = GCA(QQ, ["t", "dt"], [0, 1], {"t": "dt"})
    with pytest.raises(GCAError):
        G.basis(1)
    assert len(G.basis(1, poly_cap=2)) == 3
