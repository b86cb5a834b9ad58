"""Finite simplicial sets and the normalized cochain functor.

Two presentations coexist:

* ``EZSet``: nondegenerate simplices with stored faces.  A simplex is a pair
  ``(eta, y)`` where ``y`` is a nondegenerate label of dimension m and ``eta``
  is a monotone surjection [n] -> [m] written as a tuple (Eilenberg-Zilber
  normal form).  Nondegenerate simplices have ``eta = (0, 1, ..., m)``.
* formula sets (simplicial groups, W-bar, twisted products) whose simplices are
  explicit tuples and whose operators are computed by formula.

``Table`` freezes any of them into integer face/degeneracy tables up to a
dimension, which is what the heavy enumerations run on.
"""
from __future__ import annotations

from itertools import combinations, product as iproduct
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .linalg import CochainComplex, Field, SparseMatrix


class SimplicialError(ValueError):
    pass


class SimplicialSet:
    """Interface: subclasses provide simplices, face and degen."""

    name = "X"
    dim: Optional[int] = None  # top nondegenerate dimension, None if unbounded

    def simplices(self, n: int) -> Sequence:
        raise NotImplementedError

    def face(self, n: int, x, i: int):
        raise NotImplementedError

    def degen(self, n: int, x, i: int):
        raise NotImplementedError

    def is_degenerate(self, n: int, x) -> bool:
        for i in range(n):
            if self.degen(n - 1, self.face(n, x, i), i) == x:
                return True
        return False

    def nondegenerate(self, n: int) -> List:
        return [x for x in self.simplices(n) if not self.is_degenerate(n, x)]

    def degenerate_by(self, m: int, z, eta: Tuple[int, ...]):
        """Apply the degeneracy operator encoded by the surjection eta: [n] -> [m]."""
        cur, d = z, m
        for k in range(len(eta) - 1):
            if eta[k] == eta[k + 1]:
                cur = self.degen(d, cur, k)
                d += 1
        return cur

    def restrict(self, n: int, x, verts: Sequence[int]):
        """The face of x spanned by the given increasing vertex indices."""
        keep = set(verts)
        cur, d = x, n
        for v in range(n, -1, -1):
            if v not in keep:
                cur = self.face(d, cur, v)
                d -= 1
        return cur

    def vertices_of(self, n: int, x) -> Tuple:
        return tuple(self.restrict(n, x, (k,)) for k in range(n + 1))


# ---------------------------------------------------------------- EZ sets

def _ident(m: int) -> Tuple[int, ...]:
    return tuple(range(m + 1))


def surjections(n: int, m: int) -> List[Tuple[int, ...]]:
    """Monotone surjections [n] -> [m] as value tuples."""
    out = []
    for steps in combinations(range(n), m):
        s = set(steps)
        eta, v = [0], 0
        for k in range(n):
            if k in s:
                v += 1
            eta.append(v)
        out.append(tuple(eta))
    return out


def word_to_eta(word: Sequence[int], m: int) -> Tuple[int, ...]:
    """[j_1, ..., j_k] means s_{j_1} ... s_{j_k} (rightmost applied first)."""
    eta = _ident(m)
    for j in reversed(list(word)):
        if not 0 <= j < len(eta):
            raise SimplicialError(f"degeneracy s_{j} out of range in dimension {len(eta) - 1}")
        eta = eta[: j + 1] + eta[j:]
    return eta


def eta_to_word(eta: Sequence[int]) -> List[int]:
    ks = [k for k in range(len(eta) - 1) if eta[k] == eta[k + 1]]
    return list(reversed(ks))


class EZSet(SimplicialSet):
    """Finite simplicial set presented by nondegenerate simplices."""

    def __init__(self, nd: Dict[int, Sequence[Hashable]], faces: Dict[Hashable, Sequence], name: str = "X",
                 validate: bool = True):
        self.name = name
        self.nd: Dict[int, List] = {int(k): list(v) for k, v in nd.items() if len(v)}
        self.dim = max(self.nd, default=-1)
        self.dim_of: Dict[Hashable, int] = {}
        for m, labels in self.nd.items():
            for y in labels:
                if y in self.dim_of:
                    raise SimplicialError(f"duplicate label {y!r}")
                self.dim_of[y] = m
        self.faces: Dict[Hashable, Tuple] = {}
        for y, m in self.dim_of.items():
            if m == 0:
                continue
            fs = faces.get(y)
            if fs is None or len(fs) != m + 1:
                raise SimplicialError(f"simplex {y!r} needs {m + 1} faces")
            canon = []
            for i, (eta, z) in enumerate(fs):
                if z not in self.dim_of:
                    raise SimplicialError(f"face {i} of {y!r}: unknown simplex {z!r}")
                eta = tuple(eta)
                k = self.dim_of[z]
                if len(eta) != m or eta[0] != 0 or eta[-1] != k or any(
                        b - a not in (0, 1) for a, b in zip(eta, eta[1:])):
                    raise SimplicialError(f"face {i} of {y!r}: bad degeneracy {eta}")
                canon.append((eta, z))
            self.faces[y] = tuple(canon)
        if validate:
            bad = self.identity_violation()
            if bad:
                raise SimplicialError(bad)

    def labels(self, n: int) -> List:
        return list(self.nd.get(n, []))

    def nd_simplex(self, y) -> Tuple:
        return (_ident(self.dim_of[y]), y)

    def simplices(self, n: int) -> List:
        out = []
        for m in range(0, min(n, self.dim) + 1):
            labs = self.nd.get(m, [])
            if not labs:
                continue
            for eta in surjections(n, m):
                out.extend((eta, y) for y in labs)
        return out

    def nondegenerate(self, n: int) -> List:
        e = _ident(n)
        return [(e, y) for y in self.nd.get(n, [])]

    def is_degenerate(self, n: int, x) -> bool:
        return len(x[0]) != self.dim_of[x[1]] + 1

    def face(self, n: int, x, i: int):
        eta, y = x
        if n == 0:
            raise SimplicialError("vertices have no faces")
        v = eta[i]
        e2 = eta[:i] + eta[i + 1:]
        lost = (i == 0 or eta[i - 1] != v) and (i == n or eta[i + 1] != v)
        if not lost:
            return (e2, y)
        e3 = tuple(a if a < v else a - 1 for a in e2)
        theta, z = self.faces[y][v]
        return (tuple(theta[a] for a in e3), z)

    def degen(self, n: int, x, i: int):
        eta, y = x
        return (eta[: i + 1] + eta[i:], y)

    def identity_violation(self) -> Optional[str]:
        for y, m in self.dim_of.items():
            if m < 2:
                continue
            x = self.nd_simplex(y)
            for j in range(m + 1):
                for i in range(j):
                    a = self.face(m - 1, self.face(m, x, j), i)
                    b = self.face(m - 1, self.face(m, x, i), j - 1)
                    if a != b:
                        return f"d_{i} d_{j} != d_{j - 1} d_{i} on {y!r}"
        return None

    def count(self) -> List[int]:
        return [len(self.nd.get(n, [])) for n in range(self.dim + 1)]

    def relabel(self, fn: Callable) -> "EZSet":
        nd = {m: [fn(y) for y in ys] for m, ys in self.nd.items()}
        faces = {fn(y): [(eta, fn(z)) for eta, z in fs] for y, fs in self.faces.items()}
        return EZSet(nd, faces, self.name, validate=False)


def standard_simplex(n: int) -> EZSet:
    if n < 0:
        raise SimplicialError("n < 0")
    return _simplex_skeleton(n, n, f"Delta[{n}]")


def boundary_simplex(n: int) -> EZSet:
    if n < 1:
        raise SimplicialError("boundary needs n >= 1")
    return _simplex_skeleton(n, n - 1, f"dDelta[{n}]")


def _simplex_skeleton(n: int, top: int, name: str) -> EZSet:
    nd = {k: list(combinations(range(n + 1), k + 1)) for k in range(top + 1)}
    faces = {}
    for k in range(1, top + 1):
        for s in nd[k]:
            faces[s] = [(_ident(k - 1), s[:i] + s[i + 1:]) for i in range(k + 1)]
    return EZSet(nd, faces, name, validate=False)


def from_facets(facets: Iterable[Sequence], name: str = "K") -> EZSet:
    """Ordered simplicial complex (vertices sorted inside each facet)."""
    simp = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            simp.update(combinations(f, k))
    nd: Dict[int, list] = {}
    for s in sorted(simp, key=lambda s: (len(s), s)):
        nd.setdefault(len(s) - 1, []).append(s)
    faces = {s: [(_ident(len(s) - 2), s[:i] + s[i + 1:]) for i in range(len(s))]
             for s in simp if len(s) > 1}
    return EZSet(nd, faces, name, validate=False)


def point() -> EZSet:
    return EZSet({0: ["*"]}, {}, "point")


def rp2() -> EZSet:
    """The 6-vertex triangulation of the projective plane."""
    facets = ["124", "126", "135", "136", "145", "234", "235", "256", "346", "456"]
    return from_facets([tuple(int(c) for c in f) for f in facets], "RP2")


def circle_1() -> EZSet:
    """One vertex, one edge."""
    return EZSet({0: ["v"], 1: ["e"]}, {"e": [((0,), "v"), ((0,), "v")]}, "S1")


def cycle(k: int) -> EZSet:
    """Circle with k >= 1 vertices and edges i -> i+1 (mod k)."""
    if k == 1:
        return circle_1()
    nd = {0: [f"c{i}" for i in range(k)], 1: [f"c{i}c{(i + 1) % k}" for i in range(k)]}
    faces = {f"c{i}c{(i + 1) % k}": [((0,), f"c{(i + 1) % k}"), ((0,), f"c{i}")] for i in range(k)}
    return EZSet(nd, faces, f"C{k}")


# ---------------------------------------------------------------- maps

class SimplicialMap:
    """f: X -> Y given by images of nondegenerate simplices (EZ source) or by a function."""

    def __init__(self, source: SimplicialSet, target: SimplicialSet, images=None, fn=None, name="f"):
        self.source, self.target, self.name = source, target, name
        self.images = images
        self.fn = fn

    def __call__(self, n: int, x):
        if self.fn is not None:
            return self.fn(n, x)
        eta, y = x
        m = self.source.dim_of[y]
        return self.target.degenerate_by(m, self.images[y], eta)

    def check(self, top: int) -> Optional[str]:
        """First violation of compatibility with faces/degeneracies, if any."""
        X, Y = self.source, self.target
        for n in range(0, top + 1):
            for x in X.simplices(n):
                fx = self(n, x)
                for i in range(n + 1 if n else 0):
                    if self(n - 1, X.face(n, x, i)) != Y.face(n, fx, i):
                        return f"face {i} on {x!r}"
                for i in range(n + 1):
                    if self(n + 1, X.degen(n, x, i)) != Y.degen(n, fx, i):
                        return f"degeneracy {i} on {x!r}"
        return None

    def is_surjective(self, top: int) -> bool:
        for n in range(top + 1):
            img = {self(n, x) for x in self.source.simplices(n)}
            if any(y not in img for y in self.target.nondegenerate(n)):
                return False
        return True


def identity_map(X: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, fn=lambda n, x: x, name="id")


# ---------------------------------------------------------------- products

def _normalize_pair(a, b):
    """Canonical (eta, (a', b')) for a pair of EZ simplices of one dimension."""
    ea, la = a
    eb, lb = b
    n = len(ea) - 1
    c = [0]
    reps = [0]
    for k in range(n):
        if ea[k] == ea[k + 1] and eb[k] == eb[k + 1]:
            c.append(c[-1])
        else:
            c.append(c[-1] + 1)
            reps.append(k + 1)
    a2 = (tuple(ea[r] for r in reps), la)
    b2 = (tuple(eb[r] for r in reps), lb)
    return tuple(c), (a2, b2)


def product(X: EZSet, Y: EZSet, name: Optional[str] = None) -> EZSet:
    """Cartesian product; nondegenerate simplices are the shuffle cells."""
    nd: Dict[int, list] = {}
    faces = {}
    for n in range(0, X.dim + Y.dim + 1):
        labs = []
        xs, ys = X.simplices(n), Y.simplices(n)
        for a in xs:
            for b in ys:
                if any(a[0][k] == a[0][k + 1] and b[0][k] == b[0][k + 1] for k in range(n)):
                    continue
                labs.append((a, b))
                if n:
                    faces[(a, b)] = [_normalize_pair(X.face(n, a, i), Y.face(n, b, i)) for i in range(n + 1)]
        if labs:
            nd[n] = labs
    return EZSet(nd, faces, name or f"{X.name}x{Y.name}", validate=False)


def projections(P: EZSet, X: EZSet, Y: EZSet) -> Tuple[SimplicialMap, SimplicialMap]:
    p1 = SimplicialMap(P, X, images={lab: lab[0] for lab in P.dim_of})
    p2 = SimplicialMap(P, Y, images={lab: lab[1] for lab in P.dim_of})
    return p1, p2


def glue(Y: EZSet, sub: Iterable, C: EZSet, attach: Dict, name: str = "glued") -> Tuple[EZSet, Dict]:
    """Pushout of C <- A -> Y along the subcomplex A of Y (labels ``sub``).

    ``attach`` maps each nondegenerate label of A to a simplex of C.  Returns
    the glued set and the map from labels of Y to simplices of the result.
    """
    sub = set(sub)
    where: Dict = {}
    for y in Y.dim_of:
        if y in sub:
            eta, z = attach[y]
            where[y] = (eta, ("C", z))
        else:
            where[y] = (_ident(Y.dim_of[y]), ("Y", y))
    nd: Dict[int, list] = {}
    faces = {}
    for m, labs in C.nd.items():
        for z in labs:
            nd.setdefault(m, []).append(("C", z))
            if m:
                faces[("C", z)] = [(eta, ("C", w)) for eta, w in C.faces[z]]
    for m, labs in Y.nd.items():
        for y in labs:
            if y in sub:
                continue
            nd.setdefault(m, []).append(("Y", y))
            if m:
                fs = []
                for eta, w in Y.faces[y]:
                    th, t = where[w]
                    fs.append((tuple(th[a] for a in eta), t))
                faces[("Y", y)] = fs
    return EZSet(nd, faces, name), where


def collapse(Y: EZSet, sub: Iterable, name: str = "quotient") -> Tuple[EZSet, Dict]:
    """Y with the subcomplex ``sub`` collapsed to a point."""
    sub = set(sub)
    pt = EZSet({0: ["*"]}, {}, "pt")
    attach = {y: (tuple([0] * (Y.dim_of[y] + 1)), "*") for y in sub}
    return glue(Y, sub, pt, attach, name)


# ---------------------------------------------------------------- groups

class SimplicialGroup(SimplicialSet):
    def mul(self, n: int, a, b):
        raise NotImplementedError

    def inv(self, n: int, a):
        raise NotImplementedError

    def unit(self, n: int):
        raise NotImplementedError

    abelian = False


class ConstantGroup(SimplicialGroup):
    """A finite discrete group viewed as a constant simplicial group."""

    dim = 0

    def __init__(self, elements: Sequence, mul: Callable, unit, name="G", abelian=False):
        self.elements = list(elements)
        self._mul, self._unit = mul, unit
        self.name, self.abelian = name, abelian
        self._inv = {a: b for a in self.elements for b in self.elements if mul(a, b) == unit}

    def simplices(self, n):
        return self.elements

    def face(self, n, x, i):
        return x

    def degen(self, n, x, i):
        return x

    def is_degenerate(self, n, x):
        return n > 0

    def mul(self, n, a, b):
        return self._mul(a, b)

    def inv(self, n, a):
        return self._inv[a]

    def unit(self, n):
        return self._unit


def cyclic_group(k: int) -> ConstantGroup:
    return ConstantGroup(range(k), lambda a, b: (a + b) % k, 0, f"Z/{k}", abelian=True)


def symmetric_group3() -> ConstantGroup:
    from itertools import permutations
    els = list(permutations(range(3)))
    return ConstantGroup(els, lambda a, b: tuple(a[b[i]] for i in range(3)), (0, 1, 2), "S3")


class WBar(SimplicialGroup):
    """May's W-bar construction; a simplicial group when G is abelian.

    An n-simplex is (g_{n-1}, ..., g_0) with g_k in G_k, stored in that order.
    """

    def __init__(self, G: SimplicialGroup, name: Optional[str] = None):
        self.G = G
        self.name = name or f"Wbar({G.name})"
        self.abelian = G.abelian
        self._cache: Dict[int, list] = {}

    def simplices(self, n):
        if n not in self._cache:
            comps = [self.G.simplices(k) for k in range(n - 1, -1, -1)]
            self._cache[n] = [tuple(t) for t in iproduct(*comps)]
        return self._cache[n]

    def face(self, n, x, i):
        G = self.G
        if n == 0:
            raise SimplicialError("vertices have no faces")
        if i == 0:
            return x[1:]
        if i == n:
            return tuple(G.face(n - 1 - j, x[j], n - 1 - j) for j in range(n - 1))
        head = tuple(G.face(n - 1 - j, x[j], i - 1 - j) for j in range(i - 1))
        k = n - i  # x[i-1] = g_{n-i} in G_{n-i}
        mid = G.mul(k - 1, G.face(k, x[i - 1], 0), x[i])
        return head + (mid,) + x[i + 1:]

    def degen(self, n, x, i):
        G = self.G
        if i == 0:
            return (G.unit(n),) + x
        head = tuple(G.degen(n - 1 - j, x[j], i - 1 - j) for j in range(i))
        return head + (G.unit(n - i),) + x[i:]

    def mul(self, n, a, b):
        if not self.G.abelian:
            raise SimplicialError("W-bar of a nonabelian group is not a group")
        return tuple(self.G.mul(n - 1 - j, a[j], b[j]) for j in range(n))

    def inv(self, n, a):
        return tuple(self.G.inv(n - 1 - j, a[j]) for j in range(n))

    def unit(self, n):
        return tuple(self.G.unit(n - 1 - j) for j in range(n))


class TwistedProduct(SimplicialSet):
    """E = B x_tau G with d_0(b, g) = (d_0 b, d_0(g) * tau(b)); other operators componentwise."""

    def __init__(self, B: SimplicialSet, G: SimplicialGroup, tau: Callable, name: Optional[str] = None):
        self.B, self.G, self.tau = B, G, tau
        self.name = name or f"{B.name}x_t{G.name}"
        self.dim = None

    def simplices(self, n):
        return [(b, g) for b in self.B.simplices(n) for g in self.G.simplices(n)]

    def face(self, n, x, i):
        b, g = x
        if i == 0:
            return (self.B.face(n, b, 0), self.G.mul(n - 1, self.G.face(n, g, 0), self.tau(n, b)))
        return (self.B.face(n, b, i), self.G.face(n, g, i))

    def degen(self, n, x, i):
        b, g = x
        return (self.B.degen(n, b, i), self.G.degen(n, g, i))

    def projection(self) -> SimplicialMap:
        return SimplicialMap(self, self.B, fn=lambda n, x: x[0], name="proj")


def trivial_twisting(G: SimplicialGroup) -> Callable:
    return lambda n, b: G.unit(n - 1)


def universal_twisting(n: int, w):
    return w[0]


def classifying_spaces(G: SimplicialGroup, dim_cap: int):
    """(W G, W-bar G, projection) with W G realized as a twisted product."""
    if dim_cap < 1:
        raise SimplicialError("dim_cap < 1")
    Wb = WBar(G)
    W = TwistedProduct(Wb, G, universal_twisting, name=f"W({G.name})")
    W.dim_cap = dim_cap
    Wb.dim_cap = dim_cap
    return W, Wb, W.projection()


def twisting_violation(B: SimplicialSet, G: SimplicialGroup, tau: Callable, top: int) -> Optional[str]:
    """Check the twisting identities matching TwistedProduct's d_0 on all simplices."""
    for n in range(1, top + 1):
        for b in B.simplices(n):
            t = tau(n, b)
            if n >= 2:
                lhs = G.face(n - 1, t, 0)
                rhs = G.mul(n - 2, tau(n - 1, B.face(n, b, 1)), G.inv(n - 2, tau(n - 1, B.face(n, b, 0))))
                if lhs != rhs:
                    return f"d_0 tau != tau(d_1) tau(d_0)^-1 at {b!r}"
                for i in range(1, n):
                    if G.face(n - 1, t, i) != tau(n - 1, B.face(n, b, i + 1)):
                        return f"d_{i} tau != tau d_{i + 1} at {b!r}"
            if n >= 1 and tau(n + 1, B.degen(n, b, 0)) != G.unit(n):
                return f"tau s_0 != e at {b!r}"
            for i in range(0, n):
                if tau(n + 1, B.degen(n, b, i + 1)) != G.degen(n - 1, t, i):
                    return f"tau s_{i + 1} != s_{i} tau at {b!r}"
    for b in B.simplices(0):
        if tau(1, B.degen(0, b, 0)) != G.unit(0):
            return f"tau s_0 != e at {b!r}"
    return None


# ---------------------------------------------------------------- tables

class Table:
    """Integer face/degeneracy tables of X in dimensions 0..top."""

    def __init__(self, X: SimplicialSet, top: int):
        self.X, self.top = X, top
        self.simp: List[list] = []
        self.index: List[dict] = []
        for n in range(top + 1):
            s = list(X.simplices(n))
            self.simp.append(s)
            self.index.append({x: k for k, x in enumerate(s)})
        self.face: List[list] = [[]]
        for n in range(1, top + 1):
            idx = self.index[n - 1]
            self.face.append([tuple(idx[X.face(n, x, i)] for i in range(n + 1)) for x in self.simp[n]])
        self.degen: List[list] = []
        for n in range(top):
            idx = self.index[n + 1]
            self.degen.append([tuple(idx[X.degen(n, x, i)] for i in range(n + 1)) for x in self.simp[n]])
        self.nd: List[list] = [[True] * len(self.simp[0])]
        for n in range(1, top + 1):
            fc, dg = self.face[n], self.degen[n - 1]
            self.nd.append([all(dg[fc[k][i]][i] != k for i in range(n)) for k in range(len(self.simp[n]))])

    def size(self, n: int) -> int:
        return len(self.simp[n])

    def nondegenerate(self, n: int) -> List[int]:
        return [k for k, f in enumerate(self.nd[n]) if f]

    def degenerate_by(self, m: int, k: int, eta: Sequence[int]) -> int:
        d = m
        for j in range(len(eta) - 1):
            if eta[j] == eta[j + 1]:
                k = self.degen[d][k][j]
                d += 1
        return k

    def restrict(self, n: int, k: int, verts: Sequence[int]) -> int:
        keep = set(verts)
        d = n
        for v in range(n, -1, -1):
            if v not in keep:
                k = self.face[d][k][v]
                d -= 1
        return k

    def identity_violation(self) -> Optional[str]:
        F, S = self.face, self.degen
        for n in range(self.top + 1):
            for k in range(len(self.simp[n])):
                if n >= 2:
                    for j in range(n + 1):
                        for i in range(j):
                            if F[n - 1][F[n][k][j]][i] != F[n - 1][F[n][k][i]][j - 1]:
                                return f"d_{i}d_{j} at dim {n} simplex {self.simp[n][k]!r}"
                if n + 1 <= self.top:
                    for j in range(n + 1):
                        s = S[n][k][j]
                        for i in range(n + 2):
                            got = F[n + 1][s][i]
                            if i < j:
                                want = S[n - 1][F[n][k][i]][j - 1]
                            elif i in (j, j + 1):
                                want = k
                            else:
                                want = S[n - 1][F[n][k][i - 1]][j]
                            if got != want:
                                return f"d_{i}s_{j} at dim {n} simplex {self.simp[n][k]!r}"
                if n + 2 <= self.top:
                    for j in range(n + 1):
                        for i in range(j + 1):
                            if S[n + 1][S[n][k][j]][i] != S[n + 1][S[n][k][i]][j + 1]:
                                return f"s_{i}s_{j} at dim {n} simplex {self.simp[n][k]!r}"
        return None


def check_identities(X: SimplicialSet, top: int) -> Optional[str]:
    """Exhaustive check of all simplicial identities through dimension top."""
    return Table(X, top).identity_violation()


# ---------------------------------------------------------------- cochains

class NormalizedCochains:
    """Normalized cochains of X over F with the chosen nondegenerate bases."""

    def __init__(self, X: SimplicialSet, F: Field, top: Optional[int] = None):
        self.X, self.F = X, F
        if top is None:
            if X.dim is None:
                raise SimplicialError("unbounded simplicial set needs a top degree")
            top, last = X.dim, X.dim
        else:
            last = top + 1
        self.top = top
        self.basis: Dict[int, list] = {n: list(X.nondegenerate(n)) for n in range(last + 1)}
        self.index: Dict[int, dict] = {n: {x: k for k, x in enumerate(b)} for n, b in self.basis.items()}
        d = {}
        for n in range(0, last):
            cols: List[dict] = [dict() for _ in self.basis[n]]
            idx = self.index[n]
            for r, y in enumerate(self.basis[n + 1]):
                for i in range(n + 2):
                    f = X.face(n + 1, y, i)
                    c = idx.get(f)
                    if c is None:
                        continue
                    cols[c][r] = cols[c].get(r, 0) + (1 if i % 2 == 0 else -1)
            d[n] = SparseMatrix.from_columns(F, len(self.basis[n + 1]), cols)
        self.complex = CochainComplex(F, {n: len(b) for n, b in self.basis.items()}, d,
                                      {n: b for n, b in self.basis.items()})

    def value(self, n: int, a: dict, x):
        """Evaluate the n-cochain a (basis-indexed dict) on any n-simplex x."""
        k = self.index[n].get(x)
        if k is None:
            return self.F.zero
        return a.get(k, self.F.zero)

    def pullback(self, f: SimplicialMap, other: "NormalizedCochains", n: int, a: dict) -> dict:
        """f^*: cochains on f.target (other) -> cochains on f.source (self)."""
        out = {}
        for k, x in enumerate(self.basis[n]):
            v = other.value(n, a, f(n, x))
            if v:
                out[k] = v
        return out


def normalized_cochains(X: SimplicialSet, F: Field, top: Optional[int] = None) -> CochainComplex:
    return NormalizedCochains(X, F, top).complex
