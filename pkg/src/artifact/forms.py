"""Polynomial differential forms (the Com case of generalized forms).

Omega_n is the free graded-commutative algebra on x_0..x_n (degree 0) and
dx_0..dx_n (degree 1) modulo sum x_i = 1 and sum dx_i = 0.  Elements are kept in
the normal form that eliminates x_0 and dx_0, i.e. as polynomials in
t_i = x_i, dt_i (i = 1..n).  A monotone map theta: [m] -> [n] acts by
x_i |-> sum_{theta(k) = i} y_k, which gives the faces and degeneracies.

Forms on a finite EZ set X are families {label: element of Omega_dim} that are
compatible with every face (degenerate faces act through the degeneracy
pullback).  All spaces are truncated by a polynomial-degree cap D; exactness of
a cocycle in the D-truncation is decided in the (D+1)-truncation, since the
radial contraction raises polynomial degree by one.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .gca import GCA, Elem, GCAError, tensor
from .linalg import (NOT_IN_IMAGE, QQ, CochainComplex, CohomologyBasis, Field, Reducer, SparseMatrix, Vector,
                     solve_in_image)
from .simplicial import EZSet, NormalizedCochains, SimplicialError

Theta = Tuple[int, ...]


class FormError(ValueError):
    pass


# ---------------------------------------------------------------- Omega_n

class OmegaLevel:
    """Omega_n in normal form (x_0, dx_0 eliminated)."""

    def __init__(self, n: int, F: Field = QQ, operad: str = "com"):
        if operad != "com":
            raise FormError("OmegaLevel is the commutative case; use assoc_level for the associative one")
        self.n, self.F = n, F
        names = [f"t{i}" for i in range(1, n + 1)] + [f"dt{i}" for i in range(1, n + 1)]
        degs = [0] * n + [1] * n
        self.A = GCA(F, names, degs, {f"t{i}": {self._unit(n + i - 1): 1} for i in range(1, n + 1)}, f"Omega{n}")
        self._maps: Dict[Tuple, Callable] = {}

    def _unit(self, j):
        m = [0] * (2 * self.n)
        m[j] = 1
        return tuple(m)

    # generators
    def x(self, i: int) -> Elem:
        A = self.A
        if i == 0:
            out = A.one()
            for j in range(1, self.n + 1):
                out = A.sub(out, A.gen(f"t{j}"))
            return out
        return A.gen(f"t{i}")

    def dx(self, i: int) -> Elem:
        return self.A.d(self.x(i))

    def basis(self, k: int, cap: int) -> List:
        return self.A.basis(k, poly_cap=cap)

    def poly_degree(self, a: Elem) -> int:
        return max((sum(m[: self.n]) for m in a), default=-1)

    # simplicial structure
    def pullback(self, theta: Theta, target: "OmegaLevel") -> Callable[[Elem], Elem]:
        """Omega_n -> Omega_m along theta: [m] -> [n]."""
        key = (theta, target.n)
        if key not in self._maps:
            if len(theta) != target.n + 1 or any(v > self.n for v in theta):
                raise FormError(f"bad simplicial operator {theta}")
            images = {}
            for i in range(1, self.n + 1):
                img = {}
                for k, v in enumerate(theta):
                    if v == i:
                        img = target.A.add(img, target.x(k))
                images[f"t{i}"] = img
                images[f"dt{i}"] = target.A.d(img)
            self._maps[key] = self.A.hom(target.A, images)
        return self._maps[key]

    def face(self, j: int) -> Callable[[Elem], Elem]:
        return self.pullback(tuple(k if k < j else k + 1 for k in range(self.n)), omega_level(self.n - 1, self.F))

    def degen(self, j: int) -> Callable[[Elem], Elem]:
        return self.pullback(tuple(k if k <= j else k - 1 for k in range(self.n + 2)), omega_level(self.n + 1, self.F))

    def identity_violation(self) -> Optional[str]:
        """Simplicial identities on the generators x_i, dx_i."""
        n, F = self.n, self.F
        gens = [self.x(i) for i in range(n + 1)] + [self.dx(i) for i in range(n + 1)]
        for g in gens:
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        a = omega_level(n - 1, F).face(i)(self.face(j)(g))
                        b = omega_level(n - 1, F).face(j - 1)(self.face(i)(g))
                        if a != b:
                            return f"d{i}d{j} on Omega{n}"
            for j in range(n + 1):
                up = omega_level(n + 1, F)
                for i in range(n + 2):
                    a = up.face(i)(self.degen(j)(g))
                    if i in (j, j + 1):
                        b = g
                    elif i < j:
                        b = omega_level(n - 1, F).degen(j - 1)(self.face(i)(g)) if n >= 1 else None
                    else:
                        b = omega_level(n - 1, F).degen(j)(self.face(i - 1)(g)) if n >= 1 else None
                    if b is not None and a != b:
                        return f"d{i}s{j} on Omega{n}"
        return None

    # analysis
    def integrate(self, a: Elem):
        """Integral over the standard n-simplex of the degree-n part (orientation dt_1...dt_n)."""
        n, F = self.n, self.F
        total = F.zero
        for m, c in a.items():
            if sum(m[n:]) != n:
                continue
            num = 1
            for e in m[:n]:
                num *= factorial(e)
            total = F.add(total, F.mul(c, F(Fraction(num, factorial(n + sum(m[:n]))))))
        return total

    def radial(self, a: Elem) -> Elem:
        """Contraction toward vertex 0: h(w) = i_E(w) / weight, with E the Euler field."""
        A, n = self.A, self.n
        out: Elem = {}
        for m, c in a.items():
            w = sum(m)
            if w == 0:
                continue
            odd = [i for i in range(n) if m[n + i]]
            for pos, i in enumerate(odd):
                mm = list(m)
                mm[n + i] = 0
                mm[i] += 1
                coef = self.F.mul(c, self.F(Fraction(1, w)))
                out = A.add(out, {tuple(mm): coef}, -1 if pos % 2 else 1)
        return out

    def evaluate_at_origin(self, a: Elem) -> Elem:
        z = (0,) * (2 * self.n)
        return {z: a[z]} if z in a else {}


_LEVELS: Dict[Tuple[int, int], OmegaLevel] = {}


def omega_level(n: int, F: Field = QQ, operad: str = "com"):
    if operad == "as":
        return assoc_level(n, F)
    if operad != "com":
        raise FormError(f"forms are not computed for the operad {operad!r}")
    key = (n, F.p)
    if key not in _LEVELS:
        _LEVELS[key] = OmegaLevel(n, F)
    return _LEVELS[key]


class AssocLevel:
    """Omega_n for the associative operad: the free graded associative algebra on
    t_1..t_n (degree 0) and dt_1..dt_n (degree 1), with x_0 = 1 - sum t_i.

    Elements are dicts {word: coefficient}; a word is a tuple of generator
    indices (i < n is t_{i+1}, i >= n is dt_{i-n+1}).  Only the normal form and the
    simplicial structure are provided.
    """

    def __init__(self, n: int, F: Field = QQ):
        self.n, self.F = n, F
        self._maps: Dict[Tuple, Callable] = {}

    def _add(self, a: Elem, b: Elem, s=1) -> Elem:
        F = self.F
        out = dict(a)
        for w, c in b.items():
            v = F.add(out.get(w, F.zero), F.mul(F(s), c))
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return out

    def one(self) -> Elem:
        return {(): self.F.one}

    def x(self, i: int) -> Elem:
        if i == 0:
            out = self.one()
            for j in range(self.n):
                out = self._add(out, {(j,): self.F.one}, -1)
            return out
        return {(i - 1,): self.F.one}

    def dx(self, i: int) -> Elem:
        return self.d(self.x(i))

    def mul(self, a: Elem, b: Elem) -> Elem:
        out: Elem = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                out = self._add(out, {w1 + w2: self.F.mul(c1, c2)})
        return out

    def d(self, a: Elem) -> Elem:
        n = self.n
        out: Elem = {}
        for w, c in a.items():
            odd = 0
            for k, g in enumerate(w):
                if g < n:
                    out = self._add(out, {w[:k] + (g + n,) + w[k + 1:]: c}, -1 if odd % 2 else 1)
                else:
                    odd += 1
        return out

    def degree(self, w) -> int:
        return sum(1 for g in w if g >= self.n)

    def basis(self, k: int, cap: int) -> List:
        """Words of degree k with at most cap letters t_i."""
        n = self.n
        out = []
        for t in range(cap + 1):
            for w in itertools.product(range(2 * n), repeat=t + k):
                if self.degree(w) == k:
                    out.append(w)
        return sorted(out)

    def pullback(self, theta: Theta, target: "AssocLevel") -> Callable[[Elem], Elem]:
        key = (theta, target.n)
        if key not in self._maps:
            if len(theta) != target.n + 1 or any(v > self.n for v in theta):
                raise FormError(f"bad simplicial operator {theta}")
            images = []
            for i in range(1, self.n + 1):
                img: Elem = {}
                for k, v in enumerate(theta):
                    if v == i:
                        img = target._add(img, target.x(k))
                images.append(img)
            images += [target.d(img) for img in images]

            def f(a: Elem) -> Elem:
                out: Elem = {}
                for w, c in a.items():
                    v = target.one()
                    for g in w:
                        v = target.mul(v, images[g])
                    out = target._add(out, v, c)
                return out

            self._maps[key] = f
        return self._maps[key]

    def face(self, j: int) -> Callable[[Elem], Elem]:
        return self.pullback(tuple(k if k < j else k + 1 for k in range(self.n)), assoc_level(self.n - 1, self.F))

    def degen(self, j: int) -> Callable[[Elem], Elem]:
        return self.pullback(tuple(k if k <= j else k - 1 for k in range(self.n + 2)),
                             assoc_level(self.n + 1, self.F))

    def identity_violation(self, cap: int = 2) -> Optional[str]:
        """Simplicial identities on the words of length <= cap, and d commuting with faces."""
        n, F = self.n, self.F
        elems = [{w: F.one} for k in (0, 1, 2) for w in self.basis(k, cap) if len(w) <= cap]
        low = assoc_level(n - 1, F) if n else None
        for a in elems:
            if n >= 1:
                for j in range(n + 1):
                    if self.face(j)(self.d(a)) != low.d(self.face(j)(a)):
                        return f"d does not commute with face {j} on AsOmega{n}"
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        if low.face(i)(self.face(j)(a)) != low.face(j - 1)(self.face(i)(a)):
                            return f"d{i}d{j} on AsOmega{n}"
            up = assoc_level(n + 1, F)
            for j in range(n + 1):
                for i in (j, j + 1):
                    if up.face(i)(self.degen(j)(a)) != a:
                        return f"d{i}s{j} on AsOmega{n}"
        return None


_ALEVELS: Dict[Tuple[int, int], AssocLevel] = {}


def assoc_level(n: int, F: Field = QQ) -> AssocLevel:
    key = (n, F.p)
    if key not in _ALEVELS:
        _ALEVELS[key] = AssocLevel(n, F)
    return _ALEVELS[key]


def capped_cohomology(level: OmegaLevel, k: int, D: int) -> int:
    """dim of closed degree-k forms with poly degree <= D modulo d of poly degree <= D+1."""
    return _capped(level.A, k, D)


def _capped(A: GCA, k: int, D: int) -> int:
    # closed forms of cap D modulo (d of cap D+1 forms) intersected with cap D;
    # d never raises the polynomial degree, so everything lives in cap D+1
    Zb = A.basis(k, poly_cap=D)
    if not Zb:
        return 0
    big = A.basis(k, poly_cap=D + 1)
    idx_k = {m: i for i, m in enumerate(big)}
    up = A.basis(k + 1, poly_cap=D + 1)
    idx_up = {m: i for i, m in enumerate(up)}
    R = Reducer(A.F, track=True)
    Z = []
    for j, m in enumerate(Zb):
        if not R.add({idx_up[mm]: c for mm, c in A.d(A.mono(m)).items()}, tag=j):
            Z.append({idx_k[Zb[i]]: c for i, c in R._last_relation.items()})
    if k == 0:
        return len(Z)
    B = [{idx_k[mm]: c for mm, c in A.d(A.mono(m)).items()}
         for m in A.basis(k - 1, poly_cap=D + 1)]

    def rk(vs):
        R2 = Reducer(A.F)
        for v in vs:
            R2.add(v)
        return R2.rank

    rB = rk(B)
    return len(Z) - (rB + len(Z) - rk(B + Z))


def lemma_acyclicity(n: int, D: int, F: Field = QQ) -> Dict[int, int]:
    """Capped cohomology of Omega_n in every degree (expected: 1 in degree 0, else 0)."""
    L = omega_level(n, F)
    return {k: capped_cohomology(L, k, D) for k in range(n + 1)}


def radial_homotopy_violation(n: int, D: int, F: Field = QQ) -> Optional[Tuple]:
    """Check d h + h d = id - ev_0 on every basis monomial of poly degree <= D."""
    L = omega_level(n, F)
    A = L.A
    for k in range(n + 1):
        for m in L.basis(k, D):
            a = A.mono(m)
            lhs = A.add(A.d(L.radial(a)), L.radial(A.d(a)))
            rhs = A.sub(a, L.evaluate_at_origin(a))
            if lhs != rhs:
                return (k, m)
    return None


# ---------------------------------------------------------------- fillers on models

def contract_model(omega: Elem, s: int, F: Field = QQ) -> Elem:
    """theta in Omega_s with face_0 theta = omega and face_i theta = 0 (i > 0).

    omega lives in Omega_{s-1} and must have all faces zero when s >= 2.  The
    construction is theta = sum_i t_i * mu_i, where mu_i is omega rewritten with
    the coordinate of vertex i eliminated and transported to the face opposite 0.
    """
    if s < 1:
        raise FormError("s >= 1")
    src, tgt = omega_level(s - 1, F), omega_level(s, F)
    if s >= 2:
        for j in range(s):
            if src.face(j)(omega):
                raise FormError(f"face {j} of the datum is not zero")
    A = tgt.A
    theta: Elem = {}
    for i in range(1, s + 1):
        k = i - 1  # eliminated vertex of Delta[s-1]
        images = {}
        for j in range(1, s):
            if j == k:
                img = A.one()
                for jj in range(0, s):
                    if jj != k:
                        img = A.sub(img, tgt.x(jj + 1))
            else:
                img = tgt.x(j + 1)
            images[f"t{j}"] = img
            images[f"dt{j}"] = A.d(img)
        mu = src.A.hom(A, images)(omega)
        theta = A.add(theta, A.mul(tgt.x(i), mu))
    return theta


# ---------------------------------------------------------------- forms on X

def _coface(n: int, j: int) -> Theta:
    return tuple(k if k < j else k + 1 for k in range(n))


class FormSpace:
    """Forms on a finite EZ set with polynomial-degree cap."""

    def __init__(self, X: EZSet, F: Field = QQ):
        if not isinstance(X, EZSet):
            raise FormError("forms are computed on EZ-presented simplicial sets")
        self.X, self.F = X, F
        self.labels = [y for n in sorted(X.nd) for y in X.nd[n]]
        self.cofaces: Dict = {y: [] for y in self.labels}
        for y, fs in X.faces.items():
            for i, (eta, z) in enumerate(fs):
                self.cofaces[z].append((y, i, eta))

    def level(self, y) -> OmegaLevel:
        return omega_level(self.X.dim_of[y], self.F)

    def value(self, form: Mapping, eta: Theta, y) -> Elem:
        """Value of a form on the (possibly degenerate) simplex (eta, y)."""
        a = form.get(y, {})
        if len(eta) == self.X.dim_of[y] + 1:
            return a
        return self.level(y).pullback(tuple(eta), omega_level(len(eta) - 1, self.F))(a)

    def violation(self, form: Mapping) -> Optional[Tuple]:
        for y in self.labels:
            n = self.X.dim_of[y]
            if n == 0:
                continue
            L = self.level(y)
            for i, (eta, z) in enumerate(self.X.faces[y]):
                if L.face(i)(form.get(y, {})) != self.value(form, eta, z):
                    return (y, i)
        return None

    def d(self, form: Mapping) -> Dict:
        return {y: v for y in self.labels if (v := self.level(y).A.d(form.get(y, {})))}

    def mul(self, a: Mapping, b: Mapping) -> Dict:
        """Pointwise product theta_2(1_2; a, b)."""
        return {y: v for y in self.labels if (v := self.level(y).A.mul(a.get(y, {}), b.get(y, {})))}

    def add(self, a: Mapping, b: Mapping, s=1) -> Dict:
        return {y: v for y in self.labels if (v := self.level(y).A.add(a.get(y, {}), b.get(y, {}), s))}

    def constant(self, c=1) -> Dict:
        return {y: self.level(y).A.const(c) for y in self.labels}

    # ---- linear systems
    # A form is determined by its values on "root" simplices: those that are not a
    # nondegenerate face of another root.  Every other simplex y has a home
    # (root x, vertex map v) with x restricted along v equal to y, so the
    # unknowns are monomials on the roots only.
    def _structure(self):
        if hasattr(self, "_roots"):
            return
        X = self.X
        home: Dict = {}
        roots: List = []
        occ: List = []
        for x in sorted(self.labels, key=lambda y: -X.dim_of[y]):
            if x in home:
                continue
            n = X.dim_of[x]
            roots.append(x)
            home[x] = (x, tuple(range(n + 1)))
            for r in range(1, n + 1):
                for verts in itertools.combinations(range(n + 1), r):
                    eta, y = X.restrict(n, X.nd_simplex(x), verts)
                    occ.append((x, verts, tuple(eta), y))
                    if len(eta) == X.dim_of[y] + 1 and y not in home:
                        home[y] = (x, verts)
        self._roots, self._home = roots, home
        # constraints: every occurrence that is not the home of its face
        self._occ = [(x, v, eta, y) for (x, v, eta, y) in occ
                     if not (len(eta) == X.dim_of[y] + 1 and home[y] == (x, v))]
        self._homed: Dict = {x: [] for x in roots}
        for y in self.labels:
            self._homed[home[y][0]].append(y)

    def _pull(self, x, theta) -> Callable:
        n = self.X.dim_of[x]
        theta = tuple(theta)
        if theta == tuple(range(n + 1)):
            return lambda a: a
        return self.level(x).pullback(theta, omega_level(len(theta) - 1, self.F))

    def _unknowns(self, k: int, cap: int):
        self._structure()
        return [(x, m) for x in self._roots for m in self.level(x).basis(k, cap)]

    def _columns(self, k: int, cap: int, with_d: bool, extra: Optional[Callable] = None):
        """Sparse columns (row key -> coefficient), one per root unknown."""
        F = self.F
        unknowns = self._unknowns(k, cap)
        pos = {u: j for j, u in enumerate(unknowns)}
        cols: List[Dict] = [{} for _ in unknowns]

        def put(j, key, c):
            v = F.add(cols[j].get(key, F.zero), c)
            if v:
                cols[j][key] = v
            else:
                cols[j].pop(key, None)

        by_root: Dict = {}
        for (x, m) in unknowns:
            by_root.setdefault(x, []).append(m)
        for (x, verts, eta, y) in self._occ:
            hx, hv = self._home[y]
            f1 = self._pull(x, verts)
            f2 = self._pull(hx, tuple(hv[e] for e in eta))
            for m in by_root.get(x, ()):
                for mm, c in f1({m: F.one}).items():
                    put(pos[(x, m)], ("c", x, verts, mm), c)
            for m in by_root.get(hx, ()):
                for mm, c in f2({m: F.one}).items():
                    put(pos[(hx, m)], ("c", x, verts, mm), F.neg(c))
        for j, (x, m) in enumerate(unknowns):
            L = self.level(x)
            if with_d:
                for mm, c in L.A.d(L.A.mono(m)).items():
                    put(j, ("d", x, mm), c)
            if extra:
                for y in self._homed[x]:
                    val = self._pull(x, self._home[y][1])({m: F.one})
                    for key, c in extra(y, val).items():
                        put(j, key, c)
        return unknowns, cols

    def expand(self, root_values: Mapping) -> Dict:
        """The full form determined by its values on the roots."""
        self._structure()
        out = {}
        for y in self.labels:
            x, v = self._home[y]
            val = self._pull(x, v)(root_values.get(x, {}))
            if val:
                out[y] = val
        return out

    def rank_system(self, k: int, cap: int, with_d: bool, extra: Optional[Callable] = None,
                    extra_cols: Sequence[Vector] = ()) -> Tuple[int, int]:
        """(number of unknowns, rank) of the compatibility system (+ d rows, + extra rows).

        extra(y, value) adds row entries computed from the value of a unit form on y.
        """
        unknowns, cols = self._columns(k, cap, with_d, extra)
        rows: Dict = {}
        R = Reducer(self.F)
        for col in list(cols) + list(extra_cols):
            R.add({rows.setdefault(key, len(rows)): c for key, c in col.items()})
        return len(unknowns) + len(extra_cols), R.rank

    def basis(self, k: int, cap: int, closed: bool = False) -> List[Dict]:
        """A basis of compatible (optionally closed) degree-k forms of poly degree <= cap."""
        unknowns, cols = self._columns(k, cap, closed)
        rows: Dict = {}
        cols = [{rows.setdefault(key, len(rows)): c for key, c in col.items()} for col in cols]
        M = SparseMatrix.from_columns(self.F, len(rows), cols)
        from .linalg import rank_kernel_image
        _, ker, _ = rank_kernel_image(M)
        out = []
        for v in ker:
            root: Dict = {}
            for j, c in v.items():
                x, m = unknowns[j]
                root[x] = self.level(x).A.add(root.get(x, {}), {m: c})
            out.append(self.expand(root))
        return out

    def dim(self, k: int, cap: int, closed: bool = False) -> int:
        n, r = self.rank_system(k, cap, closed)
        return n - r

    # ---- comparison with cochains
    def phi(self, form: Mapping, k: int, N: NormalizedCochains) -> Vector:
        """Phi: integrate the degree-k part over every nondegenerate k-simplex."""
        out = {}
        for idx, (eta, y) in enumerate(N.basis.get(k, [])):
            v = self.level(y).integrate({m: c for m, c in form.get(y, {}).items()})
            if v:
                out[idx] = v
        return out


# ---------------------------------------------------------------- extension

def _solve_filler(L: OmegaLevel, k: int, cap: int, boundary: Sequence[Elem], closed: bool):
    """theta in Omega_n^k (poly <= cap) with face_i theta = boundary[i] (and d theta = 0)."""
    A = L.A
    rows: Dict = {}

    def key(t):
        if t not in rows:
            rows[t] = len(rows)
        return rows[t]

    basis = L.basis(k, cap)
    cols = []
    for m in basis:
        a = A.mono(m)
        col = {}
        for i in range(L.n + 1):
            for mm, c in L.face(i)(a).items():
                col[key(("f", i, mm))] = c
        if closed:
            for mm, c in A.d(a).items():
                col[key(("d", mm))] = c
        cols.append(col)
    rhs = {}
    for i, b in enumerate(boundary):
        for mm, c in b.items():
            rhs[key(("f", i, mm))] = c
    M = SparseMatrix.from_columns(L.F, len(rows), cols)
    x = solve_in_image(M, rhs)
    if x is NOT_IN_IMAGE:
        return None
    out: Elem = {}
    for j, c in x.items():
        out = A.add(out, {basis[j]: c})
    return out


def extend_form(S: FormSpace, omega: Mapping, known: Iterable, k: int, cap: int,
                closed: bool = False, max_cap: Optional[int] = None) -> Dict:
    """Extend a compatible degree-k form given on the subcomplex ``known`` to all of X.

    Missing simplices are filled in order of (dimension, label position); each
    filler is an exact linear solve, raising the polynomial cap when needed.
    """
    known = set(known)
    form = {y: omega.get(y, {}) for y in known}
    max_cap = cap + 3 if max_cap is None else max_cap
    X = S.X
    for y in S.labels:
        if y in known:
            continue
        n = X.dim_of[y]
        L = S.level(y)
        if n == 0:
            raise FormError(f"vertex {y!r} is not in the known subcomplex")
        bnd = [S.value(form, eta, z) for (eta, z) in X.faces[y]]
        for c in range(cap, max_cap + 1):
            th = _solve_filler(L, k, c, bnd, closed)
            if th is not None:
                break
        else:
            raise FormError(f"no filler for {y!r} within polynomial cap {max_cap}")
        form[y] = th
    bad = S.violation(form)
    if bad:
        raise FormError(f"extension is not compatible at {bad}")
    return form


def volume_form(n: int, F: Field = QQ) -> Elem:
    """n! dt_1...dt_n, whose integral is 1."""
    return {(0,) * n + (1,) * n: F(factorial(n))}


def closed_preimage(S: FormSpace, cocycle: Vector, k: int, N: NormalizedCochains, cap: int = 4) -> Dict:
    """A closed form with Phi(form) = cocycle, built on the k-skeleton and extended closedly."""
    X = S.X
    form: Dict = {}
    known = []
    for y in S.labels:
        n = X.dim_of[y]
        if n < k:
            form[y] = {}
            known.append(y)
        elif n == k:
            idx = N.index[k][X.nd_simplex(y)]
            c = cocycle.get(idx, 0)
            form[y] = S.level(y).A.scale(c, volume_form(k, S.F)) if c else {}
            known.append(y)
    return extend_form(S, form, known, k, cap, closed=True)


# ---------------------------------------------------------------- Phi checks

@dataclass
class PhiReport:
    space: str
    degrees: Dict[int, Dict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v["surjective"] and v["injective"] and v.get("preimages", True) for v in self.degrees.values())


def phi_chain_map_violation(S: FormSpace, k: int, cap: int, N: NormalizedCochains) -> Optional[int]:
    """Phi(d w) = d Phi(w) on a basis of compatible degree-k forms."""
    for j, w in enumerate(S.basis(k, cap)):
        lhs = S.phi(S.d(w), k + 1, N)
        rhs = N.complex.diff(k).apply(S.phi(w, k, N))
        if {a: b for a, b in lhs.items() if b} != {a: b for a, b in rhs.items() if b}:
            return j
    return None


def phi_comparison(X: EZSet, D: int = 4, F: Field = QQ, preimages: bool = True) -> PhiReport:
    """pi^*Phi on the D-capped forms: surjectivity and injectivity in every degree.

    surjective: closed capped forms hit every cohomology class (rank count), and
    an explicit closed preimage is constructed for each basis class.
    injective: closed capped forms with exact image are d of (D+1)-capped forms.
    """
    S = FormSpace(X, F)
    N = NormalizedCochains(X, F)
    top = X.dim
    rep = PhiReport(X.name)
    for k in range(top + 1):
        H = CohomologyBasis(N.complex, k)
        nZ, rZ = S.rank_system(k, D, True)
        dimZ = nZ - rZ
        # unknowns (w, c): compatibility, dw = 0, Phi(w) - delta c = 0
        bk = N.basis.get(k, [])
        index_k = {y: i for i, (_, y) in enumerate(bk)}

        def extra(y, val, index_k=index_k):
            if y not in index_k:
                return {}
            v = S.level(y).integrate(val)
            return {("phi", index_k[y]): v} if v else {}

        dcols = []
        if k > 0:
            delta = N.complex.diff(k - 1)
            for j in range(delta.ncols):
                dcols.append({("phi", r): F.neg(c) for r, c in delta.column(j).items()})
        nK, rK = S.rank_system(k, D, True, extra, dcols)
        ker_delta = 0
        if k > 0:
            R = Reducer(F)
            for col in N.complex.diff(k - 1).columns():
                R.add(col)
            ker_delta = N.complex.dim(k - 1) - R.rank
        dimK = (nK - rK) - ker_delta
        if k > 0:
            n1, r1 = S.rank_system(k - 1, D + 1, False)
            n2, r2 = S.rank_system(k - 1, D + 1, True)
            boundaries = r2 - r1
        else:
            boundaries = 0
        info = {"closed": dimZ, "phi_rank": dimZ - dimK, "H": H.dim, "kernel": dimK, "exact": boundaries,
                "surjective": dimZ - dimK == H.dim, "injective": dimK == boundaries}
        if preimages:
            ok = True
            for z in H.reps:
                w = closed_preimage(S, z, k, N, cap=max(1, min(D, 2)))
                img = S.phi(w, k, N)
                diff = dict(img)
                for r, c in z.items():
                    diff[r] = F.add(diff.get(r, F.zero), F.neg(c))
                diff = {r: c for r, c in diff.items() if c}
                if S.d(w) or (diff and not H.is_coboundary(diff)):
                    ok = False
            info["preimages"] = ok
        rep.degrees[k] = info
    return rep


# ---------------------------------------------------------------- path object and homotopies

def interval_algebra(F: Field = QQ, t: str = "t", dt: str = "dt") -> GCA:
    """Omega_1 = Q[t, dt] with d t = dt."""
    return GCA(F, [t, dt], [0, 1], {t: {(0, 1): 1}}, "Omega1")


@dataclass
class PathObject:
    A: GCA
    P: GCA
    p: Callable
    d0: Callable
    d1: Callable
    t: str

    def capped_cohomology(self, k: int, D: int) -> int:
        return _capped(self.P, k, D)


def path_object(A: GCA, t: str = "t", dt: str = "dt") -> PathObject:
    """A -> A (x) Omega_1 with the two endpoint evaluations."""
    I = interval_algebra(A.F, t, dt)
    P, ia, _ = tensor(A, I, f"{A.name}[t,dt]")
    ident = {x: A.gen(x) for x in A.names}
    d0 = P.hom(A, {**ident, t: {}, dt: {}})
    d1 = P.hom(A, {**ident, t: A.one(), dt: {}})
    return PathObject(A, P, ia, d0, d1, t)


@dataclass
class HomotopyResult:
    found: bool
    images: Optional[Dict[str, Elem]] = None
    obstruction: Optional[str] = None


def simplicially_homotopic(A: GCA, B: GCA, f: Mapping[str, Elem], g: Mapping[str, Elem],
                           cap: int = 3) -> HomotopyResult:
    """Search H: A -> B (x) Omega_1 with d_0 H = f, d_1 H = g, one generator at a time.

    A must have its generators listed in an order where d of each generator only
    involves earlier ones.  Each H(x) is found by an exact linear solve among
    elements of degree |x| with t-degree <= cap.
    """
    PO = path_object(B)
    P = PO.P
    H: Dict[str, Elem] = {}
    for x in A.names:
        k = A.degrees[A.index[x]]
        target_d = A.hom(P, H)(A.d_gen(x)) if A.d_gen(x) else {}
        basis = P.basis(k, poly_cap=cap)
        rows: Dict = {}

        def key(t):
            if t not in rows:
                rows[t] = len(rows)
            return rows[t]

        cols = []
        for m in basis:
            a = P.mono(m)
            col = {}
            for mm, c in PO.d0(a).items():
                col[key(("0", mm))] = c
            for mm, c in PO.d1(a).items():
                col[key(("1", mm))] = c
            for mm, c in P.d(a).items():
                col[key(("d", mm))] = c
            cols.append(col)
        rhs = {}
        for tag, img in (("0", f[x]), ("1", g[x])):
            for mm, c in img.items():
                rhs[key((tag, mm))] = c
        for mm, c in target_d.items():
            rhs[key(("d", mm))] = c
        sol = solve_in_image(SparseMatrix.from_columns(B.F, len(rows), cols), rhs)
        if sol is NOT_IN_IMAGE:
            return HomotopyResult(False, None, _obstruction(A, B, f, g) or f"no H({x}) within t-degree {cap}")
        H[x] = {}
        for j, c in sol.items():
            H[x] = P.add(H[x], {basis[j]: c})
    return HomotopyResult(True, H)


def _obstruction(A: GCA, B: GCA, f, g) -> Optional[str]:
    """Name a closed generator whose images under f and g differ in cohomology."""
    for x in A.names:
        if A.d_gen(x):
            continue
        diff = B.sub(f[x], g[x])
        if not diff:
            continue
        k = A.degrees[A.index[x]]
        if not _is_exact(B, diff, k):
            return f"pi^* f != pi^* g on [{x}]"
    return None


def _is_exact(B: GCA, a: Elem, k: int) -> bool:
    if k == 0:
        return not a
    basis = B.basis(k - 1, poly_cap=8)
    up = {}
    cols = []
    for m in basis:
        col = {}
        for mm, c in B.d(B.mono(m)).items():
            up.setdefault(mm, len(up))
            col[up[mm]] = c
        cols.append(col)
    rhs = {}
    for mm, c in a.items():
        up.setdefault(mm, len(up))
        rhs[up[mm]] = c
    return solve_in_image(SparseMatrix.from_columns(B.F, len(up), cols), rhs) is not NOT_IN_IMAGE


# ---------------------------------------------------------------- local coefficients

@dataclass
class Presheaf:
    """A presheaf of finite cochain complexes on the nondegenerate simplices of X.

    dims[y][s] is dim F(y)^s, diff[y][s] the matrix F(y)^s -> F(y)^{s+1}, and
    restr[y][i][s] the matrix F(z)^s -> F(y)^s for the face (eta, z) = d_i y.
    Degeneracies act by the identity of F(z).
    """
    X: EZSet
    F: Field
    dims: Dict
    diff: Dict
    restr: Dict

    def degrees(self) -> List[int]:
        return sorted({s for d in self.dims.values() for s in d})

    def dim(self, y, s) -> int:
        return self.dims[y].get(s, 0)

    def d(self, y, s) -> SparseMatrix:
        if s in self.diff.get(y, {}):
            return self.diff[y][s]
        return SparseMatrix.zero(self.F, self.dim(y, s + 1), self.dim(y, s))

    def r(self, y, i, s) -> SparseMatrix:
        tab = self.restr[y][i]
        if s in tab:
            return tab[s]
        z = self.X.faces[y][i][1]
        return SparseMatrix.zero(self.F, self.dim(y, s), self.dim(z, s))

    def violation(self) -> Optional[str]:
        """Restrictions must be chain maps and satisfy the simplicial identities."""
        X = self.X
        for y, fs in X.faces.items():
            for i, (eta, z) in enumerate(fs):
                for s in self.degrees():
                    if self.d(y, s) @ self.r(y, i, s) != self.r(y, i, s + 1) @ self.d(z, s):
                        return f"restriction {y!r},{i} is not a chain map"
            m = X.dim_of[y]
            if m < 2:
                continue
            for j in range(m + 1):
                for i in range(j):
                    a = self._compose(y, j, i)
                    b = self._compose(y, i, j - 1)
                    if a is not None and b is not None and a != b:
                        return f"restrictions of {y!r} violate d{i}d{j} = d{j-1}d{i}"
        return None

    def _compose(self, y, j, i):
        eta, z = self.X.faces[y][j]
        if len(eta) != self.X.dim_of[z] + 1:
            return None
        if len(self.X.faces[z][i][0]) != self.X.dim_of[self.X.faces[z][i][1]] + 1:
            return None
        out = {}
        for s in self.degrees():
            out[s] = (self.r(y, j, s) @ self.r(z, i, s)).to_dense()
        return out


def constant_presheaf(X: EZSet, F: Field, dims: Mapping[int, int], diff: Optional[Mapping] = None) -> Presheaf:
    D = {y: dict(dims) for y in X.dim_of}
    Df = {y: dict(diff or {}) for y in X.dim_of}
    R = {y: {i: {s: SparseMatrix.identity(F, n) for s, n in dims.items()} for i in range(len(fs))}
         for y, fs in X.faces.items()}
    return Presheaf(X, F, D, Df, R)


class LocalForms:
    """Sections of Omega (x) F: per simplex y an element of Omega_dim(y)^r (x) F(y)^s."""

    def __init__(self, P: Presheaf, cap: int):
        self.P, self.cap, self.F = P, cap, P.F
        self.S = FormSpace(P.X, P.F)

    def _unknowns(self, r, s, cap=None):
        cap = self.cap if cap is None else cap
        out = []
        for y in self.S.labels:
            for m in self.S.level(y).basis(r, cap):
                for b in range(self.P.dim(y, s)):
                    out.append((y, m, b))
        return out

    def _column(self, y, m, b, r, s, rows, extra=None):
        S, P, F = self.S, self.P, self.F
        L = S.level(y)
        a = L.A.mono(m)
        col: Dict[int, object] = {}

        def put(key, c):
            if key not in rows:
                rows[key] = len(rows)
            i = rows[key]
            v = F.add(col.get(i, F.zero), c)
            if v:
                col[i] = v
            else:
                col.pop(i, None)

        n = S.X.dim_of[y]
        for i in range(n + 1 if n else 0):
            for mm, c in L.face(i)(a).items():
                put(("c", y, i, mm, b), c)
        for (w, i, eta) in S.cofaces[y]:
            img = a if len(eta) == n + 1 else L.pullback(tuple(eta), omega_level(len(eta) - 1, F))(a)
            Rm = P.r(w, i, s)
            for bb, cb in Rm.column(b).items():
                for mm, c in img.items():
                    put(("c", w, i, mm, bb), F.neg(F.mul(c, cb)))
        if extra:
            for key, c in extra(y, m, b).items():
                put(key, c)
        return col

    def sections_dim(self, r: int, s: int) -> int:
        rows: Dict = {}
        R = Reducer(self.F)
        unk = self._unknowns(r, s)
        for (y, m, b) in unk:
            R.add(self._column(y, m, b, r, s, rows))
        return len(unk) - R.rank

    def _rank(self, r, s, cap, extra):
        rows: Dict = {}
        R = Reducer(self.F)
        unk = self._unknowns(r, s, cap)
        for (y, m, b) in unk:
            R.add(self._column(y, m, b, r, s, rows, extra))
        return len(unk), R.rank

    def form_cohomology(self, r: int, s: int) -> int:
        """Cohomology in the form direction (capped, exactness decided at cap + 1)."""
        S = self.S

        def dform(y, m, b):
            return {("d", y, mm, b): c for mm, c in S.level(y).A.d(S.level(y).A.mono(m)).items()}

        n, rk = self._rank(r, s, self.cap, dform)
        closed = n - rk
        if r == 0:
            return closed
        n1, r1 = self._rank(r - 1, s, self.cap + 1, None)
        _, r2 = self._rank(r - 1, s, self.cap + 1, dform)
        return closed - (r2 - r1)

    def coefficient_cohomology(self, r: int, s: int) -> int:
        """Cohomology of the sections in the F direction (d_F does not change forms)."""
        P = self.P

        def dF(tag):
            def ex(y, m, b):
                out = {}
                for bb, c in P.d(y, tag).column(b).items():
                    out[("dF", y, m, bb)] = c
                return out
            return ex

        n, rk1 = self._rank(r, s, self.cap, dF(s))
        closed = n - rk1
        if s - 1 not in P.degrees():
            return closed
        n1, r1 = self._rank(r, s - 1, self.cap, None)
        _, r2 = self._rank(r, s - 1, self.cap, dF(s - 1))
        return closed - (r2 - r1)


def cohomology_presheaf(P: Presheaf, s: int) -> Presheaf:
    """The presheaf y |-> H^s(F(y)) with induced restrictions (degree 0)."""
    X, F = P.X, P.F
    H = {}
    for y in X.dim_of:
        degs = sorted(P.dims[y])
        dims = {k: P.dim(y, k) for k in range(min(degs) - 1, max(degs) + 2)}
        diffs = {k: P.d(y, k) for k in range(min(degs) - 1, max(degs) + 1)}
        H[y] = CohomologyBasis(CochainComplex(F, dims, diffs), s)
    dims = {y: {0: H[y].dim} for y in X.dim_of}
    restr = {}
    for y, fs in X.faces.items():
        restr[y] = {}
        for i, (eta, z) in enumerate(fs):
            cols = []
            for rep in H[z].reps:
                img = P.r(y, i, s).apply(rep)
                cols.append({j: c for j, c in enumerate(H[y].coords(img)) if c})
            restr[y][i] = {0: SparseMatrix.from_columns(F, H[y].dim, cols)}
    return Presheaf(X, F, dims, {y: {} for y in X.dim_of}, restr)


def presheaf_map_sections(L_src: LocalForms, L_tgt: LocalForms, maps: Mapping, r: int, s: int) -> Dict[str, int]:
    """Ranks describing the map induced on sections by a presheaf map (maps[y][s] matrices)."""
    src = L_src
    rows: Dict = {}
    R = Reducer(src.F)
    unk = src._unknowns(r, s)
    # the induced map restricted to sections: rank of [constraints; map]
    R0 = Reducer(src.F)
    rows0: Dict = {}
    for (y, m, b) in unk:
        R0.add(src._column(y, m, b, r, s, rows0))

    def ex(y, m, b):
        return {("map", y, m, bb): c for bb, c in maps[y][s].column(b).items()}

    for (y, m, b) in unk:
        R.add(src._column(y, m, b, r, s, rows, ex))
    dim_sections = len(unk) - R0.rank
    kernel = len(unk) - R.rank
    return {"sections": dim_sections, "kernel": kernel, "rank": dim_sections - kernel}
