"""Cup and cup-i products on normalized cochains, Steenrod squares, Cartan and
Adem checks.

Cochains are dicts over the nondegenerate-simplex basis of a NormalizedCochains
object.  The cup-i products use the interval formula: for cut points
0 <= u_0 < ... < u_i <= n the vertex set [0,n] splits into the intervals
[0,u_0], [u_0,u_1], ..., [u_i,n]; the first factor reads the even-numbered
intervals and the second the odd-numbered ones.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import CohomologyBasis, Field, SparseMatrix, Vector, axpy, vec_clean
from .simplicial import NormalizedCochains, SimplicialSet


class CochainError(ValueError):
    pass


@lru_cache(maxsize=None)
def interval_splits(n: int, i: int, p: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]:
    """(front, back) vertex tuples of the cup-i formula on an n-simplex with |front| = p+1."""
    out = []
    for U in combinations(range(n + 1), i + 1):
        cuts = (0,) + U + (n,)
        front, back = [], []
        for k in range(i + 2):
            seg = range(cuts[k], cuts[k + 1] + 1)
            (front if k % 2 == 0 else back).extend(seg)
        front = tuple(sorted(set(front)))
        back = tuple(sorted(set(back)))
        if len(front) == p + 1 and len(back) == n + i + 1 - p:
            out.append((front, back))
    return tuple(out)


class CochainAlgebra:
    """Products on the normalized cochains of X in degrees 0..top."""

    def __init__(self, X: SimplicialSet, F: Field, top: int, N: Optional[NormalizedCochains] = None):
        self.X, self.F, self.top = X, F, top
        self.N = N if N is not None else NormalizedCochains(X, F, top)
        self._faces: Dict = {}
        self._H: Dict[int, CohomologyBasis] = {}

    @property
    def complex(self):
        return self.N.complex

    def basis(self, n: int) -> List:
        return self.N.basis[n]

    def face_index(self, n: int, k: int, verts: Tuple[int, ...]) -> Optional[int]:
        """Basis index of the face of basis simplex k spanned by verts (None if degenerate)."""
        key = (n, k, verts)
        if key not in self._faces:
            y = self.X.restrict(n, self.N.basis[n][k], verts)
            self._faces[key] = self.N.index[len(verts) - 1].get(y)
        return self._faces[key]

    def d(self, n: int, a: Vector) -> Vector:
        return self.complex.diff(n).apply(a)

    # ---- products
    def cup_i(self, i: int, a: Vector, p: int, b: Vector, q: int) -> Vector:
        if i < 0:
            raise CochainError("cup_i needs i >= 0")
        if i > 0 and self.F.p != 2:
            raise CochainError("cup_i for i > 0 is implemented over F_2")
        n = p + q - i
        if n < 0:
            return {}
        if n > self.top + 1:
            raise CochainError(f"degree {n} beyond the cochain window {self.top + 1}")
        out: Vector = {}
        splits = interval_splits(n, i, p)
        F = self.F
        for k in range(len(self.N.basis[n])):
            acc = F.zero
            for front, back in splits:
                fa = self.face_index(n, k, front)
                if fa is None or fa not in a:
                    continue
                fb = self.face_index(n, k, back)
                if fb is None or fb not in b:
                    continue
                acc = F.add(acc, F.mul(a[fa], b[fb]))
            if acc:
                out[k] = acc
        return out

    def cup(self, a: Vector, p: int, b: Vector, q: int) -> Vector:
        """Alexander-Whitney product: (a u b)(x) = a(front p-face) b(back q-face)."""
        return self.cup_i(0, a, p, b, q)

    def unit(self) -> Vector:
        return {k: self.F.one for k in range(len(self.N.basis[0]))}

    def dual(self, n: int, x) -> Vector:
        return {self.N.index[n][x]: self.F.one}

    def sq_cochain(self, s: int, x: Vector, q: int) -> Vector:
        """x u_{q-s} x; zero for s > q (cup_{-1} read as 0)."""
        if s < 0:
            raise CochainError("s < 0")
        if s > q:
            return {}
        return self.cup_i(q - s, x, q, x, q)

    # ---- cohomology level
    def H(self, n: int) -> CohomologyBasis:
        if n not in self._H:
            self._H[n] = CohomologyBasis(self.complex, n)
        return self._H[n]

    def class_of(self, n: int, z: Vector) -> List:
        return self.H(n).coords(z)

    def rep(self, n: int, coords: Sequence) -> Vector:
        out: Vector = {}
        for c, z in zip(coords, self.H(n).reps):
            axpy(self.F, out, self.F(c), z)
        return out

    def sq(self, s: int, q: int, coords: Sequence) -> List:
        """Sq^s on a class of H^q given by coordinates; returns coordinates in H^{q+s}."""
        if s > q:
            return [self.F.zero] * self.H(q + s).dim if q + s <= self.top else []
        return self.class_of(q + s, self.sq_cochain(s, self.rep(q, coords), q))

    def sq_matrix(self, s: int, q: int) -> SparseMatrix:
        cols = []
        for j in range(self.H(q).dim):
            e = [0] * self.H(q).dim
            e[j] = 1
            c = self.sq(s, q, e)
            cols.append({i: v for i, v in enumerate(c) if v})
        return SparseMatrix.from_columns(self.F, self.H(q + s).dim, cols)

    def cup_classes(self, p: int, x: Sequence, q: int, y: Sequence) -> List:
        return self.class_of(p + q, self.cup(self.rep(p, x), p, self.rep(q, y), q))

    # ---- identities
    def leibniz_violation(self, p: int, q: int) -> Optional[Tuple]:
        """d(a u b) = da u b + (-1)^p a u db on all basis pairs."""
        F = self.F
        for ka in range(len(self.N.basis[p])):
            a = {ka: F.one}
            da = self.d(p, a)
            for kb in range(len(self.N.basis[q])):
                b = {kb: F.one}
                lhs = self.d(p + q, self.cup(a, p, b, q))
                rhs = self.cup(da, p + 1, b, q)
                axpy(F, rhs, F(-1 if p % 2 else 1), self.cup(a, p, self.d(q, b), q + 1))
                if vec_clean(F, lhs) != vec_clean(F, rhs):
                    return (ka, kb)
        return None

    def coboundary_violation(self, i: int, p: int, q: int) -> Optional[Tuple]:
        """d(a u_i b) = da u_i b + a u_i db + a u_{i-1} b + b u_{i-1} a over F_2, all basis pairs."""
        F = self.F
        for ka in range(len(self.N.basis[p])):
            a = {ka: 1}
            da = self.d(p, a)
            for kb in range(len(self.N.basis[q])):
                b = {kb: 1}
                lhs = self.d(p + q - i, self.cup_i(i, a, p, b, q))
                rhs = self.cup_i(i, da, p + 1, b, q)
                axpy(F, rhs, 1, self.cup_i(i, a, p, self.d(q, b), q + 1))
                if i > 0:
                    axpy(F, rhs, 1, self.cup_i(i - 1, a, p, b, q))
                    axpy(F, rhs, 1, self.cup_i(i - 1, b, q, a, p))
                if lhs != rhs:
                    return (ka, kb)
        return None


# ---------------------------------------------------------------- Cartan and Adem

def cartan_check(A: CochainAlgebra, classes: Sequence[Tuple[int, Sequence]]) -> Dict:
    """Sq^s(xy) = sum_t Sq^t x Sq^{s-t} y on all ordered pairs of the given classes."""
    failures = []
    checked = 0
    for (p, x) in classes:
        for (q, y) in classes:
            for s in range(0, p + q + 1):
                if p + q + s > A.top:
                    break
                lhs = A.sq(s, p + q, A.cup_classes(p, x, q, y))
                rhs = [A.F.zero] * A.H(p + q + s).dim
                for t in range(0, s + 1):
                    if p + t > A.top or q + s - t > A.top:
                        continue
                    sx, sy = A.sq(t, p, x), A.sq(s - t, q, y)
                    if not any(sx) or not any(sy):
                        continue
                    term = A.cup_classes(p + t, sx, q + s - t, sy)
                    rhs = [A.F.add(u, v) for u, v in zip(rhs, term)]
                checked += 1
                if [A.F(v) for v in lhs] != [A.F(v) for v in rhs]:
                    failures.append({"s": s, "x": (p, list(x)), "y": (q, list(y))})
    return {"checked": checked, "failures": failures, "ok": not failures}


def binom_mod(n: int, k: int, p: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k) % p


def adem_expand(a: int, b: int, p: int = 2) -> List[Tuple[int, Tuple[int, int]]]:
    """Adem relation for an inadmissible P^a P^b (a < p b) as [(coeff, (i, j))] meaning sum coeff P^i P^j.

    p = 2:  Sq^a Sq^b = sum_c C(b-c-1, a-2c) Sq^{a+b-c} Sq^c.
    p odd:  P^a P^b = sum_i (-1)^{a+i} C((p-1)(b-i)-1, a-pi) P^{a+b-i} P^i  (no Bockstein terms).
    """
    if a <= 0 or b <= 0:
        raise CochainError("Adem relations need a, b > 0")
    if a >= p * b:
        raise CochainError(f"P^{a}P^{b} is already admissible (a >= {p}b)")
    out = []
    if p == 2:
        for c in range(0, a // 2 + 1):
            k = binom_mod(b - c - 1, a - 2 * c, 2)
            if k:
                out.append((1, (a + b - c, c)))
    else:
        for i in range(0, a // p + 1):
            k = binom_mod((p - 1) * (b - i) - 1, a - p * i, p)
            if k:
                out.append(((k * (-1) ** (a + i)) % p, (a + b - i, i)))
    return out


def apply_word(A: CochainAlgebra, word: Sequence[int], q: int, coords: Sequence) -> Tuple[int, List]:
    """Apply Sq^{w_0} Sq^{w_1} ... (rightmost first) to a class of degree q."""
    c, deg = list(coords), q
    for s in reversed(list(word)):
        if deg + s > A.top:
            raise CochainError("word leaves the cochain window")
        c = A.sq(s, deg, c) if s else list(c)
        deg += s
    return deg, c


def adem_check(A: CochainAlgebra, a: int, b: int, max_degree: Optional[int] = None) -> Dict:
    """Evaluate both sides of the Adem relation for Sq^a Sq^b on a basis of every H^q."""
    top = A.top if max_degree is None else max_degree
    rel = adem_expand(a, b, 2)
    failures, checked = [], 0
    for q in range(0, top - a - b + 1):
        for j in range(A.H(q).dim):
            e = [0] * A.H(q).dim
            e[j] = 1
            _, lhs = apply_word(A, (a, b), q, e)
            rhs = [0] * len(lhs)
            for _, (i, k) in rel:
                _, t = apply_word(A, (i, k), q, e)
                rhs = [(u + v) % 2 for u, v in zip(rhs, t)]
            checked += 1
            if [v % 2 for v in lhs] != rhs:
                failures.append((q, j))
    return {"relation": rel, "checked": checked, "failures": failures, "ok": not failures}
