"""Natural cochain operations stored on the standard simplices, and an effective
acyclic-models lifting engine producing the cup-i style family mu_0, mu_1, ...

A natural operation of arity k and degree m is determined by its universal
values: for each model dimension n, the value of op(a_1, ..., a_k) on the top
simplex of Delta[n] is a multilinear form

    sum_{(f_1..f_k)} c(f_1..f_k) a_1(f_1) ... a_k(f_k)

over tuples of nondegenerate faces f_j (strictly increasing vertex tuples) with
sum |f_j| + m = n.  On any simplicial set X the value on an n-simplex x is the
same form with a_j(f_j) read as a_j(x restricted to f_j).  Such an operation is
natural for injective maps by construction; it descends to normalized cochains
exactly when it vanishes on degenerate simplices, which is a linear condition
on the codegeneracies (every monotone surjection factors through them).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cochains import CochainAlgebra, interval_splits
from .linalg import NOT_IN_IMAGE, Field, SparseMatrix, Vector, solve_in_image
from .operads import koszul_sign

Faces = Tuple[Tuple[int, ...], ...]


class LiftError(ValueError):
    """The lifting system has no solution (violated acyclicity hypothesis)."""


def _compositions(total: int, k: int, n: int):
    """Degree tuples (e_1..e_k), 0 <= e_j <= n, summing to total."""
    if k == 0:
        if total == 0:
            yield ()
        return
    for e in range(0, min(n, total) + 1):
        for rest in _compositions(total - e, k - 1, n):
            yield (e,) + rest


def face_tuples(n: int, degrees: Sequence[int]) -> Iterable[Faces]:
    pools = [list(combinations(range(n + 1), e + 1)) for e in degrees]

    def rec(j):
        if j == len(pools):
            yield ()
            return
        for f in pools[j]:
            for rest in rec(j + 1):
                yield (f,) + rest

    return rec(0)


def all_face_tuples(n: int, k: int, m: int) -> List[Faces]:
    """Every face tuple contributing to a degree-m, arity-k operation on Delta[n]."""
    out = []
    for degs in _compositions(n - m, k, n):
        out.extend(face_tuples(n, degs))
    return out


def _coface(i: int, f: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(v if v < i else v + 1 for v in f)


def _codegeneracy(i: int, f: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
    g = tuple(v if v <= i else v - 1 for v in f)
    return None if len(set(g)) < len(g) else g


@dataclass
class NaturalOperation:
    F: Field
    arity: int
    degree: int
    cap: int
    values: Dict[int, Dict[Faces, object]] = field(default_factory=dict)
    name: str = "op"

    def at(self, n: int) -> Dict[Faces, object]:
        return self.values.get(n, {})

    def copy(self, name=None) -> "NaturalOperation":
        return NaturalOperation(self.F, self.arity, self.degree, self.cap,
                                {n: dict(v) for n, v in self.values.items()}, name or self.name)

    def _new(self, degree, name) -> "NaturalOperation":
        return NaturalOperation(self.F, self.arity, degree, self.cap, {}, name)

    def _acc(self, n, f, c):
        if not c:
            return
        tab = self.values.setdefault(n, {})
        v = self.F.add(tab.get(f, self.F.zero), self.F(c))
        if v:
            tab[f] = v
        else:
            tab.pop(f, None)

    # ---- linear structure
    def __add__(self, other: "NaturalOperation") -> "NaturalOperation":
        out = self.copy(f"({self.name}+{other.name})")
        for n, tab in other.values.items():
            for f, c in tab.items():
                out._acc(n, f, c)
        return out

    def scale(self, a) -> "NaturalOperation":
        out = self._new(self.degree, self.name)
        for n, tab in self.values.items():
            for f, c in tab.items():
                out._acc(n, f, self.F.mul(self.F(a), c))
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def __eq__(self, other):
        return isinstance(other, NaturalOperation) and (self - other).is_zero()

    # ---- structure
    def permute(self, pi: Sequence[int]) -> "NaturalOperation":
        """(op . pi)(a_1..a_k) = koszul * op(a_{pi[0]}, ..., a_{pi[k-1]})."""
        out = self._new(self.degree, f"{self.name}.{tuple(pi)}")
        for n, tab in self.values.items():
            for g, c in tab.items():
                f = [None] * self.arity
                for i, j in enumerate(pi):
                    f[j] = g[i]
                f = tuple(f)
                s = koszul_sign([len(x) - 1 for x in f], pi)
                out._acc(n, f, c if s > 0 else self.F.neg(c))
        return out

    def d_after(self) -> "NaturalOperation":
        """d o op."""
        out = self._new(self.degree + 1, f"d{self.name}")
        for n, tab in self.values.items():
            if n + 1 > self.cap:
                continue
            for g, c in tab.items():
                for i in range(n + 2):
                    f = tuple(_coface(i, x) for x in g)
                    out._acc(n + 1, f, c if i % 2 == 0 else self.F.neg(c))
        return out

    def d_before(self) -> "NaturalOperation":
        """op o d, d acting on the tensor factors with Koszul signs."""
        out = self._new(self.degree + 1, f"{self.name}d")
        for n, tab in self.values.items():
            for g, c in tab.items():
                pre = 0
                for j, gj in enumerate(g):
                    for t in range(len(gj)):
                        if len(gj) == 1:
                            break
                        fj = gj[:t] + gj[t + 1:]
                        s = (pre + t) % 2
                        out._acc(n, g[:j] + (fj,) + g[j + 1:], self.F.neg(c) if s else c)
                    pre += len(gj) - 1
        return out

    def D(self) -> "NaturalOperation":
        """Hom-complex differential d o op - (-1)^|op| op o d."""
        a, b = self.d_after(), self.d_before()
        return a - b if self.degree % 2 == 0 else a + b

    # ---- checks
    def naturality_violation(self) -> Optional[Tuple]:
        """First (n, i, faces) where op fails to vanish on the degenerate simplex s_i of Delta[n-1]."""
        for n, tab in sorted(self.values.items()):
            for i in range(n):
                acc: Dict = {}
                for f, c in tab.items():
                    g = tuple(_codegeneracy(i, x) for x in f)
                    if any(x is None for x in g):
                        continue
                    acc[g] = self.F.add(acc.get(g, self.F.zero), c)
                for g, c in sorted(acc.items()):
                    if c:
                        return (n, i, g)
        return None

    # ---- evaluation
    def __call__(self, A: CochainAlgebra, inputs: Sequence[Tuple[Vector, int]]) -> Vector:
        """Evaluate on cochains of a simplicial set; inputs are (vector, degree) pairs."""
        if len(inputs) != self.arity:
            raise ValueError("arity mismatch")
        degs = [q for _, q in inputs]
        n = sum(degs) + self.degree
        if n > self.cap:
            raise ValueError(f"output degree {n} beyond the model cap {self.cap}")
        if n < 0 or n not in A.N.basis:
            return {}
        terms = [(f, c) for f, c in self.at(n).items() if all(len(x) - 1 == q for x, q in zip(f, degs))]
        out: Vector = {}
        F = self.F
        for k in range(len(A.N.basis[n])):
            acc = F.zero
            for f, c in terms:
                v = c
                for (a, _), x in zip(inputs, f):
                    idx = A.face_index(n, k, x)
                    if idx is None or idx not in a:
                        v = F.zero
                        break
                    v = F.mul(v, a[idx])
                acc = F.add(acc, v)
            if acc:
                out[k] = acc
        return out


# ---------------------------------------------------------------- basic operations

def iterated_cup(F: Field, k: int, cap: int) -> NaturalOperation:
    """mu_0: the k-fold Alexander-Whitney product, theta_k(1_k; a_1, ..., a_k)."""
    op = NaturalOperation(F, k, 0, cap, name="mu0")
    for n in range(cap + 1):
        for cuts in combinations(range(n + k - 1), k - 1):
            u = [c - j for j, c in enumerate(cuts)]
            pts = [0] + u + [n]
            if any(pts[j] > pts[j + 1] for j in range(k)):
                continue
            f = tuple(tuple(range(pts[j], pts[j + 1] + 1)) for j in range(k))
            op._acc(n, f, 1)
    return op


def cup_i_operation(F: Field, i: int, cap: int) -> NaturalOperation:
    """The interval-formula cup_i product as a natural operation (F_2 for i > 0)."""
    op = NaturalOperation(F, 2, -i, cap, name=f"cup{i}")
    for n in range(cap + 1):
        for p in range(n + i + 1):
            for front, back in interval_splits(n, i, p):
                op._acc(n, (front, back), 1)
    return op


def zero_operation(F: Field, k: int, m: int, cap: int) -> NaturalOperation:
    return NaturalOperation(F, k, m, cap, name="0")


def cyclic(k: int) -> Tuple[int, ...]:
    """The word of alpha: (op . alpha)(a_1..a_k) = +- op(a_k, a_1, ..., a_{k-1})."""
    return (k - 1,) + tuple(range(k - 1))


def tau(op: NaturalOperation) -> NaturalOperation:
    """op o (1 - alpha)."""
    return op - op.permute(cyclic(op.arity))


def sigma(op: NaturalOperation) -> NaturalOperation:
    """op o (1 + alpha + ... + alpha^{k-1})."""
    out, cur = op.copy(), op
    for _ in range(op.arity - 1):
        cur = cur.permute(cyclic(op.arity))
        out = out + cur
    return out


# ---------------------------------------------------------------- lifting

def acyclic_models_lift(target: NaturalOperation, cap: Optional[int] = None,
                        name: str = "h") -> NaturalOperation:
    """A natural h of degree |target| - 1 with D(h) = target on all models <= cap.

    The unknowns are the universal values of h on Delta[0..cap]; D(h) = target
    and the degeneracy (naturality) conditions on h are imposed as one exact
    linear system.  Raises LiftError when it is unsolvable.
    """
    F, k, cap = target.F, target.arity, target.cap if cap is None else cap
    m = target.degree - 1
    unknowns = [(n, f) for n in range(cap + 1) for f in all_face_tuples(n, k, m)]
    rows: Dict[Tuple, int] = {}

    def row(key):
        if key not in rows:
            rows[key] = len(rows)
        return rows[key]

    cols = []
    for n, f in unknowns:
        e = NaturalOperation(F, k, m, cap, {n: {f: F.one}})
        col: Vector = {}
        for n2, tab in e.D().values.items():
            for g, c in tab.items():
                col[row(("eq", n2, g))] = c
        for i in range(n):
            g = tuple(_codegeneracy(i, x) for x in f)
            if all(x is not None for x in g):
                r = row(("nat", n, i, g))
                col[r] = F.add(col.get(r, F.zero), F.one)
        cols.append({r: c for r, c in col.items() if c})
    rhs: Vector = {}
    for n, tab in target.values.items():
        if n <= cap:
            for g, c in tab.items():
                if c:
                    rhs[row(("eq", n, g))] = c
    M = SparseMatrix.from_columns(F, len(rows), cols)
    x = solve_in_image(M, rhs)
    if x is NOT_IN_IMAGE:
        raise LiftError(f"no natural lift of {target.name} on models <= {cap}")
    h = NaturalOperation(F, k, m, cap, name=name)
    for j, c in x.items():
        n, f = unknowns[j]
        h._acc(n, f, c)
    return h


def lift_defect(h: NaturalOperation, target: NaturalOperation) -> NaturalOperation:
    """D(h) - target; zero iff the lift is exact on all models <= cap."""
    return h.D() - target


@dataclass
class MuFamily:
    p: int
    cap: int
    mu: List[NaturalOperation]

    def check(self) -> Optional[str]:
        """Verify D(mu_{2j+1}) = mu_{2j} tau and -D(mu_{2j+2}) = mu_{2j+1} sigma, and naturality."""
        for i in range(1, len(self.mu)):
            prev, cur = self.mu[i - 1], self.mu[i]
            target = tau(prev) if i % 2 else sigma(prev)
            lhs = cur.D() if i % 2 else cur.D().scale(-1)
            if not (lhs - target).is_zero():
                return f"recursion fails at mu_{i}"
        for i, m in enumerate(self.mu):
            bad = m.naturality_violation()
            if bad:
                return f"mu_{i} not normalized at {bad}"
        return None

    def power(self, A: CochainAlgebra, i: int, x: Vector, q: int) -> Vector:
        """mu_i composed with the diagonal: mu_i(x, ..., x)."""
        return self.mu[i](A, [(x, q)] * self.p)

    def sq(self, A: CochainAlgebra, s: int, q: int, coords: Sequence) -> List:
        """Sq^s on a class of H^q via mu_{q-s} (p = 2)."""
        if self.p != 2:
            raise ValueError("Steenrod squares need p = 2; use power() for raw classes")
        if s > q:
            return [A.F.zero] * A.H(q + s).dim
        return A.class_of(q + s, self.power(A, q - s, A.rep(q, coords), q))


def mu_family(p: int, i_max: int, cap: int, F: Optional[Field] = None) -> MuFamily:
    """mu_0 = p-fold cup from the unit section, then alternating tau/sigma lifts."""
    F = F or Field(p)
    mu = [iterated_cup(F, p, cap)]
    for i in range(1, i_max + 1):
        prev = mu[-1]
        if i % 2:
            h = acyclic_models_lift(tau(prev), cap, name=f"mu{i}")
        else:
            h = acyclic_models_lift(sigma(prev), cap, name=f"mu{i}").scale(-1)
            h.name = f"mu{i}"
        mu.append(h)
    return MuFamily(p, cap, mu)


def homotopy_between(a: NaturalOperation, b: NaturalOperation, cap: Optional[int] = None):
    """A natural k with D(k) = a - b, or None (a, b must be D-cycles of equal degree)."""
    try:
        return acyclic_models_lift(a - b, cap, name="k")
    except LiftError:
        return None


def cone_contraction(F: Field, n: int, q: int, c: Vector, index: Dict[int, Dict]) -> Vector:
    """Extra-degeneracy contraction of C^*(Delta[n]) toward vertex 0: (hc)(v) = c(0 v).

    index[q] maps vertex tuples to basis positions in degree q.  On positive
    degrees d h + h d = id; in degree 0, h d = id - (evaluation at vertex 0).
    """
    out: Vector = {}
    for v, k in index[q - 1].items():
        if v[0] == 0:
            continue
        j = index[q].get((0,) + v)
        if j is not None and j in c:
            out[k] = c[j]
    return out
