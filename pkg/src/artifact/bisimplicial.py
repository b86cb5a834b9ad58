"""Bisimplicial sets: beta X, the Serre bisimplicial set S_{p,q} f, and their
normalized cochain bicomplexes.

A bisimplex of S_{p,q} f is a pair (u, w) with u a p-simplex of B and
w: Delta[p] x Delta[q] -> E over u.  The map w is stored as the tuple of its
values on the shuffle cells of Delta[p] x Delta[q] (lattice paths from (0,0)
to (p,q)), each an E-simplex of dimension p+q.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Field, SparseMatrix, axpy
from .simplicial import SimplicialError, SimplicialMap, SimplicialSet, Table


# ---------------------------------------------------------------- grid cells

@lru_cache(maxsize=None)
def cells(p: int, q: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Shuffle cells of Delta[p] x Delta[q] as vertex paths, lexicographic."""
    out = []
    for hs in combinations(range(p + q), p):
        hs = set(hs)
        a = b = 0
        path = [(0, 0)]
        for k in range(p + q):
            if k in hs:
                a += 1
            else:
                b += 1
            path.append((a, b))
        out.append(tuple(path))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def _cell_index(p: int, q: int) -> Dict:
    return {c: k for k, c in enumerate(cells(p, q))}


@lru_cache(maxsize=None)
def face_table(p: int, q: int, i: int, horizontal: bool) -> Tuple[Tuple[int, int], ...]:
    """For d_i in one direction: each cell of the smaller grid -> (cell of (p,q), face index)."""
    sp, sq = (p - 1, q) if horizontal else (p, q - 1)
    top = p if horizontal else q
    idx = _cell_index(p, q)
    out = []
    for c in cells(sp, sq):
        if horizontal:
            path = [(a if a < i else a + 1, b) for a, b in c]
        else:
            path = [(a, b if b < i else b + 1) for a, b in c]
        if i == 0:
            k = 0
            path.insert(0, (0, 0))
        elif i == top:
            k = len(path)
            path.append((p, q))
        else:
            k = None
            for t in range(len(path) - 1):
                (a0, b0), (a1, b1) = path[t], path[t + 1]
                if horizontal and a0 == i - 1 and a1 == i + 1:
                    k, v = t + 1, (i, b0)
                    break
                if not horizontal and b0 == i - 1 and b1 == i + 1:
                    k, v = t + 1, (a0, i)
                    break
            path.insert(k, v)
        out.append((idx[tuple(path)], k))
    return tuple(out)


@lru_cache(maxsize=None)
def degen_table(p: int, q: int, i: int, horizontal: bool) -> Tuple[Tuple[int, int], ...]:
    """For s_i: each cell of the bigger grid -> (cell of (p,q), degeneracy index)."""
    bp, bq = (p + 1, q) if horizontal else (p, q + 1)
    idx = _cell_index(p, q)
    out = []
    for c in cells(bp, bq):
        if horizontal:
            path = [(a if a <= i else a - 1, b) for a, b in c]
        else:
            path = [(a, b if b <= i else b - 1) for a, b in c]
        k = next(t for t in range(len(path) - 1) if path[t] == path[t + 1])
        del path[k + 1]
        out.append((idx[tuple(path)], k))
    return tuple(out)


@lru_cache(maxsize=None)
def adjacency(p: int, q: int) -> Tuple[Tuple[Tuple[int, int, int], ...], ...]:
    """For each cell j, the earlier cells sharing a codimension-one face: (j2, k, k2)."""
    cs = cells(p, q)
    out = []
    for j, c in enumerate(cs):
        nb = []
        for j2 in range(j):
            diff = [t for t in range(len(c)) if c[t] != cs[j2][t]]
            if len(diff) == 1:
                nb.append((j2, diff[0], diff[0]))
        out.append(tuple(nb))
    return tuple(out)


def _first_coords(c) -> Tuple[int, ...]:
    return tuple(a for a, _ in c)


# ---------------------------------------------------------------- interface

class Bisimplicial:
    """Finite bisimplicial data through total dimension ``cap``."""

    cap: int

    def count(self, p: int, q: int) -> int:
        raise NotImplementedError

    def hfaces(self, p: int, q: int) -> List[Tuple[int, ...]]:
        raise NotImplementedError

    def vfaces(self, p: int, q: int) -> List[Tuple[int, ...]]:
        raise NotImplementedError

    def nondegenerate(self, p: int, q: int) -> List[int]:
        raise NotImplementedError


class Beta(Bisimplicial):
    """(beta X)_{p,q} = X_p, constant in the vertical direction."""

    def __init__(self, X: SimplicialSet, cap: int):
        self.T = Table(X, cap)
        self.cap = cap

    def count(self, p, q):
        return self.T.size(p)

    def hfaces(self, p, q):
        return self.T.face[p] if p else [()] * self.T.size(0)

    def vfaces(self, p, q):
        return [tuple([k] * (q + 1)) for k in range(self.T.size(p))]

    def nondegenerate(self, p, q):
        return self.T.nondegenerate(p) if q == 0 else []


class SerreBisimplicial(Bisimplicial):
    """S_{p,q} f for a surjection f: E -> B, enumerated for p + q <= cap."""

    def __init__(self, f: SimplicialMap, cap: int, check_surjective: bool = True):
        self.f, self.cap = f, cap
        E, B = f.source, f.target
        self.E = Table(E, cap)
        self.B = Table(B, cap)
        self.fmap = [[self.B.index[n][f(n, x)] for x in self.E.simp[n]] for n in range(cap + 1)]
        if check_surjective:
            for n in range(cap + 1):
                hit = set(self.fmap[n])
                miss = [self.B.simp[n][k] for k in self.B.nondegenerate(n) if k not in hit]
                if miss:
                    raise SimplicialError(f"f is not surjective: misses {miss[0]!r} in dimension {n}")
        self._fiber: Dict = {}
        self.items: Dict[Tuple[int, int], List[Tuple]] = {}
        self.index: Dict[Tuple[int, int], Dict] = {}
        for n in range(cap + 1):
            for p in range(n + 1):
                self._enumerate(p, n - p)
        self._hf: Dict = {}
        self._vf: Dict = {}
        self._nd: Dict = {}

    # ---- enumeration
    def _fibers(self, n: int) -> Dict[int, List[int]]:
        key = ("fib", n)
        if key not in self._fiber:
            d: Dict[int, List[int]] = {}
            for e, b in enumerate(self.fmap[n]):
                d.setdefault(b, []).append(e)
            self._fiber[key] = d
        return self._fiber[key]

    def _by_face(self, n: int, target: int, k: int) -> Dict[int, List[int]]:
        key = ("face", n, target, k)
        if key not in self._fiber:
            d: Dict[int, List[int]] = {}
            fc = self.E.face[n]
            for e in self._fibers(n).get(target, []):
                d.setdefault(fc[e][k], []).append(e)
            self._fiber[key] = d
        return self._fiber[key]

    def _enumerate(self, p: int, q: int) -> None:
        n = p + q
        cs = cells(p, q)
        adj = adjacency(p, q)
        etas = [_first_coords(c) for c in cs]
        fc = self.E.face[n] if n else None
        out: List[Tuple] = []
        fib = self._fibers(n)
        for u in range(self.B.size(p)):
            targets = [self.B.degenerate_by(p, u, eta) for eta in etas]
            w = [0] * len(cs)

            def rec(j: int):
                if j == len(cs):
                    out.append((u, tuple(w)))
                    return
                cons = adj[j]
                if not cons:
                    cand = fib.get(targets[j], [])
                else:
                    j2, k, k2 = cons[0]
                    cand = self._by_face(n, targets[j], k).get(fc[w[j2]][k2], [])
                    if len(cons) > 1:
                        rest = cons[1:]
                        cand = [e for e in cand if all(fc[e][kk] == fc[w[jj]][kk2] for jj, kk, kk2 in rest)]
                for e in cand:
                    w[j] = e
                    rec(j + 1)

            rec(0)
        self.items[(p, q)] = out
        self.index[(p, q)] = {x: k for k, x in enumerate(out)}

    # ---- operators on explicit bisimplices
    def hface_x(self, p: int, q: int, x, i: int):
        u, w = x
        Ef = self.E.face[p + q]
        return (self.B.face[p][u][i], tuple(Ef[w[c]][k] for c, k in face_table(p, q, i, True)))

    def vface_x(self, p: int, q: int, x, j: int):
        u, w = x
        Ef = self.E.face[p + q]
        return (u, tuple(Ef[w[c]][k] for c, k in face_table(p, q, j, False)))

    def hdeg_x(self, p: int, q: int, x, i: int):
        u, w = x
        Ed = self.E.degen[p + q]
        return (self.B.degen[p][u][i], tuple(Ed[w[c]][k] for c, k in degen_table(p, q, i, True)))

    def vdeg_x(self, p: int, q: int, x, j: int):
        u, w = x
        Ed = self.E.degen[p + q]
        return (u, tuple(Ed[w[c]][k] for c, k in degen_table(p, q, j, False)))

    def is_hdegenerate(self, p, q, x) -> bool:
        return any(self.hdeg_x(p - 1, q, self.hface_x(p, q, x, i), i) == x for i in range(p))

    def is_vdegenerate(self, p, q, x) -> bool:
        return any(self.vdeg_x(p, q - 1, self.vface_x(p, q, x, j), j) == x for j in range(q))

    # ---- interface
    def count(self, p, q):
        return len(self.items[(p, q)])

    def hfaces(self, p, q):
        if (p, q) not in self._hf:
            idx = self.index.get((p - 1, q), {})
            self._hf[(p, q)] = [tuple(idx[self.hface_x(p, q, x, i)] for i in range(p + 1)) if p else ()
                                for x in self.items[(p, q)]]
        return self._hf[(p, q)]

    def vfaces(self, p, q):
        if (p, q) not in self._vf:
            idx = self.index.get((p, q - 1), {})
            self._vf[(p, q)] = [tuple(idx[self.vface_x(p, q, x, j)] for j in range(q + 1)) if q else ()
                                for x in self.items[(p, q)]]
        return self._vf[(p, q)]

    def nondegenerate(self, p, q):
        if (p, q) not in self._nd:
            self._nd[(p, q)] = [k for k, x in enumerate(self.items[(p, q)])
                                if not self.is_hdegenerate(p, q, x) and not self.is_vdegenerate(p, q, x)]
        return self._nd[(p, q)]

    def fiber_simplices(self, p: int, q: int, u: int) -> List[int]:
        """Indices of the q-simplices of the fiber set over the base simplex u."""
        return [k for k, x in enumerate(self.items[(p, q)]) if x[0] == u]

    def identity_violation(self) -> Optional[str]:
        """Simplicial identities in both directions and their commutation."""
        for (p, q), xs in self.items.items():
            n = p + q
            for x in xs:
                for j in range(p + 1):
                    for i in range(j):
                        if p >= 2 and self.hface_x(p - 1, q, self.hface_x(p, q, x, j), i) != \
                                self.hface_x(p - 1, q, self.hface_x(p, q, x, i), j - 1):
                            return f"horizontal d_{i}d_{j} at {(p, q)}"
                for j in range(q + 1):
                    for i in range(j):
                        if q >= 2 and self.vface_x(p, q - 1, self.vface_x(p, q, x, j), i) != \
                                self.vface_x(p, q - 1, self.vface_x(p, q, x, i), j - 1):
                            return f"vertical d_{i}d_{j} at {(p, q)}"
                if p >= 1 and q >= 1:
                    for i in range(p + 1):
                        for j in range(q + 1):
                            a = self.vface_x(p - 1, q, self.hface_x(p, q, x, i), j)
                            b = self.hface_x(p, q - 1, self.vface_x(p, q, x, j), i)
                            if a != b:
                                return f"d^h_{i} d^v_{j} at {(p, q)}"
                if n + 1 <= self.cap:
                    for i in range(p + 1):
                        y = self.hdeg_x(p, q, x, i)
                        if y not in self.index[(p + 1, q)]:
                            return f"horizontal s_{i} leaves S at {(p, q)}"
                        if self.hface_x(p + 1, q, y, i) != x or self.hface_x(p + 1, q, y, i + 1) != x:
                            return f"horizontal d s_{i} at {(p, q)}"
                    for j in range(q + 1):
                        y = self.vdeg_x(p, q, x, j)
                        if y not in self.index[(p, q + 1)]:
                            return f"vertical s_{j} leaves S at {(p, q)}"
                        if self.vface_x(p, q + 1, y, j) != x or self.vface_x(p, q + 1, y, j + 1) != x:
                            return f"vertical d s_{j} at {(p, q)}"
        return None


def serre_bisimplicial(f: SimplicialMap, dim_cap: int) -> SerreBisimplicial:
    """S_{p,q} f enumerated for p + q <= dim_cap + 1."""
    return SerreBisimplicial(f, dim_cap + 1)


def beta(X: SimplicialSet, dim_cap: int) -> Beta:
    return Beta(X, dim_cap + 1)


# ---------------------------------------------------------------- bicomplex

class Bicomplex:
    """Pieces C^{p,q} with d_h: (p,q)->(p+1,q) and d_v: (p,q)->(p,q+1)."""

    def __init__(self, F: Field, dims: Dict[Tuple[int, int], int],
                 dh: Dict[Tuple[int, int], SparseMatrix], dv: Dict[Tuple[int, int], SparseMatrix],
                 top: int, labels: Optional[Dict] = None):
        self.F, self.dims, self.dh, self.dv, self.top = F, dims, dh, dv, top
        self.labels = labels or {}

    def dim(self, p, q) -> int:
        return self.dims.get((p, q), 0)

    def _get(self, table, key, shape):
        m = table.get(key)
        return m if m is not None else SparseMatrix.zero(self.F, *shape)

    def d_h(self, p, q) -> SparseMatrix:
        return self._get(self.dh, (p, q), (self.dim(p + 1, q), self.dim(p, q)))

    def d_v(self, p, q) -> SparseMatrix:
        return self._get(self.dv, (p, q), (self.dim(p, q + 1), self.dim(p, q)))

    def violation(self) -> Optional[str]:
        for (p, q) in self.dims:
            if p + q + 2 > self.top:
                continue
            if not (self.d_h(p + 1, q) @ self.d_h(p, q)).is_zero():
                return f"d_h^2 != 0 at {(p, q)}"
            if not (self.d_v(p, q + 1) @ self.d_v(p, q)).is_zero():
                return f"d_v^2 != 0 at {(p, q)}"
            a = self.d_v(p + 1, q) @ self.d_h(p, q)
            b = self.d_h(p, q + 1) @ self.d_v(p, q)
            tot = [axpy(self.F, dict(ca), 1, cb) for ca, cb in zip(a.columns(), b.columns())]
            if any(tot):
                return f"d_h d_v + d_v d_h != 0 at {(p, q)}"
        return None

    def total_degree_basis(self, n: int) -> List[Tuple[int, int, int]]:
        """Basis of Tot^n as (p, q, k), ordered by p ascending."""
        return [(p, n - p, k) for p in range(0, n + 1) for k in range(self.dim(p, n - p))]

    def total(self):
        """Total complex with the column filtration (filtration degree = p)."""
        from .spectral import FilteredComplex
        bases = {n: self.total_degree_basis(n) for n in range(self.top + 1)}
        pos = {n: {b: i for i, b in enumerate(bs)} for n, bs in bases.items()}
        d = {}
        for n in range(self.top):
            cols = []
            for (p, q, k) in bases[n]:
                col = {}
                for r, v in self.d_h(p, q).column(k).items():
                    col[pos[n + 1][(p + 1, q, r)]] = v
                for r, v in self.d_v(p, q).column(k).items():
                    col[pos[n + 1][(p, q + 1, r)]] = v
                cols.append(col)
            d[n] = SparseMatrix.from_columns(self.F, len(bases[n + 1]), cols)
        filt = {n: [b[0] for b in bs] for n, bs in bases.items()}
        return FilteredComplex(self.F, {n: len(b) for n, b in bases.items()}, d, filt, self.top - 1, bases)


def normalized_cochains_bi(Z: Bisimplicial, F: Field, dim_cap: Optional[int] = None) -> Bicomplex:
    """Dual of the bisimplices nondegenerate in both directions.

    (d_h c)(y) = sum (-1)^i c(d^h_i y),  (d_v c)(y) = (-1)^p sum (-1)^j c(d^v_j y).
    """
    top = Z.cap if dim_cap is None else min(Z.cap, dim_cap + 1)
    nd = {}
    pos = {}
    for n in range(top + 1):
        for p in range(n + 1):
            nd[(p, n - p)] = Z.nondegenerate(p, n - p)
            pos[(p, n - p)] = {k: i for i, k in enumerate(nd[(p, n - p)])}
    dims = {key: len(v) for key, v in nd.items()}
    dh, dv = {}, {}
    for n in range(top):
        for p in range(n + 1):
            q = n - p
            src = pos[(p, q)]
            # horizontal
            cols = [dict() for _ in nd[(p, q)]]
            hf = Z.hfaces(p + 1, q)
            for r, y in enumerate(nd[(p + 1, q)]):
                for i, fy in enumerate(hf[y]):
                    c = src.get(fy)
                    if c is not None:
                        cols[c][r] = cols[c].get(r, 0) + (1 if i % 2 == 0 else -1)
            dh[(p, q)] = SparseMatrix.from_columns(F, len(nd[(p + 1, q)]), cols)
            cols = [dict() for _ in nd[(p, q)]]
            vf = Z.vfaces(p, q + 1)
            sgn = -1 if p % 2 else 1
            for r, y in enumerate(nd[(p, q + 1)]):
                for j, fy in enumerate(vf[y]):
                    c = src.get(fy)
                    if c is not None:
                        cols[c][r] = cols[c].get(r, 0) + sgn * (1 if j % 2 == 0 else -1)
            dv[(p, q)] = SparseMatrix.from_columns(F, len(nd[(p, q + 1)]), cols)
    return Bicomplex(F, dims, dh, dv, top, labels=nd)
