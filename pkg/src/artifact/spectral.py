"""Spectral sequences of filtered complexes, the Leray-Serre pipeline built on
S_{p,q} f, local systems, transgression and the Kudo check.

Pages follow the usual formulas for a decreasing filtration F^p:

    Z_r^p = F^p  intersect  d^{-1} F^{p+r}
    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})

Every class on every page keeps an explicit cochain representative in the
total complex.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import (NOT_IN_IMAGE, CochainComplex, CohomologyBasis, Field, Reducer, SparseMatrix, Vector,
                     _from_bits, _to_bits, axpy, betti_numbers, rank_kernel_image)
from .simplicial import NormalizedCochains, SimplicialSet

INF = 10 ** 6


class WindowError(ValueError):
    pass


# ---------------------------------------------------------------- backends

class _DictOps:
    def __init__(self, F: Field):
        self.F = F

    def native(self, v: Vector):
        return dict(v)

    def plain(self, v) -> Vector:
        return dict(v)

    def zero(self):
        return {}

    def add(self, x, y, a=1):
        return axpy(self.F, dict(x), self.F(a), y)

    def window(self, v, lo: int, hi: int):
        return {k: c for k, c in v.items() if lo <= k < hi}

    def apply(self, cols: List, x):
        out: Vector = {}
        for j, a in x.items():
            axpy(self.F, out, a, cols[j])
        return out

    def reducer(self, track: bool):
        return _DictReducer(self.F, track)

    def coeff(self, combo, tag):
        return combo.get(tag, self.F.zero)


class _DictReducer:
    def __init__(self, F, track):
        self.R = Reducer(F, track)

    def add(self, v, tag):
        ok = self.R.add(v, tag)
        self.relation = None if ok else self.R._last_relation
        return ok

    def reduce(self, v):
        return self.R.reduce(v)

    @property
    def rank(self):
        return self.R.rank


class _BitOps:
    F = Field(2)

    def native(self, v: Vector) -> int:
        return _to_bits(v)

    def plain(self, v: int) -> Vector:
        return _from_bits(v)

    def zero(self):
        return 0

    def add(self, x, y, a=1):
        return x ^ y if a % 2 else x

    def window(self, v, lo, hi):
        return v & (((1 << hi) - 1) ^ ((1 << lo) - 1))

    def apply(self, cols, x):
        out = 0
        while x:
            low = x & -x
            out ^= cols[low.bit_length() - 1]
            x ^= low
        return out

    def reducer(self, track):
        return _BitR(track)

    def coeff(self, combo, tag):
        return (combo >> tag) & 1


class _BitR:
    def __init__(self, track):
        self.R = Reducer(Field(2), track)

    def add(self, v, tag):
        ok = self.R.add_bits(v, tag)
        self.relation = None if ok else self.R._last_relation_bits
        return ok

    def reduce(self, v):
        return self.R.reduce_bits(v)

    @property
    def rank(self):
        return self.R.rank


def _ops(F: Field):
    return _BitOps() if F.p == 2 else _DictOps(F)


# ---------------------------------------------------------------- filtered complexes

@dataclass
class FilteredComplex:
    """Cochain complex whose degree-n basis carries nondecreasing filtration degrees.

    ``top`` is the trusted window: pages are computed for total degree <= top,
    which needs d^n for n <= top.
    """

    F: Field
    dims: Dict[int, int]
    d: Dict[int, SparseMatrix]
    filt: Dict[int, List[int]]
    top: int
    labels: Dict[int, list] = dc_field(default_factory=dict)

    def __post_init__(self):
        for n, fl in self.filt.items():
            if any(b < a for a, b in zip(fl, fl[1:])):
                raise ValueError(f"filtration degrees must be sorted in degree {n}")
        for n in range(0, self.top + 1):
            if n not in self.d and self.dims.get(n, 0) and self.dims.get(n + 1, 0):
                raise WindowError(f"d^{n} missing for trusted window {self.top}")

    def dim(self, n):
        return self.dims.get(n, 0)

    def diff(self, n) -> SparseMatrix:
        if n in self.d:
            return self.d[n]
        return SparseMatrix.zero(self.F, self.dim(n + 1), self.dim(n))

    def cochain_complex(self) -> CochainComplex:
        return CochainComplex(self.F, dict(self.dims), dict(self.d))

    def filtration_preserved(self) -> bool:
        for n in range(self.top + 1):
            fl, fl1 = self.filt.get(n, []), self.filt.get(n + 1, [])
            for j, col in enumerate(self.diff(n).columns()):
                if any(fl1[r] < fl[j] for r in col):
                    return False
        return True

    def cohomology_dims(self) -> Dict[int, int]:
        b = betti_numbers(self.cochain_complex(), self.top)
        return {n: b[n] for n in range(self.top + 1)}


# ---------------------------------------------------------------- spectral sequence

class SpectralSequence:
    """Pages of the spectral sequence of a FilteredComplex (lazy, cached)."""

    def __init__(self, C: FilteredComplex, r_max: int = 4):
        if not C.filtration_preserved():
            raise ValueError("differential does not preserve the filtration")
        self.C, self.F, self.r_max = C, C.F, r_max
        self.ops = _ops(C.F)
        self._cols = {n: [self.ops.native(c) for c in C.diff(n).columns()] for n in range(C.top + 1)}
        self._Z: Dict = {}
        self._E: Dict = {}
        self._dr: Dict = {}
        self.pmin = min((min(f) for f in C.filt.values() if f), default=0)
        self.pmax = max((max(f) for f in C.filt.values() if f), default=0)

    # filtration helpers
    def _start(self, n: int, p: int) -> int:
        return bisect_left(self.C.filt.get(n, []), p)

    def _norm_r(self, n: int, p: int, r: int) -> int:
        fl = self.C.filt.get(n + 1, [])
        span = (fl[-1] if fl else p) - p + 1
        return min(r, max(span, 1))

    def Z(self, n: int, p: int, r: int) -> List:
        """Basis of Z_r^p in degree n (native vectors)."""
        if n > self.C.top:
            raise WindowError(f"degree {n} outside trusted window {self.C.top}")
        ops = self.ops
        lo_n = self._start(n, p)
        if r <= 0:
            return [ops.native({j: 1}) for j in range(lo_n, self.C.dim(n))]
        r = self._norm_r(n, p, r)
        key = (n, p, r)
        if key in self._Z:
            return self._Z[key]
        lo, hi = self._start(n + 1, p), self._start(n + 1, p + r)
        R = ops.reducer(True)
        ker = []
        cols = self._cols[n]
        for j in range(lo_n, self.C.dim(n)):
            if not R.add(ops.window(cols[j], lo, hi), j):
                ker.append(R.relation)
        self._Z[key] = ker
        return ker

    def boundary_part(self, n: int, p: int, r: int) -> List:
        """d Z_{r-1}^{p-r+1} in degree n."""
        if n == 0:
            return []
        cols = self._cols[n - 1]
        return [self.ops.apply(cols, z) for z in self.Z(n - 1, p - r + 1, r - 1)]

    def _page(self, n: int, p: int, r: int):
        r = min(r, INF)
        key = (n, p, r)
        if key in self._E:
            return self._E[key]
        den = list(self.Z(n, p + 1, r - 1)) + self.boundary_part(n, p, r)
        R = self.ops.reducer(True)
        m = 0
        for v in den:
            R.add(v, m)
            m += 1
        reps = []
        for z in self.Z(n, p, r):
            if R.add(z, m + len(reps)):
                reps.append(z)
        self._E[key] = (R, m, reps)
        return self._E[key]

    def dim(self, r: int, p: int, q: int) -> int:
        n = p + q
        if n < 0 or p < self.pmin or p > self.pmax or n > self.C.top:
            return 0
        return len(self._page(n, p, r)[2])

    def reps(self, r: int, p: int, q: int) -> List[Vector]:
        return [self.ops.plain(z) for z in self._page(p + q, p, r)[2]]

    def coords(self, r: int, p: int, n: int, v) -> Optional[List]:
        """Coordinates of v in the basis of E_r^p (degree n), None if v is not in Z_r^p."""
        R, m, reps = self._page(n, p, r)
        res, combo = R.reduce(self.ops.native(v) if isinstance(v, dict) else v)
        if res:
            return None
        return [self.ops.coeff(combo, m + i) for i in range(len(reps))]

    def in_denominator(self, r: int, p: int, n: int, v) -> bool:
        c = self.coords(r, p, n, v)
        return c is not None and not any(c)

    def page(self, r: int) -> Dict[Tuple[int, int], int]:
        out = {}
        for n in range(self.C.top + 1):
            for p in range(self.pmin, self.pmax + 1):
                q = n - p
                d = self.dim(r, p, q)
                if d:
                    out[(p, q)] = d
        return out

    def d_r(self, r: int, p: int, q: int) -> SparseMatrix:
        """Matrix of d_r: E_r^{p,q} -> E_r^{p+r,q-r+1} in the chosen bases."""
        n = p + q
        if n + 1 > self.C.top:
            raise WindowError(f"d_{r} out of degree {n} needs window >= {n + 1}")
        key = (r, p, q)
        if key in self._dr:
            return self._dr[key]
        src = self._page(n, p, r)[2]
        tgt_dim = self.dim(r, p + r, q - r + 1)
        cols = []
        for z in src:
            dz = self.ops.apply(self._cols[n], z)
            c = self.coords(r, p + r, n + 1, dz)
            if c is None:
                raise AssertionError("d of a Z_r representative left Z_r")
            cols.append({i: x for i, x in enumerate(c) if x})
        m = SparseMatrix.from_columns(self.F, tgt_dim, cols)
        self._dr[key] = m
        return m

    def kernel_dim(self, r: int, p: int, q: int) -> int:
        """dim ker d_r at (p,q), computed from Z_{r+1} (works at the window edge)."""
        n = p + q
        R, m, reps = self._page(n, p, r)
        R2 = self.ops.reducer(False)
        for v in list(self.Z(n, p + 1, r - 1)) + self.boundary_part(n, p, r):
            R2.add(v, 0)
        base = R2.rank
        for z in self.Z(n, p, r + 1):
            R2.add(z, 0)
        return R2.rank - base

    # ---- invariants
    def recomputation_failures(self, r_upto: Optional[int] = None) -> List[str]:
        """E_{r+1} must equal the cohomology of (E_r, d_r), and d_r d_r = 0."""
        bad = []
        r_upto = self.r_max if r_upto is None else r_upto
        for r in range(0, r_upto):
            for n in range(self.C.top + 1):
                for p in range(self.pmin, self.pmax + 1):
                    q = n - p
                    if self.dim(r, p, q) == 0 and self.dim(r + 1, p, q) == 0:
                        continue
                    if n + 1 <= self.C.top:
                        dr = self.d_r(r, p, q)
                        ker = dr.ncols - _rank(dr)
                        if p + r <= self.pmax and n + 2 <= self.C.top:
                            nxt = self.d_r(r, p + r, q - r + 1)
                            if not (nxt @ dr).is_zero():
                                bad.append(f"d_{r} d_{r} != 0 at {(p, q)}")
                    else:
                        ker = self.kernel_dim(r, p, q)
                    img = 0
                    if n - 1 >= 0 and p - r >= self.pmin:
                        img = _rank(self.d_r(r, p - r, q + r - 1))
                    if ker - img != self.dim(r + 1, p, q):
                        bad.append(f"E_{r + 1}{(p, q)}: {self.dim(r + 1, p, q)} != {ker} - {img}")
        return bad

    def convergence(self) -> Dict[int, Tuple[int, int]]:
        """n -> (sum_p dim E_inf^{p,n-p}, dim H^n(Tot))."""
        H = self.C.cohomology_dims()
        out = {}
        for n in range(self.C.top + 1):
            tot = sum(self.dim(INF, p, n - p) for p in range(self.pmin, self.pmax + 1))
            out[n] = (tot, H[n])
        return out

    def converges(self) -> bool:
        return all(a == b for a, b in self.convergence().values())

    def degenerates_at(self, r: int) -> bool:
        return self.page(r) == self.page(INF)

    def report(self, r_list: Optional[Sequence[int]] = None) -> Dict:
        r_list = list(range(0, self.r_max + 1)) if r_list is None else list(r_list)
        pages = {str(r): {f"{p},{q}": d for (p, q), d in sorted(self.page(r).items())} for r in r_list}
        pages["inf"] = {f"{p},{q}": d for (p, q), d in sorted(self.page(INF).items())}
        conv = {str(n): {"E_inf": a, "H": b} for n, (a, b) in self.convergence().items()}
        return {"window": self.C.top, "pages": pages, "convergence": conv}


def _rank(m: SparseMatrix) -> int:
    return rank_kernel_image(m)[0]


def first_filtration_ss(b, degree_window: Optional[int] = None, r_max: int = 4) -> SpectralSequence:
    """Spectral sequence of the column filtration of a Bicomplex."""
    C = b.total()
    if degree_window is not None:
        if degree_window > C.top:
            raise WindowError(f"window {degree_window} needs the bicomplex through degree {degree_window + 1}")
        C.top = degree_window
    return SpectralSequence(C, r_max)


# ---------------------------------------------------------------- Leray-Serre pipeline

class FibreSet(SimplicialSet):
    """The simplicial set q -> {w | (u, w) in S_{p,q} f} over a fixed base simplex u.

    Simplices are the global indices of the bisimplices of S_{p,q} f.
    """

    def __init__(self, S, p: int, u: int, top: int):
        self.S, self.p, self.u = S, p, u
        self.top = min(top, S.cap - p)
        self.simp = {q: [k for k, x in enumerate(S.items[(p, q)]) if x[0] == u] for q in range(self.top + 1)}
        self.nd = {q: [k for k in ks if not S.is_vdegenerate(p, q, S.items[(p, q)][k])]
                   for q, ks in self.simp.items()}
        self._ndset = {q: set(v) for q, v in self.nd.items()}
        self.name = f"F({p},{u})"

    def simplices(self, q):
        return self.simp[q]

    def nondegenerate(self, q):
        return self.nd[q]

    def is_degenerate(self, q, k):
        return k not in self._ndset[q]

    def face(self, q, k, j):
        return self.S.vfaces(self.p, q)[k][j]

    def degen(self, q, k, j):
        S = self.S
        return S.index[(self.p, q + 1)][S.vdeg_x(self.p, q, S.items[(self.p, q)][k], j)]

    def cochains(self, F: Field) -> NormalizedCochains:
        return NormalizedCochains(self, F, self.top - 1)


class LocalSystem:
    """u -> F(u), the normalized cochains of the fibre set over each base simplex,
    with restriction maps induced by horizontal faces."""

    def __init__(self, S, F: Field, top: int):
        self.S, self.F, self.top = S, F, top
        self.B = S.B
        self.levels: Dict[Tuple[int, int], FibreSet] = {}
        self._N: Dict = {}
        self._H: Dict = {}

    def level(self, p: int, u: int) -> FibreSet:
        if (p, u) not in self.levels:
            self.levels[(p, u)] = FibreSet(self.S, p, u, self.top - p + 1)
        return self.levels[(p, u)]

    def cochains(self, p: int, u: int) -> NormalizedCochains:
        if (p, u) not in self._N:
            self._N[(p, u)] = self.level(p, u).cochains(self.F)
        return self._N[(p, u)]

    def cohomology(self, p: int, u: int, s: int) -> CohomologyBasis:
        key = (p, u, s)
        if key not in self._H:
            self._H[key] = CohomologyBasis(self.cochains(p, u).complex, s)
        return self._H[key]

    def restriction(self, p: int, u: int, i: int, s: int) -> SparseMatrix:
        """H^s(F(d_i u)) -> H^s(F(u)) in the chosen bases."""
        lv = self.level(p, u)
        w = self.B.face[p][u][i]
        Hs, Ht = self.cohomology(p - 1, w, s), self.cohomology(p, u, s)
        pos = self.cochains(p - 1, w).index[s]
        items = self.S.items[(p, s)]
        idx = self.S.index[(p - 1, s)]
        cols = []
        for z in Hs.reps:
            pulled = {}
            for r, k in enumerate(lv.nd[s]):
                c = pos.get(idx[self.S.hface_x(p, s, items[k], i)])
                if c is not None and c in z:
                    pulled[r] = z[c]
            c = Ht.coords(pulled)
            cols.append({a: v for a, v in enumerate(c) if v})
        return SparseMatrix.from_columns(self.F, Ht.dim, cols)

    def functoriality_violation(self, s: int) -> Optional[str]:
        """Restrictions must satisfy the face relations d_i d_j = d_{j-1} d_i on cohomology."""
        for p in range(2, self.top + 1):
            for u in self.B.nondegenerate(p):
                for j in range(p + 1):
                    for i in range(j):
                        a, b = self.B.face[p][u][j], self.B.face[p][u][i]
                        if not (self.B.nd[p - 1][a] and self.B.nd[p - 1][b]):
                            continue
                        lhs = self.restriction(p, u, j, s) @ self.restriction(p - 1, a, i, s)
                        rhs = self.restriction(p, u, i, s) @ self.restriction(p - 1, b, j - 1, s)
                        if lhs != rhs:
                            return f"restrictions do not compose at simplex {u} dim {p}"
        return None

    def coefficient_complex(self, s: int, top: Optional[int] = None) -> CochainComplex:
        """C^r(B; H^s(F)): sum over nondegenerate r-simplices, alternating restrictions."""
        top = self.top if top is None else top
        blocks, offs, dims = {}, {}, {}
        for r in range(top + 2):
            nd = self.B.nondegenerate(r) if r <= self.B.top else []
            o, off = 0, {}
            for u in nd:
                off[u] = o
                o += self.cohomology(r, u, s).dim
            offs[r], dims[r] = off, o
        d = {}
        for r in range(top + 1):
            cols = [dict() for _ in range(dims[r])]
            for v, ov in offs[r + 1].items():
                for i in range(r + 2):
                    w = self.B.face[r + 1][v][i]
                    if w not in offs[r]:
                        continue
                    m = self.restriction(r + 1, v, i, s)
                    for a, col in enumerate(m.columns()):
                        for b, x in col.items():
                            c = cols[offs[r][w] + a]
                            c[ov + b] = c.get(ov + b, 0) + (x if i % 2 == 0 else -x)
            d[r] = SparseMatrix.from_columns(self.F, dims[r + 1], cols)
        return CochainComplex(self.F, dims, d)

    def e1_dims(self, top: Optional[int] = None) -> Dict[Tuple[int, int], int]:
        top = self.top if top is None else top
        out = {}
        for n in range(top + 1):
            for r in range(n + 1):
                k = sum(self.cohomology(r, u, n - r).dim for u in self.B.nondegenerate(r))
                if k:
                    out[(r, n - r)] = k
        return out

    def e2_dims(self, top: Optional[int] = None) -> Dict[Tuple[int, int], int]:
        top = self.top if top is None else top
        out = {}
        for s in range(top + 1):
            b = betti_numbers(self.coefficient_complex(s, top - s), top - s)
            for r, k in enumerate(b):
                if k:
                    out[(r, s)] = k
        return out


@dataclass
class Transgression:
    fiber_class: List          # coordinates in H^n(F) at the base point
    differential: List         # coordinates of d_{n+1}[y] in E_{n+1}^{n+1,0}
    preimages: List[List]      # particular solution first, then kernel directions
    representative: Vector     # Tot cocycle-mod-F^{n+1} representing [y]


class SerrePipeline:
    """S_{p,q} f, its cochain bicomplex and spectral sequence, plus the local system."""

    def __init__(self, f, F: Field, window: int, r_max: int = 4, base_point: int = 0):
        from .bisimplicial import normalized_cochains_bi, serre_bisimplicial
        self.f, self.F, self.window = f, F, window
        self.S = serre_bisimplicial(f, window)
        self.bc = normalized_cochains_bi(self.S, F, window)
        self.ss = first_filtration_ss(self.bc, window, r_max)
        self.local = LocalSystem(self.S, F, window)
        self.b0 = base_point
        self.fiber = self.local.level(0, base_point)
        self.fiber_cochains = self.local.cochains(0, base_point)
        self._fiber_C = self.fiber_cochains.complex
        self.base_cochains = NormalizedCochains(f.target, F, window)
        self._alg: Dict = {}
        self._tot_pos = {n: {b: i for i, b in enumerate(bs)} for n, bs in self.ss.C.labels.items()}

    # ---- edge maps
    def base_pullback(self, n: int, x: Vector) -> Vector:
        """Tot^n image of a base n-cochain (component (n,0))."""
        out = {}
        nd = self.bc.labels[(n, 0)]
        simp = self.S.B.simp[n]
        pos = self._tot_pos[n]
        for k, item in enumerate(nd):
            u = self.S.items[(n, 0)][item][0]
            v = self.base_cochains.value(n, x, simp[u])
            if v:
                out[pos[(n, 0, k)]] = v
        return out

    def fiber_restriction(self, n: int, z) -> Vector:
        """Component of a Tot^n vector on the fibre over the base point."""
        if not isinstance(z, dict):
            z = self.ss.ops.plain(z)
        nd = self.bc.labels[(0, n)]
        where = {item: k for k, item in enumerate(nd)}
        pos = self._tot_pos[n]
        out = {}
        for r, item in enumerate(self.fiber_cochains.basis[n]):
            v = z.get(pos[(0, n, where[item])])
            if v:
                out[r] = v
        return out

    @property
    def fiber_algebra(self):
        from .cochains import CochainAlgebra
        if "F" not in self._alg:
            self._alg["F"] = CochainAlgebra(self.fiber, self.F, self.fiber.top - 1, self.fiber_cochains)
        return self._alg["F"]

    @property
    def base_algebra(self):
        from .cochains import CochainAlgebra
        if "B" not in self._alg:
            self._alg["B"] = CochainAlgebra(self.f.target, self.F, self.window, self.base_cochains)
        return self._alg["B"]

    def fiber_basis(self, n: int) -> CohomologyBasis:
        return self.fiber_algebra.H(n)

    def base_basis(self, n: int) -> CohomologyBasis:
        return self.base_algebra.H(n)

    def base_projection(self, n: int) -> SparseMatrix:
        """H^n(B) -> E_n^{n,0} on the chosen bases."""
        cols = []
        for x in self.base_basis(n).reps:
            c = self.ss.coords(n, n, n, self.base_pullback(n, x))
            cols.append({i: v for i, v in enumerate(c) if v})
        return SparseMatrix.from_columns(self.F, self.ss.dim(n, n, 0), cols)

    def fiber_edge(self, r: int, n: int) -> SparseMatrix:
        """E_r^{0,n} -> H^n(F) at the base point."""
        Hf = self.fiber_basis(n)
        cols = []
        for z in self.ss.reps(r, 0, n):
            c = Hf.coords(self.fiber_restriction(n, z))
            cols.append({i: v for i, v in enumerate(c) if v})
        return SparseMatrix.from_columns(self.F, Hf.dim, cols)

    # ---- comparisons
    def kunneth_dims(self) -> Dict[Tuple[int, int], int]:
        hb = betti_numbers(self.base_cochains.complex, self.window)
        hf = betti_numbers(self._fiber_C, self.window)
        return {(r, s): hb[r] * hf[s] for r in range(self.window + 1) for s in range(self.window + 1 - r)
                if hb[r] * hf[s]}

    def checks(self, r_upto: int = 3, simple: bool = True) -> Dict[str, object]:
        ss = self.ss
        out = {
            "bicomplex": self.bc.violation() is None,
            "recomputation": not ss.recomputation_failures(r_upto),
            "convergence": ss.converges(),
            "E1_local_system": ss.page(1) == self.local.e1_dims(),
            "E2_local_system": ss.page(2) == self.local.e2_dims(),
        }
        if simple:
            out["E2_kunneth"] = ss.page(2) == self.kunneth_dims()
        return out

    # ---- transgression
    def transgression(self, n: int) -> List[Transgression]:
        """For each basis class of E_{n+1}^{0,n}: its fibre class, d_{n+1} and base preimages."""
        ss = self.ss
        if n + 1 > self.window:
            raise WindowError(f"transgression from degree {n} needs window >= {n + 1}")
        edge = self.fiber_edge(n + 1, n)
        dr = ss.d_r(n + 1, 0, n)
        proj = self.base_projection(n + 1)
        out = []
        for k, z in enumerate(ss.reps(n + 1, 0, n)):
            col = dr.column(k)
            dvec = [col.get(i, self.F.zero) for i in range(dr.nrows)]
            out.append(Transgression(
                [edge.column(k).get(i, self.F.zero) for i in range(edge.nrows)],
                dvec, _preimages(proj, col), z))
        return out

    def transgress_class(self, n: int, y: Sequence) -> Optional[List]:
        """d_{n+1} of the fibre class y (coordinates in H^n(F)), or None if y is not transgressive."""
        edge = self.fiber_edge(n + 1, n)
        sol = _solve(edge, {i: v for i, v in enumerate(y) if self.F(v)})
        if sol is None:
            return None
        dr = self.ss.d_r(n + 1, 0, n)
        img = dr.apply(sol)
        return [img.get(i, self.F.zero) for i in range(dr.nrows)]

    def projects_to(self, n: int, x: Sequence, target: Sequence) -> bool:
        """Does the base class x (coordinates in H^{n+1}(B)) project onto target in E_{n+1}^{n+1,0}?"""
        proj = self.base_projection(n + 1)
        img = proj.apply({i: v for i, v in enumerate(x) if self.F(v)})
        return all(self.F(img.get(i, 0)) == self.F(target[i]) for i in range(proj.nrows))

    def report(self, r_list=None) -> Dict:
        rep = self.ss.report(r_list)
        rep["checks"] = self.checks()
        return rep


def _solve(m: SparseMatrix, target: Vector) -> Optional[Vector]:
    from .linalg import solve_in_image
    x = solve_in_image(m, target)
    return None if x is NOT_IN_IMAGE else x


def _preimages(m: SparseMatrix, target: Vector) -> List[List]:
    x = _solve(m, target)
    if x is None:
        return []
    _, ker, _ = rank_kernel_image(m)
    F = m.F
    rows = [x] + ker
    return [[v.get(i, F.zero) for i in range(m.ncols)] for v in rows]


def serre_pipeline(f, F: Field, degree_window: int, r_max: int = 4) -> SerrePipeline:
    return SerrePipeline(f, F, degree_window, r_max)


# ---------------------------------------------------------------- Kudo

def transgression_witness(P: SerrePipeline, n: int, y: Sequence, x: Sequence) -> Optional[Vector]:
    """A cochain u on E with du = f^*(x') and u restricted to the fibre cohomologous to y,
    where x' is cohomologous to the chosen representative of x.  None if no such u exists."""
    F = P.F
    E = P.S.E
    NE = NormalizedCochains(P.f.source, F, n + 1)
    NB, NF = P.base_cochains, P.fiber_cochains
    fmap = P.S.fmap
    fE = {m: [NB.index[m].get(P.S.B.simp[m][fmap[m][E.index[m][e]]]) for e in NE.basis[m]] for m in (n, n + 1)}
    # block columns: u in C^n(E), c in C^n(B), e in C^{n-1}(F); rows: C^{n+1}(E) then C^n(F)
    nE1, nFn = len(NE.basis[n + 1]), len(NF.basis[n])
    fiber_pos = {P.S.items[(0, n)][k][1][0]: r for r, k in enumerate(NF.basis[n])}
    cols = []
    dE = NE.complex.diff(n)
    for j, e in enumerate(NE.basis[n]):
        col = dict(dE.column(j))
        r = fiber_pos.get(E.index[n][e])
        if r is not None:
            col[nE1 + r] = F.one
        cols.append(col)
    dB = NB.complex.diff(n)
    for j in range(len(NB.basis[n])):
        db = dB.column(j)
        col = {}
        for r, b in enumerate(fE[n + 1]):
            if b is not None and b in db:
                col[r] = F.neg(db[b])
        cols.append(col)
    if n >= 1:
        dF = NF.complex.diff(n - 1)
        for j in range(len(NF.basis[n - 1])):
            cols.append({nE1 + r: F.neg(v) for r, v in dF.column(j).items()})
    M = SparseMatrix.from_columns(F, nE1 + nFn, cols)
    xr = P.base_algebra.rep(n + 1, x)
    yr = P.fiber_algebra.rep(n, y)
    target = {r: xr[b] for r, b in enumerate(fE[n + 1]) if b is not None and b in xr}
    for r, v in yr.items():
        target[nE1 + r] = v
    sol = _solve(M, target)
    if sol is None:
        return None
    return {j: v for j, v in sol.items() if j < len(NE.basis[n])}


def kudo_check(P: SerrePipeline, s: int, n: int, y: Optional[Sequence] = None, x: Optional[Sequence] = None,
               witness: bool = False) -> Dict:
    """Sq^s of a transgressive pair: Sq^s[y] must transgress to the projection of Sq^s[x].

    y are coordinates in H^n(F); x coordinates in H^{n+1}(B).  When x is omitted
    the first base preimage of the transgression is used.
    """
    if P.F.p != 2:
        raise ValueError("the Kudo check is implemented over F_2")
    if n + s + 1 > P.window:
        raise WindowError(f"Kudo check for Sq^{s} in degree {n} needs window >= {n + s + 1}")
    AF, AB = P.fiber_algebra, P.base_algebra
    if y is None:
        y = [1] + [0] * (AF.H(n).dim - 1)
    y = list(y)
    rep: Dict[str, object] = {"s": s, "n": n, "y": y}
    t = P.transgress_class(n, y)
    if t is None:
        raise ValueError("fibre class is not transgressive")
    rep["d_y"] = t
    if x is None:
        pre = _preimages(P.base_projection(n + 1), {i: v for i, v in enumerate(t) if v})
        if not pre:
            rep.update(ok=False, reason="transgression has no base preimage")
            return rep
        x = pre[0]
    x = list(x)
    rep["x"] = x
    if not P.projects_to(n, x, t):
        rep.update(ok=False, reason="base class does not project onto the transgression")
        return rep
    sy = AF.sq(s, n, y)
    sx = AB.sq(s, n + 1, x)
    rep["sq_y"], rep["sq_x"] = sy, sx
    m = n + s
    ts = P.transgress_class(m, sy)
    if ts is None:
        rep.update(ok=False, reason="Sq^s y is not transgressive")
        return rep
    rep["d_sq_y"] = ts
    rep["ok"] = P.projects_to(m, sx, ts)
    if not rep["ok"]:
        rep["reason"] = "d(Sq^s y) differs from the projection of Sq^s x"
    if witness:
        u = transgression_witness(P, n, y, x)
        rep["witness"] = u is not None
        rep["witness_cochain"] = u
    return rep
