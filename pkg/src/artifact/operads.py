"""Truncated dg operads: Com, the identity operad I and the bar-resolution
operad R_B (Barratt-Eccles form), axiom checks and truncated free algebras.

Grading is cohomological: a basis element of homological dimension k sits in
degree -k.  A permutation of {0..n-1} is a word w = (w_0, ..., w_{n-1}) read as
the monomial x_{w_0} ... x_{w_{n-1}}; Sigma_n acts on the right by relabelling
variables, w . rho = (rho(w_0), ..., rho(w_{n-1})), and the product rho rho'
means "rho first, then rho'".
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import permutations, product as iproduct
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import CochainComplex, Field, SparseMatrix, Vector, axpy, betti_numbers

Perm = Tuple[int, ...]


# ---------------------------------------------------------------- permutations

def perm_mul(a: Perm, b: Perm) -> Perm:
    """a first, then b."""
    return tuple(b[x] for x in a)


def perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_sign(a: Sequence[int]) -> int:
    s = 1
    a = list(a)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] > a[j]:
                s = -s
    return s


def koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Sign of moving graded items (degrees) into the order ``order`` (a list of original positions)."""
    s = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j] and degrees[order[i]] % 2 and degrees[order[j]] % 2:
                s = -s
    return s


def all_perms(n: int) -> List[Perm]:
    return list(permutations(range(n)))


def substitute(w: Perm, blocks: Sequence[Perm]) -> Perm:
    """Replace variable i of the word w by the word blocks[i], shifted into its own range."""
    off = [0]
    for b in blocks:
        off.append(off[-1] + len(b))
    out: List[int] = []
    for i in w:
        out.extend(off[i] + v for v in blocks[i])
    return tuple(out)


def block_relabel(rho: Perm, sizes: Sequence[int]) -> Perm:
    """rho<sizes>: sends block i of the list (sizes[rho(0)], sizes[rho(1)], ...) to the range of block rho(i)."""
    off = [0]
    for s in sizes:
        off.append(off[-1] + s)
    out: List[int] = []
    for i in range(len(rho)):
        j = rho[i]
        out.extend(off[j] + k for k in range(sizes[j]))
    return tuple(out)


# ---------------------------------------------------------------- operads

class Operad:
    """Truncated operad interface.  Elements are dicts {label: scalar}."""

    name = "O"
    arity_cap: int = 3
    depth: int = 0

    def __init__(self, F: Field):
        self.F = F

    def basis(self, n: int, k: int) -> List:
        """Basis in arity n, homological dimension k (degree -k)."""
        raise NotImplementedError

    def arity(self, x) -> int:
        raise NotImplementedError

    def dim(self, x) -> int:
        raise NotImplementedError

    def degree(self, x) -> int:
        return -self.dim(x)

    def d(self, x) -> Vector:
        raise NotImplementedError

    def act(self, x, rho: Perm) -> Tuple[int, object]:
        raise NotImplementedError

    def gamma(self, x, ys: Sequence) -> Vector:
        raise NotImplementedError

    def unit(self):
        """Basis label of the unit of O(1)."""
        raise NotImplementedError

    def eps(self, x):
        """Augmentation to Com."""
        raise NotImplementedError

    def section(self, n: int):
        """The chosen degree-0 element 1_n with eps(1_n) = 1."""
        raise NotImplementedError

    # ---- linear extensions
    def d_vec(self, v: Vector) -> Vector:
        out: Vector = {}
        for x, c in v.items():
            axpy(self.F, out, c, self.d(x))
        return out

    def gamma_vec(self, x: Vector, ys: Sequence[Vector]) -> Vector:
        out: Vector = {}
        F = self.F
        for combo in iproduct(*[list(y.items()) for y in ys]):
            labs = [l for l, _ in combo]
            coeff = F.one
            for _, c in combo:
                coeff = F.mul(coeff, c)
            for a, c in x.items():
                axpy(F, out, F.mul(coeff, c), self.gamma(a, labs))
        return out

    def act_vec(self, v: Vector, rho: Perm) -> Vector:
        out: Vector = {}
        for x, c in v.items():
            s, y = self.act(x, rho)
            axpy(self.F, out, self.F(s), {y: c})
        return out

    def complex(self, n: int, top: Optional[int] = None) -> CochainComplex:
        """O(n) as a cochain complex, indexed by k = homological dimension (degree -k)."""
        top = self.depth if top is None else top
        bases = {k: self.basis(n, k) for k in range(top + 1)}
        pos = {k: {x: i for i, x in enumerate(b)} for k, b in bases.items()}
        # store as a cochain complex in the index t = top - k so that d raises t
        dims = {top - k: len(b) for k, b in bases.items()}
        d = {}
        for k in range(1, top + 1):
            cols = []
            for x in bases[k]:
                cols.append({pos[k - 1][y]: c for y, c in self.d(x).items()})
            d[top - k] = SparseMatrix.from_columns(self.F, len(bases[k - 1]), cols)
        return CochainComplex(self.F, dims, d)


class ComOperad(Operad):
    """Com(n) = R in degree 0 for every n; label = arity."""

    name = "Com"

    def __init__(self, F: Field, arity_cap: int = 6):
        super().__init__(F)
        self.arity_cap, self.depth = arity_cap, 0

    def basis(self, n, k):
        return [("com", n)] if k == 0 else []

    def arity(self, x):
        return x[1]

    def dim(self, x):
        return 0

    def d(self, x):
        return {}

    def act(self, x, rho):
        return 1, x

    def gamma(self, x, ys):
        if len(ys) != x[1]:
            raise ValueError("arity mismatch")
        return {("com", sum(y[1] for y in ys)): self.F.one}

    def unit(self):
        return ("com", 1)

    def eps(self, x):
        return self.F.one

    def section(self, n):
        return ("com", n)


class IdentityOperad(Operad):
    """I(0) = I(1) = R, I(n) = 0 for n >= 2."""

    name = "I"

    def __init__(self, F: Field):
        super().__init__(F)
        self.arity_cap, self.depth = 1, 0

    def basis(self, n, k):
        return [("id", n)] if k == 0 and n <= 1 else []

    def arity(self, x):
        return x[1]

    def dim(self, x):
        return 0

    def d(self, x):
        return {}

    def act(self, x, rho):
        return 1, x

    def gamma(self, x, ys):
        if len(ys) != x[1]:
            raise ValueError("arity mismatch")
        n = sum(y[1] for y in ys)
        return {("id", n): self.F.one} if n <= 1 else {}

    def unit(self):
        return ("id", 1)

    def eps(self, x):
        return self.F.one

    def section(self, n):
        if n > 1:
            raise ValueError("I has no arity >= 2")
        return ("id", n)


class BarResolutionOperad(Operad):
    """R_B(n): normalized bar resolution of Sigma_n, realised as simplices
    (w_0, ..., w_k) of E Sigma_n with w_i != w_{i+1}.

    d drops vertices with alternating signs; Sigma_n acts vertexwise; gamma is
    the Eilenberg-Zilber shuffle map followed by vertexwise substitution.
    """

    name = "R_B"

    def __init__(self, F: Field, arity_cap: int = 3, depth: int = 2):
        if arity_cap < 2 or depth < 0:
            raise ValueError("need arity_cap >= 2 and depth >= 0")
        super().__init__(F)
        self.arity_cap, self.depth = arity_cap, depth
        self._basis: Dict = {}
        self._gamma: Dict = {}

    def basis(self, n, k):
        if n > self.arity_cap or k > self.depth:
            raise ValueError(f"R_B({n}) in dimension {k} is outside the caps")
        key = (n, k)
        if key not in self._basis:
            ps = all_perms(n)
            out = [(p,) for p in ps]
            for _ in range(k):
                out = [s + (p,) for s in out for p in ps if p != s[-1]]
            self._basis[key] = out
        return self._basis[key]

    def arity(self, x):
        return len(x[0])

    def dim(self, x):
        return len(x) - 1

    def d(self, x):
        out: Vector = {}
        k = len(x) - 1
        for i in range(k + 1):
            y = x[:i] + x[i + 1:]
            if any(a == b for a, b in zip(y, y[1:])):
                continue
            axpy(self.F, out, self.F(1 if i % 2 == 0 else -1), {y: self.F.one})
        return out if k else {}

    def act(self, x, rho):
        return 1, tuple(tuple(rho[v] for v in w) for w in x)

    def gamma(self, x, ys):
        key = (x, tuple(ys))
        hit = self._gamma.get(key)
        if hit is None:
            hit = self._gamma[key] = self._compose(x, ys)
        return dict(hit)

    def _compose(self, x, ys):
        if len(ys) != self.arity(x):
            raise ValueError("arity mismatch")
        factors = [x] + list(ys)
        lens = [len(f) - 1 for f in factors]
        out: Vector = {}
        F = self.F
        for moves, sign in _shuffles(tuple(lens)):
            pos = [0] * len(factors)
            verts = [substitute(x[0], [y[0] for y in ys])]
            for m in moves:
                pos[m] += 1
                verts.append(substitute(x[pos[0]], [ys[i][pos[i + 1]] for i in range(len(ys))]))
            if any(a == b for a, b in zip(verts, verts[1:])):
                continue
            axpy(F, out, F(sign), {tuple(verts): F.one})
        return out

    def unit(self):
        return ((0,),)

    def eps(self, x):
        return self.F.one if len(x) == 1 else self.F.zero

    def section(self, n):
        return (tuple(range(n)),)


_SHUF: Dict = {}


def _shuffles(lens: Tuple[int, ...]) -> List[Tuple[Tuple[int, ...], int]]:
    """All interleavings of lens[i] moves of each factor i, with the shuffle sign."""
    if lens in _SHUF:
        return _SHUF[lens]
    out = []
    total = sum(lens)

    def rec(rem, seq):
        if len(seq) == total:
            inv = 0
            for a in range(total):
                for b in range(a + 1, total):
                    if seq[a] > seq[b]:
                        inv += 1
            out.append((tuple(seq), -1 if inv % 2 else 1))
            return
        for i, r in enumerate(rem):
            if r:
                rem[i] -= 1
                seq.append(i)
                rec(rem, seq)
                seq.pop()
                rem[i] += 1

    rec(list(lens), [])
    _SHUF[lens] = out
    return out


def com_operad(F: Field, arity_cap: int = 6) -> ComOperad:
    return ComOperad(F, arity_cap)


def bar_resolution_operad(F: Field, arity_cap: int = 3, homological_depth: int = 2) -> BarResolutionOperad:
    return BarResolutionOperad(F, arity_cap, homological_depth)


# ---------------------------------------------------------------- axiom checks

@dataclass
class AxiomReport:
    ok: bool = True
    checked: Dict[str, int] = dc_field(default_factory=dict)
    failure: Optional[Tuple[str, object]] = None

    def fail(self, kind: str, witness):
        if self.ok:
            self.ok = False
            self.failure = (kind, witness)

    def count(self, kind: str):
        self.checked[kind] = self.checked.get(kind, 0) + 1


def _elements(O: Operad, max_arity: int, max_dim: int) -> List:
    out = []
    for n in range(0, max_arity + 1):
        for k in range(0, max_dim + 1):
            try:
                out.extend(O.basis(n, k))
            except ValueError:
                pass
    return out


def _eq(F: Field, a: Vector, b: Vector) -> bool:
    diff = dict(a)
    axpy(F, diff, F(-1), b)
    return not diff


def _buckets(O: Operad, elems: List) -> Dict[Tuple[int, int], List]:
    out: Dict[Tuple[int, int], List] = {}
    for y in elems:
        out.setdefault((O.arity(y), O.dim(y)), []).append(y)
    return out


def _tuples(buckets: Dict, r: int, budget_arity: int, budget_dim: int):
    """Sequences of r elements with total arity <= budget_arity and total dimension <= budget_dim."""
    if r == 0:
        yield ()
        return
    for (a, k), ys in buckets.items():
        if a <= budget_arity and k <= budget_dim:
            rests = list(_tuples(buckets, r - 1, budget_arity - a, budget_dim - k))
            for y in ys:
                for rest in rests:
                    yield (y,) + rest


def operad_axiom_check(O: Operad, sample_depth: Optional[int] = None, arity_cap: Optional[int] = None,
                       stop_at_first: bool = True) -> AxiomReport:
    """Unit, equivariance, associativity, chain-map and augmentation identities of gamma
    on all basis elements whose arities (including the composite) stay <= arity_cap and whose
    dimensions sum to <= sample_depth."""
    F = O.F
    depth = O.depth if sample_depth is None else sample_depth
    cap = min(O.arity_cap, 3) if arity_cap is None else arity_cap
    elems = _elements(O, cap, depth)
    buckets = _buckets(O, elems)
    rep = AxiomReport()
    u = O.unit()

    def done():
        return stop_at_first and not rep.ok

    # unit laws
    for x in elems:
        n = O.arity(x)
        rep.count("unit")
        if not _eq(F, O.gamma(u, [x]), {x: F.one}):
            rep.fail("left unit", x)
        if not _eq(F, O.gamma(x, [u] * n), {x: F.one}):
            rep.fail("right unit", x)
        if done():
            return rep
    # group action
    for x in elems:
        n = O.arity(x)
        ps = all_perms(n)
        for a in ps:
            for b in ps:
                rep.count("action")
                s1, y1 = O.act(x, a)
                s2, y2 = O.act(y1, b)
                s3, y3 = O.act(x, perm_mul(a, b))
                if (s1 * s2, y2) != (s3, y3):
                    rep.fail("action", (x, a, b))
                    if done():
                        return rep
        if O.dim(x) > 0:
            for a in ps:
                rep.count("action/d")
                s, y = O.act(x, a)
                lhs = {}
                for z, c in O.d(y).items():
                    axpy(F, lhs, F.mul(F(s), c), {z: F.one})
                if not _eq(F, lhs, O.act_vec(O.d(x), a)):
                    rep.fail("action commutes with d", (x, a))
                    if done():
                        return rep
    # compositions with inputs and outputs inside the caps
    for x in elems:
        r = O.arity(x)
        for ys in _tuples(buckets, r, cap, depth - O.dim(x)):
            g = O.gamma(x, list(ys))
            sizes = [O.arity(y) for y in ys]
            ydeg = [O.degree(y) for y in ys]
            # chain map: d gamma = gamma(dx; y) + sum (-1)^{|x|+|y_<i|} gamma(x; .. dy_i ..)
            rep.count("d-gamma")
            lhs = O.d_vec(g)
            rhs = O.gamma_vec(O.d(x), [{y: F.one} for y in ys]) if O.dim(x) else {}
            sgn = O.degree(x)
            for i, y in enumerate(ys):
                if O.dim(y):
                    args = [{z: F.one} for z in ys]
                    args[i] = O.d(y)
                    axpy(F, rhs, F(-1 if sgn % 2 else 1), O.gamma_vec({x: F.one}, args))
                sgn += O.degree(y)
            if not _eq(F, lhs, rhs):
                rep.fail("gamma is not a chain map", (x, ys))
            # augmentation
            rep.count("augmentation")
            e = F.zero
            for z, c in g.items():
                e = F.add(e, F.mul(c, O.eps(z)))
            want = O.eps(x)
            for y in ys:
                want = F.mul(want, O.eps(y))
            if e != want:
                rep.fail("augmentation", (x, ys))
            # equivariance in the operation slot
            for rho in all_perms(r):
                rep.count("equivariance")
                s, xr = O.act(x, rho)
                lhs = O.gamma(xr, list(ys))
                if s != 1:
                    lhs = {k: F.mul(F(s), v) for k, v in lhs.items()}
                perm_ys = [ys[rho[i]] for i in range(r)]
                ksign = koszul_sign(ydeg, [rho[i] for i in range(r)])
                rhs = O.act_vec(O.gamma(x, perm_ys), block_relabel(rho, sizes))
                if ksign != 1:
                    rhs = {k: F.neg(v) for k, v in rhs.items()}
                if not _eq(F, lhs, rhs):
                    rep.fail("equivariance (operation)", (x, rho, ys))
                    if done():
                        return rep
            # equivariance in the input slots
            for taus in iproduct(*[all_perms(a) for a in sizes]):
                rep.count("equivariance")
                acted = []
                for y, t in zip(ys, taus):
                    s, yy = O.act(y, t)
                    acted.append({yy: F(s)})
                lhs = O.gamma_vec({x: F.one}, acted)
                tot = tuple(v + off for t, off in zip(taus, _offsets(sizes)) for v in t)
                rhs = O.act_vec(g, tot)
                if not _eq(F, lhs, rhs):
                    rep.fail("equivariance (inputs)", (x, taus, ys))
                    if done():
                        return rep
            if done():
                return rep
            # associativity
            s = sum(sizes)
            for zs in _tuples(buckets, s, cap, depth - O.dim(x) - sum(O.dim(y) for y in ys)):
                rep.count("associativity")
                lhs = O.gamma_vec(g, [{z: F.one} for z in zs])
                inner, k, sign = [], 0, 1
                zdeg = [O.degree(z) for z in zs]
                for i, y in enumerate(ys):
                    block = zs[k:k + sizes[i]]
                    inner.append(O.gamma(y, list(block)))
                    # move y_i past the z's of earlier blocks
                    if O.degree(y) % 2 and sum(zdeg[:k]) % 2:
                        sign = -sign
                    k += sizes[i]
                rhs = O.gamma_vec({x: F(sign)}, inner)
                if not _eq(F, lhs, rhs):
                    rep.fail("associativity", (x, ys, zs))
                    if done():
                        return rep
    return rep


def _offsets(sizes):
    out, o = [], 0
    for s in sizes:
        out.append(o)
        o += s
    return out


def acyclicity_report(O: Operad, n: int) -> Dict[int, int]:
    """Homology of O(n) in dimensions 0..depth-1 (the top dimension is not trusted)."""
    C = O.complex(n)
    top = O.depth
    b = betti_numbers(C, top)
    return {top - t: b[t] for t in range(1, top + 1)} if top else {0: b[0]}


# ---------------------------------------------------------------- free algebras

@dataclass
class Generators:
    """Graded generators with a differential (dict name -> {name: coeff})."""

    names: List[str]
    degrees: Dict[str, int]
    d: Dict[str, Dict[str, object]] = dc_field(default_factory=dict)

    def degree(self, m: str) -> int:
        return self.degrees[m]


class FreeAlgebra:
    """Truncation of O(M) = sum_{p <= w} O(p) (x)_{Sigma_p} M^{(x)p} within a degree window."""

    def __init__(self, O: Operad, M: Generators, weight_cap: int, degree_window: Tuple[int, int],
                 depth: Optional[int] = None):
        self.O, self.M, self.F = O, M, O.F
        self.w, self.window = weight_cap, degree_window
        self.depth = O.depth if depth is None else depth
        lo, hi = degree_window
        self.basis: Dict[int, List] = {}
        seen = set()
        for p in range(0, weight_cap + 1):
            for k in range(0, self.depth + 1):
                try:
                    ops = O.basis(p, k)
                except ValueError:
                    continue
                for ms in iproduct(M.names, repeat=p):
                    deg = -k + sum(M.degrees[m] for m in ms)
                    if not lo <= deg <= hi:
                        continue
                    for x in ops:
                        c = self.canonical(x, ms)
                        if c is None:
                            continue
                        _, key = c
                        if key not in seen:
                            seen.add(key)
                            self.basis.setdefault(deg, []).append(key)
        for deg in self.basis:
            self.basis[deg].sort(key=repr)
        self.index = {deg: {b: i for i, b in enumerate(bs)} for deg, bs in self.basis.items()}

    def degree(self, elem) -> int:
        x, ms = elem
        return self.O.degree(x) + sum(self.M.degrees[m] for m in ms)

    def canonical(self, x, ms: Sequence[str]) -> Optional[Tuple[int, Tuple]]:
        """(sign, canonical pair) with x (x) ms = sign * canonical, or None if the class is zero."""
        O, F = self.O, self.F
        p = len(ms)
        degs = [self.M.degrees[m] for m in ms]
        best = None
        signs = {}
        for rho in all_perms(p):
            s, xr = O.act(x, rho)
            inv = perm_inv(rho)
            ms2 = tuple(ms[inv[i]] for i in range(p))
            # x.rho (x) ms2 = kappa x (x) ms2∘rho = kappa x (x) ms
            kappa = koszul_sign([degs[inv[i]] for i in range(p)], [rho[i] for i in range(p)])
            key = (xr, ms2)
            sign = s * kappa
            if key in signs and signs[key] != sign and F.p != 2:
                return None
            signs[key] = sign
            if best is None or repr(key) < repr(best):
                best = key
        return signs[best], best

    def element(self, x, ms: Sequence[str], coeff=1) -> Vector:
        c = self.canonical(x, tuple(ms))
        if c is None:
            return {}
        s, key = c
        v = self.F.mul(self.F(s), self.F(coeff))
        return {key: v} if v else {}

    def d(self, elem) -> Vector:
        O, F = self.O, self.F
        x, ms = elem
        out: Vector = {}
        for y, c in O.d(x).items():
            axpy(F, out, c, self.element(y, ms))
        sgn = O.degree(x)
        for i, m in enumerate(ms):
            for m2, c in self.M.d.get(m, {}).items():
                coeff = F.mul(F(c), F(-1 if sgn % 2 else 1))
                axpy(F, out, coeff, self.element(x, ms[:i] + (m2,) + ms[i + 1:]))
            sgn += self.M.degrees[m]
        return out

    def d_vec(self, v: Vector) -> Vector:
        out: Vector = {}
        for e, c in v.items():
            axpy(self.F, out, c, self.d(e))
        return out

    def window_flags(self) -> List:
        """Basis elements whose differential leaves the window."""
        lo, hi = self.window
        return [e for deg, bs in self.basis.items() for e in bs if self.d(e) and deg + 1 > hi]

    def d_squared_violations(self) -> List:
        flagged = set(self.window_flags())
        bad = []
        for bs in self.basis.values():
            for e in bs:
                if e in flagged or any(k in flagged for k in self.d(e)):
                    continue
                if self.d_vec(self.d(e)):
                    bad.append(e)
        return bad

    def unit(self) -> Vector:
        return self.element(self.O.section(0), ())

    def generator(self, m: str) -> Vector:
        return self.element(self.O.unit(), (m,))

    def theta(self, x, args: Sequence[Vector]) -> Vector:
        """theta_p(x (x) a_1 (x) ... (x) a_p) via gamma, with Koszul signs."""
        O, F = self.O, self.F
        out: Vector = {}
        for combo in iproduct(*[list(a.items()) for a in args]):
            coeff = F.one
            ops, ms, sign, seen_m = [], (), 1, 0
            for (y, ym), c in combo:
                coeff = F.mul(coeff, c)
                if O.degree(y) % 2 and seen_m % 2:
                    sign = -sign
                ops.append({y: F.one})
                ms = ms + tuple(ym)
                seen_m += sum(self.M.degrees[m] for m in ym)
            g = O.gamma_vec({x: F.one}, ops)
            for z, c in g.items():
                axpy(F, out, F.mul(F.mul(coeff, c), F(sign)), self.element(z, ms))
        return out

    def complex(self) -> CochainComplex:
        lo, hi = self.window
        dims = {deg: len(self.basis.get(deg, [])) for deg in range(lo, hi + 1)}
        d = {}
        for deg in range(lo, hi):
            cols = []
            for e in self.basis.get(deg, []):
                cols.append({self.index[deg + 1][k]: c for k, c in self.d(e).items()})
            d[deg] = SparseMatrix.from_columns(self.F, dims[deg + 1], cols)
        return CochainComplex(self.F, dims, d)


def free_algebra(O: Operad, generators: Generators, weight_cap: int, degree_window: Tuple[int, int],
                 depth: Optional[int] = None) -> FreeAlgebra:
    return FreeAlgebra(O, generators, weight_cap, degree_window, depth)


def unit_section_products(O: Operad, cap: int = 3) -> Dict:
    """1_n for n <= cap and the binary product mu = 1_2."""
    return {"sections": {n: O.section(n) for n in range(cap + 1)}, "mu": O.section(2)}


def map_generators(A: FreeAlgebra, B: FreeAlgebra, images: Dict[str, Dict[str, object]], elem) -> Vector:
    """Image of a basis element of A under the algebra map induced by a linear map of generators."""
    F = A.F
    x, ms = elem
    out: Vector = {}
    choices = [list(images.get(m, {}).items()) for m in ms]
    for combo in iproduct(*choices):
        coeff = F.one
        for _, c in combo:
            coeff = F.mul(coeff, F(c))
        axpy(F, out, coeff, B.element(x, tuple(m for m, _ in combo)))
    return out
