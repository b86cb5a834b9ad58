"""Free graded-commutative algebras on finitely many named generators.

An element is a dict {exponent tuple: coefficient}.  Monomials are stored in
generator order; odd generators have exponent 0 or 1.  Signs follow the Koszul
rule x y = (-1)^{|x||y|} y x.  A differential is a derivation given by its
values on generators.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .linalg import CochainComplex, CohomologyBasis, Field, SparseMatrix

Mono = Tuple[int, ...]
Elem = Dict[Mono, object]


class GCAError(ValueError):
    pass


class GCA:
    def __init__(self, F: Field, names: Sequence[str], degrees: Sequence[int],
                 d: Optional[Mapping[str, object]] = None, name: str = "A"):
        if len(set(names)) != len(names):
            raise GCAError("duplicate generator names")
        self.F, self.names, self.degrees, self.name = F, list(names), list(degrees), name
        self.n = len(names)
        self.index = {x: i for i, x in enumerate(self.names)}
        self._odd = [deg % 2 == 1 for deg in self.degrees]
        self._dgen: List[Elem] = [{} for _ in names]
        if d:
            for x, v in d.items():
                self._dgen[self.index[x]] = self.parse(v) if isinstance(v, str) else self.clean(v)
                if self.degree(self._dgen[self.index[x]]) not in (None, self.degrees[self.index[x]] + 1):
                    raise GCAError(f"d({x}) has the wrong degree")

    # ---- elements
    def zero(self) -> Elem:
        return {}

    def one(self) -> Elem:
        return {(0,) * self.n: self.F.one}

    def const(self, c) -> Elem:
        return self.clean({(0,) * self.n: c})

    def gen(self, x: str) -> Elem:
        m = [0] * self.n
        m[self.index[x]] = 1
        return {tuple(m): self.F.one}

    def clean(self, a: Mapping) -> Elem:
        out = {}
        for m, c in a.items():
            c = self.F(c)
            if c:
                out[tuple(m)] = c
        return out

    def mono_degree(self, m: Mono) -> int:
        return sum(e * g for e, g in zip(m, self.degrees))

    def degree(self, a: Elem) -> Optional[int]:
        degs = {self.mono_degree(m) for m in a}
        if len(degs) > 1:
            raise GCAError("inhomogeneous element")
        return degs.pop() if degs else None

    def add(self, a: Elem, b: Elem, s=1) -> Elem:
        out = dict(a)
        F = self.F
        s = F(s)
        for m, c in b.items():
            v = F.add(out.get(m, F.zero), F.mul(s, c))
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def scale(self, s, a: Elem) -> Elem:
        s = self.F(s)
        if not s:
            return {}
        return {m: self.F.mul(s, c) for m, c in a.items()}

    def sub(self, a: Elem, b: Elem) -> Elem:
        return self.add(a, b, -1)

    def mul_mono(self, m1: Mono, m2: Mono):
        """(sign, m1 m2) or None when an odd generator repeats."""
        sign = 1
        odd = self._odd
        counts = [0] * self.n
        acc = 0
        for i in range(self.n - 1, -1, -1):
            counts[i] = acc
            if odd[i] and m1[i]:
                acc += 1
        for j in range(self.n):
            if odd[j] and m2[j]:
                if m1[j]:
                    return None
                if counts[j] % 2:
                    sign = -sign
        return sign, tuple(a + b for a, b in zip(m1, m2))

    def mul(self, a: Elem, b: Elem) -> Elem:
        out: Elem = {}
        F = self.F
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                r = self.mul_mono(m1, m2)
                if r is None:
                    continue
                s, m = r
                c = F.mul(c1, c2)
                v = F.add(out.get(m, F.zero), c if s > 0 else F.neg(c))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def power(self, a: Elem, k: int) -> Elem:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def mono(self, m: Mono) -> Elem:
        return {tuple(m): self.F.one}

    # ---- differential
    def d_gen(self, x: str) -> Elem:
        return self._dgen[self.index[x]]

    def d(self, a: Elem) -> Elem:
        out: Elem = {}
        for m, c in a.items():
            for term_m, term_c in self._d_mono(m).items():
                out = self.add(out, {term_m: term_c}, c)
        return out

    def _d_mono(self, m: Mono) -> Elem:
        out: Elem = {}
        for i in range(self.n):
            e = m[i]
            if not e or not self._dgen[i]:
                continue
            pre = tuple(m[:i]) + (0,) * (self.n - i)
            mid = [0] * self.n
            mid[i] = e - 1
            post = (0,) * (i + 1) + tuple(m[i + 1:])
            sgn = -1 if self.mono_degree(pre) % 2 else 1
            left = self.mul(self.mono(pre), self.scale(e, self.mul(self.mono(tuple(mid)), self._dgen[i])))
            term = self.mul(left, self.mono(post))
            out = self.add(out, term, sgn)
        return out

    def d_squared_violation(self) -> Optional[str]:
        for x in self.names:
            if self.d(self.d_gen(x)):
                return x
        return None

    # ---- parsing
    def parse(self, text: str) -> Elem:
        """Parse a polynomial like '2*a*b - 1/2*x^2 + 1'."""
        text = text.replace(" ", "")
        if not text or text == "0":
            return {}
        out: Elem = {}
        for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
            coef = Fraction(-1 if sign == "-" else 1)
            elem = self.one()
            for factor in term.split("*"):
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coef *= Fraction(factor)
                    continue
                base, _, exp = factor.partition("^")
                if base not in self.index:
                    raise GCAError(f"unknown generator {base!r}")
                elem = self.mul(elem, self.power(self.gen(base), int(exp or 1)))
            out = self.add(out, elem, coef)
        return out

    def format(self, a: Elem) -> str:
        if not a:
            return "0"
        parts = []
        for m, c in sorted(a.items()):
            fac = [x if e == 1 else f"{x}^{e}" for x, e in zip(self.names, m) if e]
            parts.append("*".join(([str(c)] if c != 1 or not fac else []) + fac))
        return " + ".join(parts)

    # ---- maps
    def hom(self, target: "GCA", images: Mapping[str, Elem]) -> Callable[[Elem], Elem]:
        """The algebra map sending each generator to images[name] (missing names go to 0)."""
        imgs = [images.get(x, {}) for x in self.names]
        cache: Dict[Tuple[int, int], Elem] = {}

        def pw(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = target.power(imgs[i], e)
            return cache[(i, e)]

        def f(a: Elem) -> Elem:
            out: Elem = {}
            for m, c in a.items():
                v = target.one()
                for i, e in enumerate(m):
                    if e:
                        v = target.mul(v, pw(i, e))
                        if not v:
                            break
                out = target.add(out, v, c)
            return out

        return f

    # ---- bases and complexes
    def basis(self, degree: int, caps: Optional[Mapping[str, int]] = None, poly_cap: Optional[int] = None) -> List[Mono]:
        """Monomials of the given degree; poly_cap bounds the total exponent of degree-0 generators."""
        caps = caps or {}
        out: List[Mono] = []
        m = [0] * self.n

        def rec(i, rem, poly):
            if i == self.n:
                if rem == 0:
                    out.append(tuple(m))
                return
            g = self.degrees[i]
            top = caps.get(self.names[i])
            if self._odd[i]:
                choices = [0, 1]
            elif g == 0:
                if poly_cap is None and top is None:
                    raise GCAError("degree-0 generators need a polynomial cap")
                lim = poly_cap - poly if poly_cap is not None else top
                choices = range(0, min(lim, top if top is not None else lim) + 1)
            elif g > 0:
                choices = range(0, rem // g + 1)
            else:
                raise GCAError("negative generator degrees are not supported")
            for e in choices:
                if top is not None and e > top:
                    break
                if g * e > rem and g > 0:
                    break
                m[i] = e
                rec(i + 1, rem - g * e, poly + (e if g == 0 else 0))
            m[i] = 0

        rec(0, degree, 0)
        return sorted(out)

    def complex(self, lo: int, hi: int, poly_cap: Optional[int] = None,
                poly_caps: Optional[Mapping[int, int]] = None) -> CochainComplex:
        """The truncated complex in degrees lo..hi (per-degree polynomial caps allowed)."""
        bases = {}
        for k in range(lo, hi + 1):
            cap = poly_caps.get(k, poly_cap) if poly_caps else poly_cap
            bases[k] = self.basis(k, poly_cap=cap)
        index = {k: {m: i for i, m in enumerate(b)} for k, b in bases.items()}
        d = {}
        for k in range(lo, hi):
            cols = []
            for m in bases[k]:
                col = {}
                for mm, c in self.d(self.mono(m)).items():
                    if mm not in index[k + 1]:
                        raise GCAError(f"d leaves the truncation at degree {k + 1}")
                    col[index[k + 1][mm]] = c
                cols.append(col)
            d[k] = SparseMatrix.from_columns(self.F, len(bases[k + 1]), cols)
        return CochainComplex(self.F, {k: len(b) for k, b in bases.items()}, d, bases)

    def cohomology_dims(self, lo: int, hi: int) -> Dict[int, int]:
        """dim H^k for lo <= k <= hi (no degree-0 generators; computed through hi + 1)."""
        C = self.complex(max(lo - 1, 0), hi + 1)
        return {k: CohomologyBasis(C, k).dim for k in range(lo, hi + 1)}

    def vector(self, a: Elem, basis_index: Mapping[Mono, int]) -> Dict[int, object]:
        return {basis_index[m]: c for m, c in a.items()}


def tensor(A: GCA, B: GCA, name: Optional[str] = None) -> Tuple[GCA, Callable, Callable]:
    """A (x) B as a free GCA on the disjoint union of generators, with the two inclusions."""
    if set(A.names) & set(B.names):
        raise GCAError("generator names must be disjoint")
    d = {}
    C = GCA(A.F, A.names + B.names, A.degrees + B.degrees, name=name or f"{A.name}(x){B.name}")
    ia = A.hom(C, {x: C.gen(x) for x in A.names})
    ib = B.hom(C, {x: C.gen(x) for x in B.names})
    for x in A.names:
        d[x] = ia(A.d_gen(x))
    for x in B.names:
        d[x] = ib(B.d_gen(x))
    C._dgen = [d[x] for x in C.names]
    return C, ia, ib
