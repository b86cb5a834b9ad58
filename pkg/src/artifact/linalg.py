"""Exact sparse linear algebra over prime fields and the rationals.

Vectors are plain dicts ``{index: scalar}`` with no zero values.  Over F_2 the
row reducer switches to Python integers used as bitsets, which is what keeps
the large spectral-sequence computations tractable.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[int, object]


class MalformedComplex(ValueError):
    pass


class _NotInImage:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NOT_IN_IMAGE"

    def __bool__(self):
        return False


NOT_IN_IMAGE = _NotInImage()


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Field:
    """F_p for prime p, or Q when p == 0."""

    p: int

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, name: str) -> "Field":
        s = str(name).strip().upper()
        if s in ("Q", "QQ", "0"):
            return cls(0)
        if s.startswith("F"):
            s = s[1:].lstrip("_")
        return cls(int(s))

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def __call__(self, x):
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / a
        return pow(a, -1, self.p)

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def __repr__(self):
        return self.name


GF2 = Field(2)
QQ = Field(0)


# ---------------------------------------------------------------- vectors

def axpy(F: Field, y: Vector, a, x: Vector) -> Vector:
    """y += a*x in place, dropping zeros."""
    if not a:
        return y
    p = F.p
    for k, v in x.items():
        if p:
            w = (y.get(k, 0) + a * v) % p
        else:
            w = y.get(k, 0) + a * v
        if w:
            y[k] = w
        else:
            y.pop(k, None)
    return y


def vec_add(F: Field, x: Vector, y: Vector, a=1) -> Vector:
    return axpy(F, dict(x), F(a), y)


def vec_scale(F: Field, a, x: Vector) -> Vector:
    a = F(a)
    if not a:
        return {}
    return {k: F.mul(a, v) for k, v in x.items()}


def vec_clean(F: Field, x) -> Vector:
    out = {}
    for k, v in dict(x).items():
        v = F(v)
        if v:
            out[k] = v
    return out


def _to_bits(x: Vector) -> int:
    b = 0
    for k in x:
        b |= 1 << k
    return b


def _from_bits(b: int) -> Vector:
    out = {}
    while b:
        low = b & -b
        out[low.bit_length() - 1] = 1
        b ^= low
    return out


# ---------------------------------------------------------------- reducers

class Reducer:
    """Incremental echelon form.  ``add`` inserts a vector, remembering (when
    tracking) which inserted vectors it is a combination of; ``reduce``
    returns the residual and the combination that was subtracted."""

    def __new__(cls, F: Field, track: bool = False):
        if cls is Reducer and F.p == 2:
            return super().__new__(_BitReducer)
        return super().__new__(cls)

    def __init__(self, F: Field, track: bool = False):
        self.F = F
        self.track = track
        self._rows: Dict[int, Tuple[Vector, Vector]] = {}
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Vector) -> Tuple[Vector, Vector]:
        F, rows = self.F, self._rows
        v = dict(v)
        combo: Vector = {}
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                return v, combo
            k = min(hits)
            row, rc = rows[k]
            c = v[k]
            axpy(F, v, F.neg(c), row)
            if self.track:
                axpy(F, combo, c, rc)

    def add(self, v: Vector, tag: Optional[int] = None) -> bool:
        """Insert v; returns True when v was independent of earlier inserts."""
        idx = self.count if tag is None else tag
        self.count += 1
        r, combo = self.reduce(v)
        if not r:
            self._last_relation = {k: self.F.neg(c) for k, c in combo.items()}
            if self.track:
                self._last_relation[idx] = self.F.one
            return False
        F = self.F
        k = min(r)
        inv = F.inv(r[k])
        row = {j: F.mul(inv, c) for j, c in r.items()}
        rc: Vector = {}
        if self.track:
            rc = {j: F.mul(inv, F.neg(c)) for j, c in combo.items()}
            rc[idx] = F.add(rc.get(idx, F.zero), inv)
            rc = {j: c for j, c in rc.items() if c}
        self._rows[k] = (row, rc)
        return True

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)[0]

    def express(self, v: Vector) -> Optional[Vector]:
        """Coefficients of v over the inserted vectors, or None."""
        r, combo = self.reduce(v)
        return None if r else combo


class _BitReducer(Reducer):
    """F_2 reducer on integer bitsets; same contract as Reducer."""

    def __init__(self, F: Field, track: bool = False):
        super().__init__(F, track)
        self.brows: Dict[int, Tuple[int, int]] = {}
        self.pivmask = 0

    @property
    def rank(self) -> int:
        return len(self.brows)

    def reduce_bits(self, b: int) -> Tuple[int, int]:
        combo = 0
        brows = self.brows
        while True:
            x = b & self.pivmask
            if not x:
                return b, combo
            k = (x & -x).bit_length() - 1
            row, rc = brows[k]
            b ^= row
            combo ^= rc

    def add_bits(self, b: int, tag: Optional[int] = None) -> bool:
        idx = self.count if tag is None else tag
        self.count += 1
        r, combo = self.reduce_bits(b)
        if not r:
            self._last_relation_bits = combo ^ (1 << idx) if self.track else 0
            return False
        k = (r & -r).bit_length() - 1
        self.brows[k] = (r, (combo ^ (1 << idx)) if self.track else 0)
        self.pivmask |= 1 << k
        return True

    def reduce(self, v: Vector) -> Tuple[Vector, Vector]:
        r, c = self.reduce_bits(_to_bits(v))
        return _from_bits(r), _from_bits(c)

    def add(self, v: Vector, tag: Optional[int] = None) -> bool:
        ok = self.add_bits(_to_bits(v), tag)
        if not ok:
            self._last_relation = _from_bits(self._last_relation_bits)
        return ok



# ---------------------------------------------------------------- matrices

class SparseMatrix:
    """Immutable sparse matrix, stored by columns."""

    __slots__ = ("F", "nrows", "ncols", "_cols")

    def __init__(self, F: Field, nrows: int, ncols: int, entries: Iterable = (), *, columns=None):
        self.F = F
        self.nrows = nrows
        self.ncols = ncols
        if columns is not None:
            cols = [dict(c) for c in columns]
            if len(cols) != ncols:
                raise ValueError("column count mismatch")
            for c in cols:
                for r, v in c.items():
                    if not 0 <= r < nrows:
                        raise IndexError(f"row {r} out of range")
                    if not v:
                        raise ValueError("stored zero")
        else:
            cols = [dict() for _ in range(ncols)]
            for r, c, v in entries:
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise IndexError(f"entry ({r},{c}) out of range")
                if r in cols[c]:
                    raise ValueError(f"duplicate entry ({r},{c})")
                v = F(v)
                if v:
                    cols[c][r] = v
        self._cols = cols

    @classmethod
    def from_columns(cls, F: Field, nrows: int, columns: Sequence[Vector]) -> "SparseMatrix":
        cols = [vec_clean(F, c) for c in columns]
        return cls(F, nrows, len(cols), columns=cols)

    @classmethod
    def identity(cls, F: Field, n: int) -> "SparseMatrix":
        return cls(F, n, n, columns=[{i: F.one} for i in range(n)])

    @classmethod
    def zero(cls, F: Field, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(F, nrows, ncols, columns=[{} for _ in range(ncols)])

    @classmethod
    def from_dense(cls, F: Field, rows: Sequence[Sequence]) -> "SparseMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ents = [(i, j, x) for i, r in enumerate(rows) for j, x in enumerate(r) if F(x)]
        return cls(F, nr, nc, ents)

    @property
    def entries(self) -> List[Tuple[int, int, object]]:
        out = [(r, c, v) for c, col in enumerate(self._cols) for r, v in col.items()]
        out.sort(key=lambda e: (e[0], e[1]))
        return out

    def column(self, j: int) -> Vector:
        return dict(self._cols[j])

    def columns(self) -> List[Vector]:
        return [dict(c) for c in self._cols]

    def to_dense(self) -> List[List]:
        out = [[self.F.zero] * self.ncols for _ in range(self.nrows)]
        for c, col in enumerate(self._cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    def apply(self, x: Vector) -> Vector:
        out: Vector = {}
        for j, a in x.items():
            axpy(self.F, out, a, self._cols[j])
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = [self.apply(c) for c in other._cols]
        return SparseMatrix(self.F, self.nrows, other.ncols, columns=cols)

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.F, self.ncols, self.nrows, [(c, r, v) for r, c, v in self.entries])

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.F == other.F
                and (self.nrows, self.ncols) == (other.nrows, other.ncols)
                and self._cols == other._cols)

    def __repr__(self):
        return f"SparseMatrix({self.F}, {self.nrows}x{self.ncols}, nnz={sum(map(len, self._cols))})"


def rank_kernel_image(m: SparseMatrix) -> Tuple[int, List[Vector], List[Vector]]:
    """Rank, a kernel basis (vectors in the domain) and a column-space basis."""
    R = Reducer(m.F, track=True)
    kernel: List[Vector] = []
    image: List[Vector] = []
    for j in range(m.ncols):
        col = m._cols[j]
        if R.add(col, tag=j):
            image.append(dict(col))
        else:
            kernel.append(R._last_relation)
    return R.rank, kernel, image


def rank(m: SparseMatrix) -> int:
    R = Reducer(m.F)
    for c in m._cols:
        R.add(c)
    return R.rank


def solve_in_image(m: SparseMatrix, target: Vector):
    """Some x with m x = target, or NOT_IN_IMAGE."""
    R = Reducer(m.F, track=True)
    for j in range(m.ncols):
        R.add(m._cols[j], tag=j)
    x = R.express(vec_clean(m.F, target))
    return NOT_IN_IMAGE if x is None else x


# ---------------------------------------------------------------- complexes

@dataclass
class CochainComplex:
    """Finite cochain complex: dims[n] basis sizes, d[n]: C^n -> C^{n+1}."""

    F: Field
    dims: Dict[int, int]
    d: Dict[int, SparseMatrix]
    labels: Dict[int, list] = dc_field(default_factory=dict)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def diff(self, n: int) -> SparseMatrix:
        if n in self.d:
            return self.d[n]
        return SparseMatrix.zero(self.F, self.dim(n + 1), self.dim(n))

    def check(self, degrees: Optional[Iterable[int]] = None) -> None:
        for n in (self.d if degrees is None else degrees):
            a, b = self.diff(n), self.diff(n + 1)
            if a.nrows != self.dim(n + 1) or a.ncols != self.dim(n):
                raise MalformedComplex(f"d^{n} has shape {a.nrows}x{a.ncols}")
            if b.ncols and a.nrows and not (b @ a).is_zero():
                raise MalformedComplex(f"d^{n + 1} d^{n} != 0")

    def degrees(self) -> List[int]:
        return sorted(n for n, k in self.dims.items() if k)


class CohomologyBasis:
    """A chosen basis of H^n with coordinates for arbitrary cocycles."""

    def __init__(self, C: CochainComplex, n: int):
        C.check([n - 1, n])
        self.F, self.n = C.F, n
        _, ker, _ = rank_kernel_image(C.diff(n))
        self._R = Reducer(C.F, track=True)
        bd = C.diff(n - 1).columns()
        self._nb = nb = len(bd)
        for j, col in enumerate(bd):
            self._R.add(col, tag=j)
        self.reps: List[Vector] = []
        for z in ker:
            if self._R.add(z, tag=nb + len(self.reps)):
                self.reps.append(z)
        self._d = C.diff(n)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, z: Vector) -> List:
        """Coordinates of the class of the cocycle z."""
        z = vec_clean(self.F, z)
        if self._d.apply(z):
            raise ValueError("not a cocycle")
        combo = self._R.express(z)
        return [combo.get(self._nb + i, self.F.zero) for i in range(self.dim)]

    def is_coboundary(self, z: Vector) -> bool:
        return not any(self.coords(z))


def cohomology(C: CochainComplex, n: int) -> Tuple[int, List[Vector]]:
    B = CohomologyBasis(C, n)
    return B.dim, B.reps


def betti_numbers(C: CochainComplex, top: Optional[int] = None) -> List[int]:
    top = max(C.degrees(), default=0) if top is None else top
    out = []
    ranks = {}
    for n in range(-1, top + 1):
        ranks[n] = rank(C.diff(n))
    for n in range(0, top + 1):
        out.append(C.dim(n) - ranks[n] - ranks[n - 1])
    return out
