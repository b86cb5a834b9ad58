"""Free extensions of commutative dg algebras over Q and their spectral sequence.

A FreeCDGA is a free graded-commutative algebra whose generators are listed in
stage order: d of a generator only involves earlier generators.  A free
extension A -> A (x) L(V) adds generators V with a twisted differential; its
fibre model is L(V) with the differential obtained by killing A^{>0}.  The
extension is filtered by A-degree, and the resulting spectral sequence is
compared page by page with the Serre spectral sequence of a simplicial
fibration.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .gca import GCA, Elem, GCAError
from .linalg import QQ, CohomologyBasis, Field, SparseMatrix, betti_numbers
from .spectral import INF, FilteredComplex, SpectralSequence, WindowError


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------- free CDGAs

class FreeCDGA(GCA):
    """A free CDGA whose generator order is a stage filtration."""

    def __init__(self, names: Sequence[str], degrees: Sequence[int], d: Optional[Mapping] = None,
                 F: Field = QQ, name: str = "A"):
        super().__init__(F, names, degrees, d, name)
        self._check_stages()
        x = self.d_squared_violation()
        if x is not None:
            raise ModelError(f"d^2 != 0 on generator {x}")

    def _check_stages(self):
        for i, x in enumerate(self.names):
            for m in self._dgen[i]:
                if any(e and j >= i for j, e in enumerate(m)):
                    raise ModelError(f"d({x}) involves a generator of the same or a later stage")

    def one_connected(self) -> bool:
        return all(g >= 2 for g in self.degrees)

    def to_json(self) -> Dict:
        return {"generators": [{"name": x, "degree": g} for x, g in zip(self.names, self.degrees)],
                "d": {x: self.format(self.d_gen(x)) for x in self.names if self.d_gen(x)}}


def cdga_from_json(data: Mapping, name: str = "A", F: Field = QQ) -> FreeCDGA:
    try:
        gens = data["generators"]
        names = [g["name"] for g in gens]
        degrees = [int(g["degree"]) for g in gens]
    except (KeyError, TypeError) as e:
        raise ModelError(f"malformed CDGA description: {e}") from None
    try:
        return FreeCDGA(names, degrees, data.get("d", {}), F, name)
    except GCAError as e:
        raise ModelError(str(e)) from None


@dataclass
class CDGACohomology:
    dims: Dict[int, int]
    reps: Dict[int, List[Elem]]

    def poincare(self) -> List[int]:
        return [self.dims[k] for k in sorted(self.dims)]


def cdga_cohomology(A: GCA, window: int) -> CDGACohomology:
    """Exact cohomology in degrees 0..window, with representative cocycles."""
    if window < 0:
        raise WindowError("window must be nonnegative")
    if any(g <= 0 for g in A.degrees):
        raise WindowError("generators of degree <= 0 give an infinite basis in the window")
    C = A.complex(0, window + 1)
    dims, reps = {}, {}
    for k in range(window + 1):
        H = CohomologyBasis(C, k)
        dims[k] = H.dim
        reps[k] = [{C.labels[k][j]: c for j, c in r.items()} for r in H.reps]
    return CDGACohomology(dims, reps)


# ---------------------------------------------------------------- free extensions

@dataclass
class FreeExtension:
    base: FreeCDGA
    V: List[str]
    V_degrees: List[int]
    total: GCA
    tau: Dict[str, Elem]

    @property
    def F(self) -> Field:
        return self.base.F

    def a_degree(self, m) -> int:
        """Degree of the base part of a monomial of the total algebra."""
        nb = self.base.n
        return sum(e * g for e, g in zip(m[:nb], self.base.degrees))

    def include(self, a: Elem) -> Elem:
        pad = (0,) * len(self.V)
        return {tuple(m) + pad: c for m, c in a.items()}


def free_extension(A: FreeCDGA, V: Sequence[Tuple[str, int]], tau: Mapping[str, object],
                   name: Optional[str] = None) -> FreeExtension:
    """A (x) L(V) with d|A = d_A and d v = tau[v] (strings are parsed in the total algebra)."""
    names = [v for v, _ in V]
    degs = [int(g) for _, g in V]
    if set(names) & set(A.names):
        raise ModelError("new generators must not clash with base generators")
    bad = set(tau) - set(names)
    if bad:
        raise ModelError(f"tau given on unknown generators {sorted(bad)}")
    C = GCA(A.F, A.names + names, A.degrees + degs, name=name or f"{A.name}(x)L(V)")
    pad = (0,) * len(names)
    dgen = [{tuple(m) + pad: c for m, c in A.d_gen(x).items()} for x in A.names]
    tv = {}
    for i, v in enumerate(names):
        val = tau.get(v, {})
        val = C.parse(val) if isinstance(val, str) else C.clean(val)
        if val and C.degree(val) != degs[i] + 1:
            raise ModelError(f"tau({v}) has degree {C.degree(val)}, expected {degs[i] + 1}")
        for m in val:
            if any(e for e in m[A.n + i:]):
                raise ModelError(f"tau({v}) is ill-filtered: it involves {v} or a later generator")
        tv[v] = val
        dgen.append(val)
    C._dgen = dgen
    x = C.d_squared_violation()
    if x is not None:
        raise ModelError(f"d^2 != 0 on generator {x}")
    return FreeExtension(A, names, degs, C, tv)


def fiber_model(ext: FreeExtension) -> GCA:
    """L(V) with the differential induced by killing the positive-degree part of the base."""
    nb = ext.base.n
    d = {}
    for v in ext.V:
        d[v] = {m[nb:]: c for m, c in ext.tau[v].items() if not any(m[:nb])}
    return GCA(ext.F, list(ext.V), list(ext.V_degrees), d, "fiber")


def extension_from_json(data: Mapping, F: Field = QQ) -> FreeExtension:
    A = cdga_from_json(data["base"], "A", F)
    ext = data["extension"]
    V = [(g["name"], int(g["degree"])) for g in ext["generators"]]
    return free_extension(A, V, ext.get("d", {}))


# ---------------------------------------------------------------- the spectral sequence

def _kunneth(a: Mapping[int, int], b: Mapping[int, int], window: int) -> Dict[Tuple[int, int], int]:
    return {(p, q): a[p] * b[q] for p in a for q in b if p + q <= window and a[p] * b[q]}


@dataclass
class ModelSS:
    ext: FreeExtension
    ss: SpectralSequence
    window: int
    hypotheses: List[str] = field(default_factory=list)
    index: Dict[int, Dict] = field(default_factory=dict, repr=False)

    def page(self, r) -> Dict[Tuple[int, int], int]:
        return self.ss.page(r)

    def e2_expected(self) -> Dict[Tuple[int, int], int]:
        """dim H^p(A) * dim H^q(fibre model) in the window."""
        hA = cdga_cohomology(self.ext.base, self.window).dims
        hV = cdga_cohomology(fiber_model(self.ext), self.window).dims
        return _kunneth(hA, hV, self.window)

    def total_cohomology(self) -> Dict[int, int]:
        return cdga_cohomology(self.ext.total, self.window).dims

    def checks(self, r_upto: int = 3) -> Dict[str, bool]:
        return {
            "hypotheses": not self.hypotheses,
            "E2_tensor": self.page(2) == self.e2_expected(),
            "recomputation": not self.ss.recomputation_failures(r_upto),
            "convergence": self.ss.converges(),
        }

    def vector(self, a: Elem, n: int) -> Dict[int, object]:
        """Coordinates of a degree-n element of the total algebra in the filtered basis."""
        idx = self.index[n]
        return {idx[m]: c for m, c in a.items()}

    def transgression(self, v: str) -> Dict:
        """d_{n+1}[v] for a fibre generator of degree n, against the base class of its tau."""
        ext, ss = self.ext, self.ss
        i = ext.V.index(v)
        n = ext.V_degrees[i]
        if n + 1 > self.window:
            raise WindowError(f"transgression of {v} needs window >= {n + 1}")
        r = n + 1
        src = ss.coords(r, 0, n, self.vector(ext.total.gen(v), n))
        if src is None:
            return {"generator": v, "transgressive": False}
        dr = ss.d_r(r, 0, n)
        img = dr.apply({j: c for j, c in enumerate(src) if c})
        image = [img.get(j, ext.F.zero) for j in range(dr.nrows)]
        nb = ext.base.n
        a = {m: c for m, c in ext.tau[v].items() if not any(m[nb:])}
        base = ss.coords(r, r, r, self.vector(a, r)) if a else [ext.F.zero] * dr.nrows
        return {"generator": v, "transgressive": True, "degree": n, "d": image,
                "base_class": base, "matches": base is not None and list(base) == image,
                "nonzero": any(image)}

    def report(self, r_list: Optional[Sequence[int]] = None) -> Dict:
        rep = self.ss.report(r_list)
        rep["hypotheses"] = list(self.hypotheses)
        rep["checks"] = self.checks()
        return rep


def model_ss(ext: FreeExtension, window: int, r_max: int = 4) -> ModelSS:
    """Filter A (x) L(V) by A-degree (F^p = base degree >= p) and build the pages."""
    hyp = []
    if not ext.base.one_connected():
        hyp.append("base has generators in degree <= 1")
    if any(g <= 0 for g in ext.V_degrees):
        hyp.append("fibre generators must have positive degree")
    if hyp and any(g <= 0 for g in ext.base.degrees + ext.V_degrees):
        raise ModelError("; ".join(hyp))
    C = ext.total
    dims, d, filt, labels, index = {}, {}, {}, {}, {}
    for n in range(window + 2):
        basis = sorted(C.basis(n), key=lambda m: (ext.a_degree(m), m))
        labels[n] = basis
        index[n] = {m: j for j, m in enumerate(basis)}
        dims[n] = len(basis)
        filt[n] = [ext.a_degree(m) for m in basis]
    for n in range(window + 1):
        cols = []
        for m in labels[n]:
            cols.append({index[n + 1][mm]: c for mm, c in C.d(C.mono(m)).items()})
        d[n] = SparseMatrix.from_columns(C.F, dims[n + 1], cols)
    FC = FilteredComplex(C.F, dims, d, filt, window, labels)
    return ModelSS(ext, SpectralSequence(FC, r_max), window, hyp, index)


# ---------------------------------------------------------------- comparison with a fibration

@dataclass
class ComparisonReport:
    name: str
    window: int
    preconditions: List[str] = field(default_factory=list)
    pages: Dict[str, Dict] = field(default_factory=dict)
    first_mismatch: Optional[Dict] = None
    fiber: Dict = field(default_factory=dict)
    model_checks: Dict[str, bool] = field(default_factory=dict)
    transgressions: List[Dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (not self.preconditions and self.first_mismatch is None and self.fiber.get("match", False)
                and all(self.model_checks.values()))

    def to_json(self) -> Dict:
        return {"name": self.name, "window": self.window, "ok": self.ok,
                "preconditions": self.preconditions, "pages": self.pages,
                "first_mismatch": self.first_mismatch, "fiber": self.fiber,
                "model_checks": self.model_checks, "transgressions": self.transgressions}


def _fmt(page: Mapping) -> Dict[str, int]:
    return {f"{p},{q}": v for (p, q), v in sorted(page.items())}


def fiber_comparison(ext: FreeExtension, f, window: int = 4, r_max: int = 4,
                     pipeline=None, name: str = "model") -> ComparisonReport:
    """Compare the model spectral sequence of ext with the Serre spectral sequence of f over Q.

    Base and total cohomology are checked first; pages E_2..E_{r_max} and E_inf are then
    compared dimensionwise in total degree <= window, and the fibre model cohomology
    against H^*(F; Q) at the base point.
    """
    from .simplicial import NormalizedCochains
    from .spectral import serre_pipeline
    F = ext.F
    rep = ComparisonReport(name, window)
    P = pipeline if pipeline is not None else serre_pipeline(f, F, window, r_max)
    M = model_ss(ext, window, r_max)
    rep.preconditions.extend(M.hypotheses)
    hB = betti_numbers(P.base_cochains.complex, window)
    hA = cdga_cohomology(ext.base, window).dims
    hE = betti_numbers(NormalizedCochains(f.source, F, window).complex, window)
    hT = M.total_cohomology()
    for n in range(window + 1):
        if hA[n] != hB[n]:
            rep.preconditions.append(f"base cohomology differs in degree {n}: model {hA[n]}, space {hB[n]}")
        if hT[n] != hE[n]:
            rep.preconditions.append(f"total cohomology differs in degree {n}: model {hT[n]}, space {hE[n]}")
    for r in list(range(2, r_max + 1)) + [INF]:
        key = "inf" if r == INF else str(r)
        mp, tp = M.page(r), P.ss.page(r)
        rep.pages[key] = {"model": _fmt(mp), "space": _fmt(tp), "match": mp == tp}
        if mp != tp and rep.first_mismatch is None:
            spots = sorted(set(mp) | set(tp))
            pq = next(s for s in spots if mp.get(s, 0) != tp.get(s, 0))
            rep.first_mismatch = {"page": key, "p": pq[0], "q": pq[1],
                                  "model": mp.get(pq, 0), "space": tp.get(pq, 0)}
    hV = cdga_cohomology(fiber_model(ext), window).dims
    hF = betti_numbers(P._fiber_C, window)
    rep.fiber = {"model": [hV[n] for n in range(window + 1)], "space": [hF[n] for n in range(window + 1)],
                 "match": all(hV[n] == hF[n] for n in range(window + 1))}
    rep.model_checks = M.checks(min(3, r_max))
    rep.transgressions = [M.transgression(v) for v, g in zip(ext.V, ext.V_degrees) if g + 1 <= window]
    return rep


def load_extension(path: str, F: Field = QQ) -> FreeExtension:
    with open(path) as fh:
        return extension_from_json(json.load(fh), F)
