"""Structural invariant suites (run by `artifact selftest`)."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, List, Optional

from .config import SelftestConfig
from .linalg import QQ, Field, SparseMatrix


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _spaces(cfg: SelftestConfig):
    from .io import resolve_entry
    return [resolve_entry(s).load() for s in cfg.spaces]


def suite_d_squared(cfg: SelftestConfig) -> Optional[str]:
    from .forms import assoc_level, omega_level
    from .operads import Generators, bar_resolution_operad, com_operad, free_algebra
    from .simplicial import NormalizedCochains
    n_checked = 0
    for X in _spaces(cfg):
        for p in cfg.fields:
            C = NormalizedCochains(X, Field(p)).complex
            for n in range(X.dim - 1):
                if not (C.diff(n + 1) @ C.diff(n)).is_zero():
                    return f"d^2 != 0 on cochains of {X.name} over {Field(p).name} in degree {n}"
                n_checked += 1
    for n in range(cfg.omega_max + 1):
        if omega_level(n).A.d_squared_violation() is not None:
            return f"d^2 != 0 on Omega_{n}"
    for n in range(cfg.assoc_max + 1):
        L = assoc_level(n)
        for k in (0, 1):
            for w in L.basis(k, 2):
                if L.d(L.d({w: 1})):
                    return f"d^2 != 0 on the associative Omega_{n} at {w}"
    M = Generators(["a", "b", "c"], {"a": 1, "b": 2, "c": 3}, {"b": {"c": 1}})
    for O in (com_operad(QQ, 3), bar_resolution_operad(Field(2), cfg.rb_arity, cfg.rb_depth)):
        A = free_algebra(O, M, 3, (-cfg.rb_depth, 6))
        bad = A.d_squared_violations()
        if bad:
            return f"d^2 != 0 in the free {type(O).__name__} algebra at {bad[0]!r}"
    return None


def suite_simplicial_identities(cfg: SelftestConfig) -> Optional[str]:
    from .forms import assoc_level, omega_level
    from .simplicial import check_identities
    for X in _spaces(cfg):
        bad = check_identities(X, X.dim + 1)
        if bad:
            return f"{X.name}: {bad}"
    for n in range(cfg.omega_max + 1):
        bad = omega_level(n).identity_violation()
        if bad:
            return bad
    for n in range(cfg.assoc_max + 1):
        bad = assoc_level(n).identity_violation()
        if bad:
            return bad
    return None


def suite_operad_axioms(cfg: SelftestConfig) -> Optional[str]:
    from .operads import bar_resolution_operad, com_operad, operad_axiom_check
    for O in (com_operad(QQ, 4), com_operad(Field(2), 4),
              bar_resolution_operad(Field(2), cfg.rb_arity, cfg.rb_depth),
              bar_resolution_operad(QQ, cfg.rb_arity, cfg.rb_depth)):
        rep = operad_axiom_check(O)
        if not rep.ok:
            return f"{type(O).__name__} over {O.F.name}: {rep.failure}"
    return None


def suite_unit_law(cfg: SelftestConfig) -> Optional[str]:
    from .forms import FormSpace
    from .operads import Generators, bar_resolution_operad, com_operad, free_algebra
    from .simplicial import standard_simplex
    M = Generators(["a", "b"], {"a": 1, "b": 2})
    for O in (com_operad(QQ, 3), bar_resolution_operad(Field(2), cfg.rb_arity, cfg.rb_depth)):
        A = free_algebra(O, M, 2, (-cfg.rb_depth, 4))
        one = A.unit()
        mu = O.section(2)
        for deg, bs in A.basis.items():
            for e in bs:
                if A.theta(mu, [one, {e: A.F.one}]) != {e: A.F.one}:
                    return f"theta_2(1_2; 1, a) != a for {e!r} in {type(O).__name__}"
    S = FormSpace(standard_simplex(2))
    one = S.constant(1)
    forms = S.basis(0, 1) + S.basis(1, 1)
    for a in forms:
        if S.mul(one, a) != {y: v for y, v in a.items() if v}:
            return "1 . w != w for a form on Delta[2]"
    deg = {id(a): (0 if i < len(S.basis(0, 1)) else 1) for i, a in enumerate(forms)}
    for a in forms:
        for b in forms:
            lhs = S.d(S.mul(a, b))
            rhs = S.add(S.mul(S.d(a), b), S.mul(a, S.d(b)), -1 if deg[id(a)] % 2 else 1)
            if lhs != rhs:
                return "Leibniz rule fails for forms on Delta[2]"
    return None


def _circle_presheaves(F: Field):
    from .forms import Presheaf
    from .simplicial import circle_1
    X = circle_1()
    I1, I2 = SparseMatrix.identity(F, 1), SparseMatrix.identity(F, 2)
    U = SparseMatrix.from_columns(F, 2, [{0: 1}, {0: 1, 1: 1}])

    def sheaf(n, R):
        return Presheaf(X, F, {"v": {0: n}, "e": {0: n}}, {"v": {}, "e": {}},
                        {"e": {0: {0: SparseMatrix.identity(F, n)}, 1: {0: R}}})

    return X, sheaf(1, I1), sheaf(2, U), sheaf(1, I1)


def suite_constant_coefficients(cfg: SelftestConfig) -> Optional[str]:
    from .forms import LocalForms, constant_presheaf
    from .linalg import betti_numbers
    from .simplicial import NormalizedCochains
    from .io import resolve_entry
    for name in ("circle", "delta2-boundary", "torus"):
        X = resolve_entry(name).load()
        b = betti_numbers(NormalizedCochains(X, QQ).complex, X.dim)
        L = LocalForms(constant_presheaf(X, QQ, {0: 2}), 2)
        for r in range(X.dim + 1):
            got = L.form_cohomology(r, 0)
            if got != 2 * b[r]:
                return f"{X.name}: H^{r}(X; M) has dim {got}, expected {2 * b[r]}"
    return None


def suite_exactness(cfg: SelftestConfig) -> Optional[str]:
    """0 -> M' -> M -> M'' -> 0 on the circle with unipotent monodromy on M."""
    from .forms import LocalForms, presheaf_map_sections
    X, Msub, M, Mquot = _circle_presheaves(QQ)
    inc = {y: {0: SparseMatrix.from_columns(QQ, 2, [{0: 1}])} for y in X.dim_of}
    proj = {y: {0: SparseMatrix.from_columns(QQ, 1, [{}, {0: 1}])} for y in X.dim_of}
    for sh in (Msub, M, Mquot):
        if sh.violation():
            return sh.violation()
    Ls, L, Lq = (LocalForms(P, cfg.poly_cap) for P in (Msub, M, Mquot))
    for r in (0, 1):
        a = presheaf_map_sections(Ls, L, inc, r, 0)
        b = presheaf_map_sections(L, Lq, proj, r, 0)
        if a["kernel"] != 0:
            return f"inclusion not injective on degree-{r} sections"
        if b["rank"] != b["sections"] - b["kernel"] or b["rank"] != Lq.sections_dim(r, 0):
            return f"projection not surjective on degree-{r} sections"
        if a["rank"] != b["kernel"]:
            return f"not exact in the middle in degree {r}: {a['rank']} != {b['kernel']}"
    return None


def suite_rank_identity(cfg: SelftestConfig) -> Optional[str]:
    """Cohomology in the coefficient direction equals forms with coefficients in H^s(F)."""
    from .forms import LocalForms, Presheaf, cohomology_presheaf
    from .simplicial import circle_1
    F = QQ
    X = circle_1()
    d = SparseMatrix.from_columns(F, 1, [{0: 1}, {}])
    R0 = SparseMatrix.from_columns(F, 2, [{0: 1}, {1: -1}])
    P = Presheaf(X, F, {"v": {0: 2, 1: 1}, "e": {0: 2, 1: 1}}, {"v": {0: d}, "e": {0: d}},
                 {"e": {0: {0: SparseMatrix.identity(F, 2), 1: SparseMatrix.identity(F, 1)},
                        1: {0: R0, 1: SparseMatrix.identity(F, 1)}}})
    if P.violation():
        return P.violation()
    L = LocalForms(P, cfg.poly_cap)
    for s in (0, 1):
        LH = LocalForms(cohomology_presheaf(P, s), cfg.poly_cap)
        for r in (0, 1):
            a, b = L.coefficient_cohomology(r, s), LH.sections_dim(r, 0)
            if a != b:
                return f"(r, s) = ({r}, {s}): {a} != {b}"
    return None


SUITES: List = [
    ("d^2 = 0", suite_d_squared),
    ("simplicial identities", suite_simplicial_identities),
    ("operad axioms (Com, R_B)", suite_operad_axioms),
    ("unit and Leibniz laws", suite_unit_law),
    ("constant coefficients", suite_constant_coefficients),
    ("short exact presheaf sequence", suite_exactness),
    ("coefficient cohomology rank identity", suite_rank_identity),
]


def run_selftest(cfg: Optional[SelftestConfig] = None, only: Optional[Callable[[str], bool]] = None) -> List[SuiteResult]:
    cfg = cfg or SelftestConfig()
    out = []
    for name, fn in SUITES:
        if only and not only(name):
            continue
        t = time.perf_counter()
        try:
            bad = fn(cfg)
        except Exception as e:  # a crash is a failed suite, reported with its message
            bad = f"{type(e).__name__}: {e}"
        out.append(SuiteResult(name, bad is None, bad or "ok", time.perf_counter() - t))
    return out
