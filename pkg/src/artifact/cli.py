"""Command-line entry point: `artifact <command> ...`.

Exit codes: 0 success, 1 an invariant or comparison failed, 2 invalid input.
The corpus directory defaults to the bundled one and can be replaced by setting
ARTIFACT_CORPUS.
"""
from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional

from .config import RunConfig
from .io import CorpusError, dumps, label_key, plain, resolve_entry

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _entry(ref: str, kind: str):
    try:
        e = resolve_entry(ref)
    except CorpusError as err:
        raise InputError(str(err)) from None
    if e.kind != kind:
        raise InputError(f"{ref}: expected a {kind} entry, found {e.kind!r}")
    try:
        return e, e.load()
    except CorpusError as err:
        raise InputError(str(err)) from None


def _table(rows: List[List], header: List[str]) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


def _page_text(page: Dict[str, int]) -> str:
    return ", ".join(f"({k}): {v}" for k, v in page.items()) or "0"


# ---------------------------------------------------------------- commands

def cmd_cohomology(ref: str, cfg: RunConfig):
    from .linalg import CohomologyBasis
    from .simplicial import NormalizedCochains
    _, X = _entry(ref, "space")
    F = cfg.F
    N = NormalizedCochains(X, F)
    betti, reps = [], {}
    for n in range(X.dim + 1):
        H = CohomologyBasis(N.complex, n)
        betti.append(H.dim)
        reps[str(n)] = [{label_key(N.basis[n][j][1]): c for j, c in sorted(r.items())} for r in H.reps]
    out = {"space": X.name, "field": F.name, "betti": betti, "representatives": reps}
    text = f"{X.name} over {F.name}\n" + _table([[n, b] for n, b in enumerate(betti)], ["degree", "dim H"])
    return out, text, True


def cmd_steenrod(ref: str, cfg: RunConfig):
    from .cochains import CochainAlgebra
    _, X = _entry(ref, "space")
    F = cfg.F
    if F.p == 0:
        raise InputError("Steenrod operations need a prime field")
    if F.p != 2 and not cfg.experimental:
        raise InputError("odd primes are experimental; pass --experimental")
    A = CochainAlgebra(X, F, X.dim)
    if F.p != 2:
        return _steenrod_odd(X, A, F.p)
    mats, ok = {}, True
    checks = {"Sq0_identity": True, "top_square": True}
    lines = []
    for q in range(X.dim + 1):
        Hq = A.H(q)
        for s in range(0, X.dim - q + 1):
            M = A.sq_matrix(s, q)
            mats[f"Sq{s} H{q}"] = M.to_dense()
            if Hq.dim:
                lines.append(f"Sq^{s}: H^{q} -> H^{q + s}  {M.to_dense()}")
            if s == 0 and M.to_dense() != [[int(i == j) for j in range(Hq.dim)] for i in range(Hq.dim)]:
                checks["Sq0_identity"] = False
        if 2 * q <= X.dim:
            for j in range(Hq.dim):
                e = [int(i == j) for i in range(Hq.dim)]
                if A.sq(q, q, e) != A.cup_classes(q, e, q, e):
                    checks["top_square"] = False
    ok = all(checks.values())
    out = {"space": X.name, "field": F.name, "matrices": mats, "checks": checks}
    text = f"{X.name} over F2\n" + "\n".join(lines) + "\n" + "\n".join(
        f"{k}: {'pass' if v else 'FAIL'}" for k, v in checks.items())
    return out, text, ok


def _steenrod_odd(X, A, p: int):
    """Raw classes of mu_i(x, ..., x) for basis classes x (no normalization to P^s)."""
    from .acyclic import mu_family
    fam = mu_family(p, X.dim, max(X.dim, 1))
    raw = {}
    for q in range(X.dim + 1):
        Hq = A.H(q)
        for i in range(len(fam.mu)):
            deg = p * q - i
            if Hq.dim == 0 or not 0 <= deg <= X.dim:
                continue
            cols = []
            for j in range(Hq.dim):
                z = A.rep(q, [int(k == j) for k in range(Hq.dim)])
                cols.append(A.class_of(deg, fam.power(A, i, z, q)))
            raw[f"mu{i} H{q}"] = cols
    out = {"space": X.name, "field": f"F{p}", "raw_operations": raw, "experimental": True}
    text = "\n".join(f"{k}: {plain(v)}" for k, v in raw.items()) or "no operations in range"
    return out, text, True


def cmd_serre(ref: str, cfg: RunConfig):
    from .spectral import WindowError, kudo_check, serre_pipeline
    e, fib = _entry(ref, "fibration")
    F = cfg.F
    window = cfg.window if cfg.window is not None else (e.window or 4)
    try:
        P = serre_pipeline(fib.f, F, window, cfg.r_max)
        rep = P.ss.report(list(range(1, cfg.r_max + 1)))
        checks = P.checks(min(3, cfg.r_max), simple=bool(e.data.get("simple", True)))
        trans = []
        for n in range(1, window):
            if P.fiber_basis(n).dim and P.ss.dim(n + 1, 0, n):
                for t in P.transgression(n):
                    trans.append({"degree": n, "fiber_class": t.fiber_class, "d": t.differential,
                                  "base_preimages": t.preimages[:1]})
        out = {"fibration": fib.name, "field": F.name, **rep, "checks": checks, "transgressions": trans}
        ok = all(checks.values())
        if cfg.kudo is not None:
            s, n = cfg.kudo
            k = kudo_check(P, s, n)
            out["kudo"] = k
            ok = ok and bool(k.get("ok"))
    except WindowError as err:
        raise InputError(str(err)) from None
    lines = [f"{fib.name} over {F.name}, window {window}"]
    for r, page in rep["pages"].items():
        lines.append(f"E_{r}: {_page_text(page)}")
    for t in trans:
        lines.append(f"transgression from degree {t['degree']}: {plain(t['fiber_class'])} -> {plain(t['d'])}")
    lines += [f"{k}: {'pass' if v else 'FAIL'}" for k, v in checks.items()]
    if "kudo" in out:
        lines.append(f"kudo Sq^{out['kudo']['s']}: {'pass' if out['kudo'].get('ok') else 'FAIL'}")
    return out, "\n".join(lines), ok


def cmd_forms(ref: str, cfg: RunConfig):
    from .forms import FormSpace, closed_preimage, phi_comparison
    from .linalg import CohomologyBasis
    from .simplicial import NormalizedCochains
    _, X = _entry(ref, "space")
    F = cfg.F
    if F.p != 0:
        raise InputError("forms are computed over Q")
    D = cfg.poly_cap
    rep = phi_comparison(X, D, F)
    S = FormSpace(X, F)
    N = NormalizedCochains(X, F)

    def show(form):
        return {label_key(y): S.level(y).A.format(v) for y, v in sorted(form.items(), key=lambda kv: label_key(kv[0]))
                if v}

    def cochain(k, v):
        return {label_key(N.basis[k][j][1]): c for j, c in sorted(v.items())}

    witnesses = []
    for k in range(1, X.dim + 1):
        H = CohomologyBasis(N.complex, k)
        for z in H.reps:
            w = closed_preimage(S, z, k, N, cap=max(1, min(D, 2)))
            witnesses.append({"degree": k, "class": cochain(k, z), "form": show(w),
                              "image": cochain(k, S.phi(w, k, N))})
    out = {"space": X.name, "poly_cap": D, "ok": rep.ok, "degrees": {str(k): v for k, v in rep.degrees.items()},
           "witnesses": witnesses}
    S._structure()
    if len(S._roots) == 1 and not S._occ and X.dim >= 1:
        # a single unconstrained top simplex: report Phi of the coordinate forms
        x = S._roots[0]
        L = S.level(x)
        coords = {}
        for i in range(1, X.dim + 1):
            t = S.expand({x: L.x(i)})
            dt = S.expand({x: L.dx(i)})
            coords[f"t{i}"] = cochain(0, S.phi(t, 0, N))
            coords[f"dt{i}"] = cochain(1, S.phi(dt, 1, N))
        out["coordinate_forms"] = coords
    lines = [f"{X.name}: forms with polynomial degree <= {D}"]
    rows = [[k, v["closed"], v["H"], v["phi_rank"], v["kernel"], v["exact"], v["surjective"], v["injective"],
             v.get("preimages", "-")] for k, v in rep.degrees.items()]
    lines.append(_table(rows, ["k", "closed", "H", "rank", "kernel", "exact", "onto", "1-1", "preimages"]))
    for w in witnesses:
        lines.append(f"H^{w['degree']} witness: {w['form']} -> {plain(w['image'])}")
    for name, v in out.get("coordinate_forms", {}).items():
        lines.append(f"Phi({name}) = {plain(v)}")
    lines.append(f"bijection: {'pass' if rep.ok else 'FAIL'}")
    return out, "\n".join(lines), rep.ok


def cmd_sullivan(ref: str, cfg: RunConfig):
    from .spectral import WindowError
    from .sullivan import fiber_comparison
    e, ext = _entry(ref, "model")
    if cfg.F.p != 0:
        raise InputError("model comparisons are over Q")
    try:
        fib = e.fibration()
    except CorpusError as err:
        raise InputError(str(err)) from None
    window = cfg.window if cfg.window is not None else (e.window or 4)
    try:
        rep = fiber_comparison(ext, fib.f, window, cfg.r_max, name=e.name)
    except WindowError as err:
        raise InputError(str(err)) from None
    out = rep.to_json()
    lines = [f"{e.name} vs {fib.name}, window {window}"]
    lines += [f"precondition: {p}" for p in rep.preconditions]
    for r, pg in rep.pages.items():
        lines.append(f"E_{r}: model {_page_text(pg['model'])} | space {_page_text(pg['space'])}"
                     f"  {'match' if pg['match'] else 'MISMATCH'}")
    lines.append(f"fibre model {rep.fiber['model']} vs H(F) {rep.fiber['space']}")
    for t in rep.transgressions:
        lines.append(f"transgression of {t['generator']}: {plain(t.get('d'))} (base class {plain(t.get('base_class'))})")
    if rep.first_mismatch:
        lines.append(f"first mismatch: {rep.first_mismatch}")
    lines.append(f"comparison: {'pass' if rep.ok else 'FAIL'}")
    return out, "\n".join(lines), rep.ok


def cmd_selftest(cfg: RunConfig):
    from .checks import run_selftest
    res = run_selftest()
    out = {"suites": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in res]}
    text = "\n".join(f"{'PASS' if r.ok else 'FAIL'}  {r.name} ({r.seconds:.1f}s){'' if r.ok else ': ' + r.detail}"
                     for r in res)
    return out, text, all(r.ok for r in res)


# ---------------------------------------------------------------- argument parsing

def _kudo(text: str):
    s, _, n = text.partition(":")
    try:
        return int(s), int(n or 1)
    except ValueError:
        raise argparse.ArgumentTypeError("--kudo takes s or s:n") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description="Cochains, Steenrod squares, spectral sequences "
                                                              "and polynomial forms on finite simplicial sets.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("cohomology", parents=[common], help="Betti numbers and representatives")
    p.add_argument("space")
    p.add_argument("--field", default="Q")
    p = sub.add_parser("steenrod", parents=[common], help="matrices of Sq^s on cohomology")
    p.add_argument("space")
    p.add_argument("--field", default="2")
    p.add_argument("--experimental", action="store_true", help="allow odd primes (raw operations)")
    p = sub.add_parser("serre", parents=[common], help="Serre spectral sequence of a fibration")
    p.add_argument("fibration")
    p.add_argument("--field", default="2")
    p.add_argument("--window", type=int)
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--kudo", type=_kudo, help="check Sq^s on a transgressive fibre class of degree n (s or s:n)")
    p = sub.add_parser("forms", parents=[common], help="polynomial forms versus cochains")
    p.add_argument("space")
    p.add_argument("--field", default="Q")
    p.add_argument("--poly-cap", type=int, default=4)
    p = sub.add_parser("sullivan", parents=[common], help="model spectral sequence versus a fibration")
    p.add_argument("model")
    p.add_argument("--field", default="Q")
    p.add_argument("--window", type=int)
    p.add_argument("--rmax", type=int, default=4)
    sub.add_parser("selftest", parents=[common], help="structural invariant suites")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(field=getattr(args, "field", "Q"), window=getattr(args, "window", None),
                        r_max=getattr(args, "rmax", 4), poly_cap=getattr(args, "poly_cap", 4),
                        kudo=getattr(args, "kudo", None), as_json=args.json,
                        experimental=getattr(args, "experimental", False))
        try:
            cfg.F
        except ValueError as err:
            raise InputError(f"bad field: {err}") from None
        if cfg.poly_cap < 0 or (cfg.window is not None and cfg.window < 0) or cfg.r_max < 1:
            raise InputError("caps and windows must be nonnegative (and --rmax >= 1)")
        cmd = args.command
        if cmd == "selftest":
            out, text, ok = cmd_selftest(cfg)
        else:
            target = getattr(args, {"serre": "fibration", "sullivan": "model"}.get(cmd, "space"))
            out, text, ok = globals()[f"cmd_{cmd}"](target, cfg)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    print(dumps(out) if cfg.as_json else text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
