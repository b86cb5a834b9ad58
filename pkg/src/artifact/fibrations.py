"""Concrete surjections used as Leray-Serre inputs: products, W G -> W-bar G,
the path fibration over K(Z/2,2), and a clutching model of the Hopf map."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .linalg import QQ, SparseMatrix, rank_kernel_image
from .simplicial import (EZSet, SimplicialError, SimplicialMap, WBar, circle_1, classifying_spaces,
                         collapse, cyclic_group, cycle, from_facets, glue, product, projections)


@dataclass
class Fibration:
    name: str
    f: SimplicialMap
    note: str = ""

    @property
    def total(self):
        return self.f.source

    @property
    def base(self):
        return self.f.target


def product_fibration(B: EZSet, F: EZSet, name: Optional[str] = None) -> Fibration:
    P = product(B, F)
    p1, _ = projections(P, B, F)
    return Fibration(name or f"{B.name}x{F.name}->{B.name}", p1, "trivial fibration")


def w_fibration(order: int = 2, dim_cap: int = 6) -> Fibration:
    W, Wb, pr = classifying_spaces(cyclic_group(order), dim_cap)
    return Fibration(f"W(Z/{order})->Wbar(Z/{order})", pr, "universal bundle, discrete fiber")


def kz2_path_fibration(dim_cap: int = 6) -> Fibration:
    """K(Z/2,1) -> W G -> W-bar G = K(Z/2,2) with G = W-bar(Z/2)."""
    G = WBar(cyclic_group(2))
    W, Wb, pr = classifying_spaces(G, dim_cap)
    return Fibration("K(Z/2,1)->WG->K(Z/2,2)", pr, "path fibration")


# ---------------------------------------------------------------- Hopf clutching

def _cone_on_polygon(L: int) -> EZSet:
    facets = [(0, i, i % L + 1) for i in range(1, L + 1)]
    return from_facets(facets, f"D{L}")


def _fundamental_cycle(X: EZSet) -> Dict:
    """A generating integral 1-cycle of a circle-like X, keyed by edge label."""
    edges, verts = X.labels(1), X.labels(0)
    vi = {v: k for k, v in enumerate(verts)}
    cols = []
    for e in edges:
        col = {}
        for i, (_, w) in enumerate(X.faces[e]):
            col[vi[w]] = col.get(vi[w], 0) + (1 if i % 2 == 0 else -1)
        cols.append({k: c for k, c in col.items() if c})
    _, ker, _ = rank_kernel_image(SparseMatrix.from_columns(QQ, len(verts), cols))
    if len(ker) != 1:
        raise SimplicialError("not a circle")
    z = ker[0]
    m = min(abs(c) for c in z.values())
    return {edges[k]: Fraction(c) / m for k, c in z.items()}


def _circle_images(sub_edges, tris, faces) -> List[Dict]:
    """All simplicial maps (on edges/triangles) from a 2-dim set into circle_1,
    encoded by 0/1 edge values with d_1 = d_0 + d_2 on every triangle."""
    order = list(sub_edges)
    tri_of = {e: [] for e in order}
    for t in tris:
        for _, e in faces[t]:
            if e in tri_of:
                tri_of[e].append(t)
    val: Dict = {}
    out = []

    def ok(t):
        vs = []
        for eta, e in faces[t]:
            if len(eta) == 2 and eta[0] == eta[1]:
                vs.append(0)
            elif e in val:
                vs.append(val[e])
            else:
                return True
        return vs[1] == vs[0] + vs[2]

    def rec(k):
        if k == len(order):
            out.append(dict(val))
            return
        e = order[k]
        for b in (0, 1):
            val[e] = b
            if all(ok(t) for t in tri_of[e]):
                rec(k + 1)
            del val[e]

    rec(0)
    return out


def hopf_clutching(L: int = 3, n: int = 3) -> Fibration:
    """S^3 -> S^2 as (D x C) glued to a circle along dD x C by a map of degree (1,1).

    D is a cone on an L-gon and C an n-cycle; the base is D/dD.  The map sends
    D x C to D/dD by projection and the attached circle to the collapsed point.
    """
    D = _cone_on_polygon(L)
    Cp = cycle(n)
    Y = product(D, Cp)
    dD = {y for y in D.dim_of if 0 not in y}
    sub = [y for y in Y.dim_of if y[0][1] in dD]
    sub_edges = [y for y in sub if Y.dim_of[y] == 1]
    tris = [y for y in sub if Y.dim_of[y] == 2]
    zD = _fundamental_cycle(from_facets([y for y in dD if len(y) == 2], "dD"))
    zC = _fundamental_cycle(Cp)
    choice = None
    for val in _circle_images(sub_edges, tris, Y.faces):
        degs = []
        for k in Cp.labels(0):
            degs.append(sum(c * val.get((((0, 1), e), ((0, 0), k)), 0) for e, c in zD.items()))
        for v in D.labels(0):
            if v in dD:
                degs.append(sum(c * val.get((((0, 0), v), ((0, 1), e)), 0) for e, c in zC.items()))
        if all(abs(d) == 1 for d in degs):
            choice = val
            break
    if choice is None:
        raise SimplicialError("no clutching map of degree (1,1)")
    S1 = circle_1()
    attach = {}
    for y in sub:
        m = Y.dim_of[y]
        if m == 0:
            attach[y] = ((0,), "v")
        elif m == 1:
            attach[y] = ((0, 1), "e") if choice[y] else ((0, 0), "v")
        else:
            v0, v2 = (0 if eta[0] == eta[1] else choice[e] for eta, e in (Y.faces[y][0], Y.faces[y][2]))
            if v0:
                attach[y] = ((0, 0, 1), "e")
            elif v2:
                attach[y] = ((0, 1, 1), "e")
            else:
                attach[y] = ((0, 0, 0), "v")
    E, whereE = glue(Y, sub, S1, attach, "E_hopf")
    B, whereB = collapse(D, dD, "S2")
    images = {}
    for lab, m in E.dim_of.items():
        kind, y = lab
        if kind == "C":
            images[lab] = (tuple([0] * (m + 1)), ("C", "*"))
        else:
            eta_a, a = y[0]
            th, t = whereB[a]
            images[lab] = (tuple(th[k] for k in eta_a), t)
    f = SimplicialMap(E, B, images=images, name="hopf")
    bad = f.check(3)
    if bad:
        raise SimplicialError(f"clutching map is not simplicial: {bad}")
    return Fibration(f"Hopf clutching L={L} n={n}", f, "S1 -> S3 -> S2")
