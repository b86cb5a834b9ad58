"""Independent reference computations (sympy), kept apart from the package."""
from itertools import combinations

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix


def domain(p):
    return QQ if p == 0 else GF(p)


def dense_rank(rows, p, ncols=None):
    K = domain(p)
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return DomainMatrix([[K(int(x)) if p else K(x) for x in r] for r in rows], (len(rows), ncols), K).rank()


def sparse_rank(m, p):
    """Rank of an artifact SparseMatrix, recomputed densely by sympy."""
    rows = [[0] * m.ncols for _ in range(m.nrows)]
    for i, j, v in m.entries:
        rows[i][j] = v
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return dense_rank(rows, p, m.ncols)


def complex_faces(facets):
    simp = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            simp.update(combinations(f, k))
    by_dim = {}
    for s in sorted(simp):
        by_dim.setdefault(len(s) - 1, []).append(s)
    return by_dim


def betti_from_facets(facets, p):
    """Simplicial cohomology of an ordered simplicial complex."""
    S = complex_faces(facets)
    top = max(S)
    idx = {n: {s: i for i, s in enumerate(S[n])} for n in S}
    ranks = {-1: 0, top: 0}
    for n in range(top):
        rows = [[0] * len(S[n]) for _ in S[n + 1]]
        for r, s in enumerate(S[n + 1]):
            for i in range(len(s)):
                rows[r][idx[n][s[:i] + s[i + 1:]]] = (-1) ** i
        ranks[n] = dense_rank(rows, p, len(S[n]))
    return [len(S[n]) - ranks[n] - ranks[n - 1] for n in range(top + 1)]


RP2_FACETS = [(1, 2, 4), (1, 2, 6), (1, 3, 5), (1, 3, 6), (1, 4, 5),
              (2, 3, 4), (2, 3, 5), (2, 5, 6), (3, 4, 6), (4, 5, 6)]
# Moebius' 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7
TORUS7_FACETS = [tuple(sorted({i % 7, (i + 1) % 7, (i + 3) % 7})) for i in range(7)] + \
                [tuple(sorted({i % 7, (i + 2) % 7, (i + 3) % 7})) for i in range(7)]


def simplex_facets(n):
    return [tuple(range(n + 1))]


def boundary_facets(n):
    return [c for c in combinations(range(n + 1), n)]
