"""Planar disk network of the factorization and the annulus combinatorics.

The disk network is the left-to-right concatenation of the 2n-1 elementary
blocks of the factorization; boundary measurements are path sums, so the
Lindstrom (vertex-disjoint path) expansion of minors can be checked against
exact determinants.  The annulus side is represented by its combinatorial
data only: faces, directed-dual edge multiplicities, and the integer
matrices Omega, A and B(eps) tying face weights to the cluster seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .coxeter import CombData, CoxeterPair, FactorParams, factor_sequence
from .errors import ArgumentError, InvalidParams
from .linalg import RatMatrix, minor, rat_str


@dataclass
class PlanarNetwork:
    n: int
    blocks: List[tuple]
    vertices: List[tuple] = field(default_factory=list)  # (id, level, column, color)
    edges: List[tuple] = field(default_factory=list)  # (src, dst, weight)
    sources: List[int] = field(default_factory=list)
    sinks: List[int] = field(default_factory=list)

    def __post_init__(self):
        self._build()

    def _build(self):
        n = self.n
        self.vertices, self.edges = [], []
        self.sources = [self._new(level, 0, "source") for level in range(1, n + 1)]
        front = list(self.sources)
        pending = [Fraction(1)] * (n + 1)  # 1-based levels
        for col, block in enumerate(self.blocks, start=1):
            kind = block[0]
            if kind == "diag":
                for lev in range(1, n + 1):
                    pending[lev] *= block[1][lev - 1]
                continue
            _, i, t = block
            lo, hi = (i, i + 1)
            src_level, dst_level = (hi, lo) if kind == "lower" else (lo, hi)
            a = self._new(src_level, col, "white")
            b = self._new(dst_level, col, "black")
            self._edge(front[src_level - 1], a, pending[src_level])
            self._edge(front[dst_level - 1], b, pending[dst_level])
            pending[src_level] = pending[dst_level] = Fraction(1)
            self._edge(a, b, t)
            front[src_level - 1] = a
            front[dst_level - 1] = b
        last = len(self.blocks) + 1
        self.sinks = []
        for lev in range(1, n + 1):
            s = self._new(lev, last, "sink")
            self._edge(front[lev - 1], s, pending[lev])
            self.sinks.append(s)

    def _new(self, level, column, color) -> int:
        vid = len(self.vertices)
        self.vertices.append((vid, level, column, color))
        return vid

    def _edge(self, src, dst, weight):
        self.edges.append((src, dst, Fraction(weight)))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [
                {"id": v, "level": lev, "column": col, "color": color}
                for (v, lev, col, color) in self.vertices
            ],
            "edges": [
                {"from": s, "to": t, "weight": rat_str(w)} for (s, t, w) in self.edges
            ],
        }


def build_disk_network(pair: CoxeterPair, p: FactorParams) -> PlanarNetwork:
    return PlanarNetwork(pair.n, list(factor_sequence(pair, p)))


def boundary_matrix(N: PlanarNetwork) -> RatMatrix:
    """Entry (i,j) = sum of path weights from source i to sink j."""
    # vertices are created in topological order
    reach: List[Dict[int, Fraction]] = [dict() for _ in N.vertices]
    for k, s in enumerate(N.sources):
        reach[s][k] = Fraction(1)
    for (src, dst, w) in N.edges:
        for k, val in reach[src].items():
            reach[dst][k] = reach[dst].get(k, Fraction(0)) + val * w
    X = RatMatrix.zeros(N.n, N.n)
    for j, t in enumerate(N.sinks):
        for k, val in reach[t].items():
            X[k, j] = val
    return X


def _paths_from(N: PlanarNetwork, start: int):
    """All directed paths from start to any sink: (sink, vertex frozenset, weight)."""
    adj: Dict[int, List[Tuple[int, Fraction]]] = {}
    for (s, t, w) in N.edges:
        adj.setdefault(s, []).append((t, w))
    sinks = set(N.sinks)
    out = []

    def walk(v, visited, weight):
        if v in sinks:
            out.append((v, frozenset(visited), weight))
            return
        for (t, w) in adj.get(v, ()):
            walk(t, visited + [t], weight * w)

    walk(start, [start], Fraction(1))
    return out


def lindstrom_minor(N: PlanarNetwork, sources: Sequence[int], sinks: Sequence[int]) -> Fraction:
    """Sum over vertex-disjoint path families joining sources to sinks in order."""
    if len(sources) != len(sinks):
        raise ArgumentError("need equally many sources and sinks")
    want = [N.sinks[j - 1] for j in sinks]
    paths = {i: _paths_from(N, N.sources[i - 1]) for i in sources}
    total = Fraction(0)

    def rec(idx, used, acc):
        nonlocal total
        if idx == len(sources):
            total += acc
            return
        src = sources[idx]
        target = want[idx]
        for (snk, verts, w) in paths[src]:
            if snk == target and not (verts & used):
                rec(idx + 1, used | verts, acc * w)

    rec(0, frozenset(), Fraction(1))
    return total


# ---------------------------------------------------------------------------
# face weights


def face_weights(pair: CoxeterPair, p: FactorParams, H0=Fraction(1)) -> List[Fraction]:
    """(y_00, y_10, y_01, y_11, ..., y_0,n-1, y_1,n-1); H0 is a gauge input."""
    H0 = Fraction(H0)
    if H0 == 0:
        raise InvalidParams("H0 must be nonzero")
    c, d = p.c, p.d
    y = [1 / H0, H0 / d[0]]  # y_10 = H0^2/H_1 with H_1 = d_1 H0
    for i in range(1, p.n):
        y.append(1 / c[i - 1])
        y.append(c[i - 1] * d[i - 1] / d[i])
    return y


def face_weight_inner(p: FactorParams) -> Fraction:
    """Weight of the face adjacent to the inner boundary: y_0n = d_n."""
    return p.d[-1]


# ---------------------------------------------------------------------------
# integer matrices of the annulus combinatorics


def _U():
    return [[0, 2], [-2, 0]]


def _V(i: int, eps: Sequence[int], kappa_n: int, n: int):
    if i == 1:
        return [[-1, 0], [2, -1]]
    if i == n:
        return [[-1, kappa_n - n + 1], [1, n - kappa_n]]
    e = eps[i - 1]
    return [[e - 1, -e], [2 - e, e - 1]]


def _eps_of(comb) -> Tuple[Tuple[int, ...], int]:
    if isinstance(comb, CombData):
        return comb.eps, comb.kappa[-1]
    from .coxeter import kappa_from_eps, validate_eps

    eps = validate_eps(comb)
    return eps, kappa_from_eps(eps)[-1]


def _assemble(n: int, block_at) -> List[List[int]]:
    m = [[0] * (2 * n) for _ in range(2 * n)]
    for bi in range(n):
        for bj in range(n):
            blk = block_at(bi, bj)
            if blk is None:
                continue
            for a in range(2):
                for b in range(2):
                    m[2 * bi + a][2 * bj + b] = blk[a][b]
    return m


def _negT(V):
    return [[-V[0][0], -V[1][0]], [-V[0][1], -V[1][1]]]


def omega_matrix(comb) -> List[List[int]]:
    eps, kap = _eps_of(comb)
    n = len(eps)
    U = _U()
    halfU = [[0, 1], [-1, 0]]

    def block(i, j):
        if i == j:
            return halfU if i == 0 else U
        if j == i + 1:
            return _V(i + 1, eps, kap, n)
        if j == i - 1:
            return _negT(_V(i, eps, kap, n))
        return None

    return _assemble(n, block)


def omega_factor_check(comb) -> bool:
    """Omega equals (unitriangular) * (block upper bidiagonal with 1/2 U diagonal)."""
    eps, kap = _eps_of(comb)
    n = len(eps)
    halfU = RatMatrix.from_rows([[0, 1], [-1, 0]])

    def half_VTU(i):
        V = RatMatrix.from_rows(_V(i, eps, kap, n))
        return (V.transpose() * RatMatrix.from_rows(_U())).scale(Fraction(1, 2))

    L = RatMatrix.identity(2 * n)
    R = RatMatrix.zeros(2 * n, 2 * n)
    for bi in range(n):
        for a in range(2):
            for b in range(2):
                R[2 * bi + a, 2 * bi + b] = halfU[a, b]
        if bi > 0:
            blk = half_VTU(bi)
            for a in range(2):
                for b in range(2):
                    L[2 * bi + a, 2 * (bi - 1) + b] = blk[a, b]
    for bi in range(n - 1):
        V = _V(bi + 1, eps, kap, n)
        for a in range(2):
            for b in range(2):
                R[2 * bi + a, 2 * (bi + 1) + b] = V[a][b]
    return (L * R) == RatMatrix.from_rows(omega_matrix(comb))


def a_matrix(comb) -> List[List[int]]:
    eps, kap = _eps_of(comb)
    n = len(eps)
    U = _U()

    def block(i, j):
        if i == j:
            return _V(i + 1, eps, kap, n)
        if j == i - 1:
            return U
        if j == i - 2:
            return _negT(_V(i, eps, kap, n))
        return None

    return _assemble(n, block)


def b_matrix(comb) -> Tuple[List[List[int]], List[List[int]]]:
    """(Bfull, Btilde): the full 2n x 2n matrix and its first 2n-2 rows."""
    eps, kap = _eps_of(comb)
    n = len(eps)
    U = _U()
    neg_halfU = [[0, -1], [1, 0]]

    def block(i, j):
        if i == j:
            return neg_halfU if i == n - 1 else U
        if j == i + 1:
            return _V(i + 2, eps, kap, n)
        if j == i - 1:
            return _negT(_V(i + 1, eps, kap, n))
        return None

    inner = _assemble(n, block)
    bfull = [[-x for x in row] for row in inner]
    return bfull, [row[:] for row in bfull[: 2 * n - 2]]


def dual_edge_multiplicities(comb) -> Dict[Tuple[str, str], int]:
    """Directed dual edges (multiset) between faces; negative counts flipped."""
    eps, _ = _eps_of(comb)
    n = len(eps)
    out: Dict[Tuple[str, str], int] = {}

    def add(f, g, count):
        if count < 0:
            f, g, count = g, f, -count
        if count:
            out[(f, g)] = out.get((f, g), 0) + count

    for i in range(0, n):  # two edges f_0i -> f_1i, i in [0, n-1]
        add(f"f0{i}", f"f1{i}", 2)
    for i in range(1, n - 1):
        e = eps[i]  # eps_{i+1}
        add(f"f1{i + 1}", f"f1{i}", 1 - e)
        add(f"f1{i}", f"f0{i + 1}", 2 - e)
        add(f"f0{i + 1}", f"f0{i}", 1 - e)
        add(f"f1{i + 1}", f"f0{i}", e)
    add(f"f1{n - 1}", f"f0{n}", 1)
    add(f"f0{n}", f"f0{n - 1}", 1)
    return out


def face_poisson_check(comb) -> bool:
    """Omega entries reproduce the listed face-weight bracket coefficients."""
    eps, _ = _eps_of(comb)
    n = len(eps)
    om = omega_matrix(comb)

    def idx(s, i):  # coordinate position of y_{si}
        return 2 * i + s

    coeff = [[0] * (2 * n) for _ in range(2 * n)]

    def setc(a, b, v):
        coeff[a][b] = v
        coeff[b][a] = -v

    setc(idx(0, 0), idx(1, 0), 1)
    setc(idx(1, 0), idx(0, 1), 2)
    setc(idx(1, 0), idx(1, 1), -1)
    setc(idx(0, 0), idx(0, 1), -1)
    for i in range(1, n - 1):
        e = eps[i]  # eps_{i+1}
        setc(idx(0, i), idx(1, i), 2)
        setc(idx(1, i), idx(1, i + 1), -(1 - e))
        setc(idx(1, i), idx(0, i + 1), 2 - e)
        setc(idx(0, i), idx(0, i + 1), -(1 - e))
        setc(idx(0, i), idx(1, i + 1), -e)
    setc(idx(0, n - 1), idx(1, n - 1), 2)
    return coeff == om
