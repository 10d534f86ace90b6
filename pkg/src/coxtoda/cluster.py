"""Cluster seeds, mutations, chart-changing moves and the shift composite.

Seeds carry exact rational values, not symbols: every identity in scope is
an equality of rational functions, so checking it on generic rational
moment data checks it as an identity.  The canonical charts are keyed by
the n-tuple eps (eps_1 = 2, eps_n = 0, entries in {0,1,2}); moving between
charts is a single mutation plus an index swap, and arbitrary transport is
routed through the tridiagonal chart eps0 = (2,0,...,0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .coxeter import kappa_from_eps, validate_eps
from .errors import ArgumentError, InvalidMove, NonGeneric
from .linalg import rat, rat_str
from .network import b_matrix
from .weyl import ClusterCoords, HankelCache, tau


@dataclass(frozen=True)
class ClusterSeed:
    x: Tuple[Fraction, ...]
    Btilde: Tuple[Tuple[int, ...], ...]  # (2n-2) x 2n
    eps: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        n2 = len(self.x)
        if len(self.Btilde) != n2 - 2 or any(len(r) != n2 for r in self.Btilde):
            raise ArgumentError("exchange matrix must be (2n-2) x 2n")
        for i in range(n2 - 2):
            for j in range(n2 - 2):
                if self.Btilde[i][j] != -self.Btilde[j][i]:
                    raise ArgumentError("principal part must be skew-symmetric")

    @property
    def n(self) -> int:
        return len(self.x) // 2

    def to_json(self) -> dict:
        out = {
            "x": [rat_str(v) for v in self.x],
            "Btilde": [list(r) for r in self.Btilde],
        }
        if self.eps is not None:
            out["eps"] = list(self.eps)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ClusterSeed":
        return cls(
            tuple(rat(v) for v in obj["x"]),
            tuple(tuple(r) for r in obj["Btilde"]),
            tuple(obj["eps"]) if obj.get("eps") is not None else None,
        )


def seed_init(eps_tag, cache: HankelCache) -> ClusterSeed:
    coords = tau(eps_tag, cache)
    _, bt = b_matrix(coords.eps)
    return ClusterSeed(coords.x, tuple(tuple(r) for r in bt), coords.eps)


def mutate(s: ClusterSeed, k: int) -> ClusterSeed:
    """Seed mutation in direction k (1-based, k <= 2n-2)."""
    m = len(s.x)
    if not 1 <= k <= m - 2:
        raise ArgumentError(f"direction must be in [1, {m - 2}]")
    if s.x[k - 1] == 0:
        raise NonGeneric("cannot mutate a vanishing cluster variable")
    row = s.Btilde[k - 1]
    plus = Fraction(1)
    minus = Fraction(1)
    for i in range(m):
        if row[i] > 0:
            plus *= s.x[i] ** row[i]
        elif row[i] < 0:
            minus *= s.x[i] ** (-row[i])
    x = list(s.x)
    x[k - 1] = (plus + minus) / s.x[k - 1]
    B = [list(r) for r in s.Btilde]
    newB = [[0] * m for _ in range(m - 2)]
    for i in range(m - 2):
        for j in range(m):
            if i == k - 1 or j == k - 1:
                newB[i][j] = -B[i][j]
            else:
                bik, bkj = B[i][k - 1], B[k - 1][j]
                newB[i][j] = B[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2
    return ClusterSeed(tuple(x), tuple(tuple(r) for r in newB), None)


# ---------------------------------------------------------------------------
# chart-changing moves

# interior transitions keyed by (eps_i, eps_{i+1}, mutated row s): new pair.
_INTERIOR = {
    (0, 2, 1): (1, 1),
    (1, 1, 0): (0, 2),
    (2, 0, 0): (1, 1),
    (1, 1, 1): (2, 0),
    (1, 0, 0): (0, 1),
    (0, 1, 1): (1, 0),
    (2, 1, 0): (1, 2),
    (1, 2, 1): (2, 1),
}
# position n-1 transitions keyed by (eps_{n-1}, s): new value.
_END = {(0, 1): 1, (1, 0): 0, (1, 1): 2, (2, 0): 1}


@dataclass(frozen=True)
class EpsMove:
    i: int  # position in [2, n-1]
    s: int  # 0 or 1: which of x_{0i}/x_{1i} mutates


def eps_move(seed: ClusterSeed, move: EpsMove) -> ClusterSeed:
    """One table move: mutate in direction (s,i), swap the (0,i)/(1,i) slots."""
    if seed.eps is None:
        raise InvalidMove("seed is not attached to a canonical chart")
    n = seed.n
    i, s = move.i, move.s
    if not 2 <= i <= n - 1 or s not in (0, 1):
        raise InvalidMove("move position out of range")
    eps = list(seed.eps)
    if i == n - 1:
        key = (eps[i - 1], s)
        if key not in _END:
            raise InvalidMove(f"no chart move for eps_{i}={eps[i - 1]}, s={s}")
        eps[i - 1] = _END[key]
    else:
        key = (eps[i - 1], eps[i], s)
        if key not in _INTERIOR:
            raise InvalidMove(
                f"no chart move for (eps_{i}, eps_{i + 1})=({eps[i - 1]}, {eps[i]}), s={s}"
            )
        eps[i - 1], eps[i] = _INTERIOR[key]
    k = 2 * i - 1 + s
    mutated = mutate(seed, k)
    a, b = 2 * i - 2, 2 * i - 1  # 0-based slots of x_{0i}, x_{1i}
    x = list(mutated.x)
    x[a], x[b] = x[b], x[a]
    B = [list(r) for r in mutated.Btilde]
    B[a], B[b] = B[b], B[a]
    for r in B:
        r[a], r[b] = r[b], r[a]
    return ClusterSeed(tuple(x), tuple(tuple(r) for r in B), tuple(eps))


def _ascent_path(eps: Tuple[int, ...]) -> List[EpsMove]:
    """Moves taking the tridiagonal chart eps0 = (2,0,...,0) up to eps."""
    n = len(eps)
    eps0 = (2,) + (0,) * (n - 1)
    if eps == eps0:
        return []
    e = list(eps)
    if e[n - 2] != 0:
        e[n - 2] -= 1
        return _ascent_path(tuple(e)) + [EpsMove(n - 1, 1)]
    i = max(j for j in range(2, n - 1) if e[j - 1] != 0)
    e[i - 1] -= 1
    tail = [EpsMove(n - 1, 1)] + [EpsMove(j, 1) for j in range(n - 2, i - 1, -1)]
    return _ascent_path(tuple(e)) + tail


def transport_path(source_eps, target_eps) -> List[EpsMove]:
    """The move sequence from Sigma(source) to Sigma(target) through eps0."""
    source = validate_eps(source_eps)
    target = validate_eps(target_eps)
    if len(source) != len(target):
        raise ArgumentError("source and target eps have different lengths")
    down = [EpsMove(m.i, 1 - m.s) for m in reversed(_ascent_path(source))]
    return down + _ascent_path(target)


def transport(seed: ClusterSeed, target_eps) -> ClusterSeed:
    """Route the seed from its chart to Sigma(target_eps) through eps0."""
    if seed.eps is None:
        raise InvalidMove("seed is not attached to a canonical chart")
    for m in transport_path(seed.eps, target_eps):
        seed = eps_move(seed, m)
    return seed


def shift_T(seed: ClusterSeed, direction: str = "forward") -> ClusterSeed:
    """The composite pass on the tridiagonal chart: odd directions
    ascending then even directions ascending (forward, the +2 shift of
    the Hankel window); backward is the exact inverse pass."""
    n = seed.n
    eps0 = (2,) + (0,) * (n - 1)
    if seed.eps != eps0:
        raise InvalidMove("shift pass is defined on the tridiagonal chart")
    odds = list(range(1, 2 * n - 2, 2))
    evens = list(range(2, 2 * n - 1, 2))
    if direction == "forward":
        seq = odds + evens
    elif direction == "backward":
        seq = list(reversed(odds + evens))
    else:
        raise ArgumentError("direction must be 'forward' or 'backward'")
    out = seed
    for k in seq:
        out = mutate(out, k)
    return ClusterSeed(out.x, out.Btilde, eps0)


def positivity_probe(eps_tag, cache: HankelCache, paths: Sequence[Sequence[int]]) -> bool:
    """All cluster variables met along the mutation paths stay positive."""
    base = seed_init(eps_tag, cache)
    if any(v <= 0 for v in base.x):
        return False
    for path in paths:
        s = base
        for k in path:
            s = mutate(s, k)
            if any(v <= 0 for v in s.x):
                return False
    return True
