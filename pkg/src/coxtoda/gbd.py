"""Chart-changing transformations of the factorization parameters.

The map sigma from the chart of (u,v) to the chart of (u',v') is the one
that preserves the Weyl function: rebuild the moments from the source
parameters, re-read them off in the target chart.  Three independent
realizations are provided -- through the cluster seeds (sigma_cluster),
through closed-form elementary steps composed along the same move path
(sigma_table), and through ratios of leading principal minors of powers
of X (sigma_minors) -- plus the classical Darboux map D on matrices and
its quotient calD on parameters, including the all-cluster realization
of calD on the unit-determinant slice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cluster import ClusterSeed, EpsMove, seed_init, mutate, transport, transport_path
from .coxeter import (
    CoxeterPair,
    FactorParams,
    kappa_from_eps,
    pair_from_eps,
    validate_eps,
    build_X,
)
from .errors import ArgumentError, InvalidMove, NonGeneric, SingularMatrix
from .linalg import RatMatrix, det, mat_pow
from .weyl import (
    ClusterCoords,
    HankelCache,
    MomentSeq,
    moments_from_X,
    params_from_moments,
    rho,
)


def _reduce(p: FactorParams) -> FactorParams:
    """Normalize to the canonical gauge c^+ = 1 (same Weyl function)."""
    if all(x == 1 for x in p.cplus):
        return p
    return FactorParams.reduced(p.d, p.c)


@dataclass(frozen=True)
class GBDRequest:
    source: Tuple[int, ...]
    target: Tuple[int, ...]
    params: FactorParams

    def __post_init__(self):
        object.__setattr__(self, "source", validate_eps(self.source))
        object.__setattr__(self, "target", validate_eps(self.target))
        if len(self.source) != len(self.target):
            raise ArgumentError("source and target eps must have the same length")
        if self.params.n != len(self.source):
            raise ArgumentError("params sized for the wrong n")


# ---------------------------------------------------------------------------
# route 1: through the cluster seeds


def sigma_cluster(req: GBDRequest) -> FactorParams:
    p = _reduce(req.params)
    X = build_X(pair_from_eps(req.source), p)
    cache = HankelCache(moments_from_X(X))
    seed = transport(seed_init(req.source, cache), req.target)
    return rho(req.target, ClusterCoords(seed.x, req.target))


# ---------------------------------------------------------------------------
# route 2: closed-form elementary steps
#
# Each legal chart move has a closed-form action on (c, d); arbitrary
# transformations compose these along the same path used by transport.


def _interior_merge(c, d, i):
    # (eps_i, eps_{i+1}) = (0,2) -> (1,1) and its end analogue
    ci, di, dj = c[i - 1], d[i - 1], d[i]
    s = dj + ci * di
    if s == 0 or dj == 0:
        raise NonGeneric("degenerate elementary step")
    c[i - 1] = ci * di / dj
    d[i - 1] = di * dj / s
    d[i] = s


def _interior_merge_inv(c, d, i):
    ci, di, dj = c[i - 1], d[i - 1], d[i]
    u = 1 + ci
    if u == 0 or di == 0:
        raise NonGeneric("degenerate elementary step")
    c[i - 1] = ci * dj / (di * u * u)
    d[i - 1] = di * u
    d[i] = dj / u


def _interior_split(c, d, i, touch_next: bool):
    # (2,0) -> (1,1) and (1,0) -> (0,1); touch_next updates c_{i+1}
    ci, di, dj = c[i - 1], d[i - 1], d[i]
    u = 1 + ci
    if u == 0 or di == 0:
        raise NonGeneric("degenerate elementary step")
    c[i - 1] = ci * dj / (di * u * u)
    if touch_next:
        c[i] = c[i] * u
    d[i - 1] = di * u
    d[i] = dj / u


def _interior_split_inv(c, d, i, touch_next: bool):
    ci, di, dj = c[i - 1], d[i - 1], d[i]
    s = dj + ci * di
    if s == 0 or dj == 0:
        raise NonGeneric("degenerate elementary step")
    c[i - 1] = ci * di / dj
    if touch_next:
        c[i] = c[i] * dj / s
    d[i - 1] = di * dj / s
    d[i] = s


def table_move(c: List[Fraction], d: List[Fraction], eps: List[int], move: EpsMove) -> None:
    """Apply one elementary transformation in place; updates eps too."""
    n = len(d)
    i, s = move.i, move.s
    if not 2 <= i <= n - 1 or s not in (0, 1):
        raise InvalidMove("move position out of range")
    if i == n - 1:
        key = (eps[i - 1], s)
        if key == (0, 1):
            _interior_merge(c, d, n - 1)
            eps[i - 1] = 1
        elif key == (1, 0):
            _interior_merge_inv(c, d, n - 1)
            eps[i - 1] = 0
        elif key == (1, 1):
            # as the 0 -> 1 step, with the extra c_{n-2} update
            dn, prod = d[n - 1], c[n - 2] * d[n - 2]
            if dn + prod == 0:
                raise NonGeneric("degenerate elementary step")
            if n >= 3:
                c[n - 3] = c[n - 3] * dn / (dn + prod)
            _interior_merge(c, d, n - 1)
            eps[i - 1] = 2
        elif key == (2, 0):
            u = 1 + c[n - 2]
            _interior_merge_inv(c, d, n - 1)
            if n >= 3:
                c[n - 3] = c[n - 3] * u
            eps[i - 1] = 1
        else:
            raise InvalidMove(f"no elementary step for eps_{i}={eps[i - 1]}, s={s}")
        return
    key = (eps[i - 1], eps[i], s)
    if key == (0, 2, 1):
        _interior_merge(c, d, i)
        new = (1, 1)
    elif key == (1, 1, 0):
        _interior_merge_inv(c, d, i)
        new = (0, 2)
    elif key == (2, 0, 0):
        # eps_i = 2 on the source side also pushes a factor onto c_{i-1}
        u = 1 + c[i - 1]
        _interior_split(c, d, i, touch_next=True)
        c[i - 2] = c[i - 2] * u
        new = (1, 1)
    elif key == (1, 1, 1):
        dj, prod = d[i], c[i - 1] * d[i - 1]
        if dj + prod == 0:
            raise NonGeneric("degenerate elementary step")
        _interior_split_inv(c, d, i, touch_next=True)
        c[i - 2] = c[i - 2] * dj / (dj + prod)
        new = (2, 0)
    elif key == (1, 0, 0):
        _interior_split(c, d, i, touch_next=True)
        new = (0, 1)
    elif key == (0, 1, 1):
        _interior_split_inv(c, d, i, touch_next=True)
        new = (1, 0)
    elif key == (2, 1, 0):
        # the (2,0) step shape, but the extra factor lands on c_{i-1}
        u = 1 + c[i - 1]
        _interior_split(c, d, i, touch_next=False)
        c[i - 2] = c[i - 2] * u
        new = (1, 2)
    elif key == (1, 2, 1):
        dj, prod = d[i], c[i - 1] * d[i - 1]
        if dj + prod == 0:
            raise NonGeneric("degenerate elementary step")
        _interior_split_inv(c, d, i, touch_next=False)
        c[i - 2] = c[i - 2] * dj / (dj + prod)
        new = (2, 1)
    else:
        raise InvalidMove(
            f"no elementary step for (eps_{i}, eps_{i + 1})={key[:2]}, s={s}"
        )
    eps[i - 1], eps[i] = new


def sigma_table(req: GBDRequest) -> FactorParams:
    p = _reduce(req.params)
    c, d = list(p.c), list(p.d)
    eps = list(req.source)
    for m in transport_path(req.source, req.target):
        table_move(c, d, eps, m)
    if tuple(eps) != req.target:
        raise InvalidMove("move path did not land on the target chart")
    return FactorParams.reduced(d, c)


# ---------------------------------------------------------------------------
# route 3: ratios of leading principal minors of powers of X


class _MinorTable:
    """Leading principal minors (X^k)_[i] with memoized powers."""

    def __init__(self, X: RatMatrix):
        self.X = X
        self._pow: Dict[int, RatMatrix] = {0: RatMatrix.identity(X.rows)}
        self._minor: Dict[Tuple[int, int], Fraction] = {}

    def power(self, k: int) -> RatMatrix:
        if k not in self._pow:
            try:
                self._pow[k] = mat_pow(self.X, k)
            except SingularMatrix as exc:
                raise NonGeneric("X is singular, negative powers undefined") from exc
        return self._pow[k]

    def __call__(self, k: int, i: int) -> Fraction:
        if i == 0:
            return Fraction(1)
        if (k, i) not in self._minor:
            P = self.power(k)
            sub = P.submatrix(range(1, i + 1), range(1, i + 1))
            self._minor[(k, i)] = det(sub)
        return self._minor[(k, i)]


def sigma_minors(req: GBDRequest) -> FactorParams:
    """The minor-ratio form.  The two trailing ratio exponents are the
    target-chart exponents eps'_{i+1} and 2 - eps'_i; the standalone
    minors in the prefactor carry the source-chart exponents."""
    p = _reduce(req.params)
    n = p.n
    kap = kappa_from_eps(req.source)
    kap2 = kappa_from_eps(req.target)
    dk = [0] + [kap2[j] - kap[j] for j in range(n)]  # dk[j], j in [0, n]
    X = build_X(pair_from_eps(req.source), p)
    M = _MinorTable(X)
    eps, eps2 = req.source, req.target

    def ratio(j: int) -> Fraction:
        denom = M(dk[j], j)
        if denom == 0:
            raise NonGeneric("vanishing principal minor")
        return M(dk[j] + 1, j) / denom

    d2 = []
    for i in range(1, n + 1):
        denom = M(dk[i], i) * M(dk[i - 1] + 1, i - 1)
        if denom == 0:
            raise NonGeneric("vanishing principal minor")
        d2.append(M(dk[i] + 1, i) * M(dk[i - 1], i - 1) / denom)
    c2 = []
    for i in range(1, n):
        denom = M(dk[i] + 1, i) ** 2
        if denom == 0:
            raise NonGeneric("vanishing principal minor")
        v = p.c[i - 1] * p.d[i - 1] ** 2
        v *= M(1, i - 1) ** eps[i - 1] / M(1, i + 1) ** eps[i]
        v *= M(dk[i - 1], i - 1) * M(dk[i + 1], i + 1) / denom
        v *= ratio(i + 1) ** eps2[i]
        v *= ratio(i - 1) ** (2 - eps2[i - 1])
        c2.append(v)
    if any(v == 0 for v in d2 + c2):
        raise NonGeneric("degenerate minor-ratio parameters")
    return FactorParams.reduced(d2, c2)


_ROUTES: Dict[str, Callable[[GBDRequest], FactorParams]] = {
    "cluster": sigma_cluster,
    "table": sigma_table,
    "minors": sigma_minors,
}


def sigma(req: GBDRequest, route: str = "cluster") -> FactorParams:
    if route not in _ROUTES:
        raise ArgumentError(f"unknown route {route!r}")
    return _ROUTES[route](req)


# ---------------------------------------------------------------------------
# the Darboux map and its quotient


def darboux_D(X: RatMatrix) -> RatMatrix:
    """X = X_- X_0 X_+ (unit lower / diagonal / unit upper) -> X_0 X_+ X_-."""
    n = X.rows
    A = [[X[i, j] for j in range(n)] for i in range(n)]
    L = RatMatrix.identity(n)
    for k in range(n):
        if A[k][k] == 0:
            raise NonGeneric("vanishing leading principal minor, no Gauss factorization")
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            L[i, k] = f
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    W = RatMatrix.zeros(n, n)  # W = X_0 X_+, upper triangular
    for i in range(n):
        for j in range(i, n):
            W[i, j] = A[i][j]
    return W * L


def _pair_of(tag) -> CoxeterPair:
    if isinstance(tag, CoxeterPair):
        return tag
    return pair_from_eps(validate_eps(tag))


def calD(pair_or_tag, params: FactorParams) -> FactorParams:
    """The quotient Darboux map: shift the moment window, invert back."""
    pair = _pair_of(pair_or_tag)
    X = build_X(pair, _reduce(params))
    ms = moments_from_X(X)
    return params_from_moments(pair_or_tag, ms.shifted())


def _rational_nth_root(v: Fraction, n: int) -> Optional[Fraction]:
    if v <= 0:
        return None

    def iroot(m: int) -> Optional[int]:
        r = round(m ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand > 0 and cand**n == m:
                return cand
        return None

    a, b = iroot(v.numerator), iroot(v.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _swap_pairs(seed: ClusterSeed, eps: Tuple[int, ...]) -> ClusterSeed:
    """Swap the (0,i)/(1,i) slots for every i in [1, n-1], x and B alike."""
    x = list(seed.x)
    B = [list(r) for r in seed.Btilde]
    for i in range(1, seed.n):
        a, b = 2 * i - 2, 2 * i - 1
        x[a], x[b] = x[b], x[a]
        B[a], B[b] = B[b], B[a]
        for r in B:
            r[a], r[b] = r[b], r[a]
    return ClusterSeed(tuple(x), tuple(tuple(r) for r in B), eps)


def calD_cluster(pair_or_tag, params: FactorParams) -> FactorParams:
    """calD realized by cluster moves alone: transport to the tridiagonal
    chart, run the odd half-pass there, transport back.  The identity
    lives on the unit-determinant slice, so X is rescaled to determinant
    one first (requires det X to be a rational n-th power) and the scale
    is undone at the end."""
    pair = _pair_of(pair_or_tag)
    eps = pair.comb.eps
    n = pair.n
    p = _reduce(params)
    X = build_X(pair, p)
    detX = det(X)
    r = _rational_nth_root(detX, n)
    if r is None:
        raise NonGeneric("det X is not a rational n-th power, cannot reach the slice")
    ms = moments_from_X(X)
    scaled = MomentSeq.from_values(n, [ms.h(j) / r**j for j in range(2 * n + 1)])
    seed = transport(seed_init(eps, HankelCache(scaled)), (2,) + (0,) * (n - 1))
    for k in range(1, 2 * n - 2, 2):
        seed = mutate(seed, k)
    seed = _swap_pairs(seed, (2,) + (0,) * (n - 1))
    seed = transport(seed, eps)
    out = rho(eps, ClusterCoords(seed.x, eps))
    # undo the scale on the moment level
    Y = build_X(pair, out)
    msY = moments_from_X(Y)
    unscaled = MomentSeq.from_values(n, [msY.h(j) * r**j for j in range(2 * n + 1)])
    return params_from_moments(pair_or_tag, unscaled)


# ---------------------------------------------------------------------------
# tridiagonal -> relativistic chart change along a trajectory


def _np_minor_table(L: np.ndarray):
    n = L.shape[0]
    cache: Dict[int, np.ndarray] = {0: np.eye(n)}

    def power(k: int) -> np.ndarray:
        if k not in cache:
            cache[k] = np.linalg.matrix_power(L, k)
        return cache[k]

    def m(k: int, i: int) -> float:
        if i == 0:
            return 1.0
        val = float(np.linalg.det(power(k)[:i, :i]))
        if abs(val) < 1e-300:
            raise NonGeneric("vanishing principal minor along the trajectory")
        return val

    return m


def relativistic_from_jacobi(a: Sequence[float], b: Sequence[float]):
    """One time slice: (a, b) of the Hessenberg matrix L to (d', ctilde')."""
    n = len(b)
    from .toda import jacobi_matrix

    L = jacobi_matrix(a, b)
    m = _np_minor_table(L)
    # source chart is tridiagonal (kappa_j = j - 1), target is the
    # relativistic chart (kappa'_j = 0 for j < n, kappa'_n = 1)
    dk = [0] + [1 - j for j in range(1, n)] + [2 - n]
    eps2 = (2,) + (1,) * (n - 2) + (0,)

    def ratio(j: int) -> float:
        return m(dk[j] + 1, j) / m(dk[j], j)

    d2 = []
    for i in range(1, n + 1):
        d2.append(m(dk[i] + 1, i) * m(dk[i - 1], i - 1)
                  / (m(dk[i], i) * m(dk[i - 1] + 1, i - 1)))
    c2 = []
    for i in range(1, n):
        v = a[i - 1] * m(dk[i - 1], i - 1) * m(dk[i + 1], i + 1) / m(dk[i] + 1, i) ** 2
        v *= ratio(i + 1) ** eps2[i]
        v *= ratio(i - 1) ** (2 - eps2[i - 1])
        c2.append(v * d2[i - 1])  # ctilde'_i = c'_i d'_i
    return tuple(d2), tuple(c2)


def toda_to_relativistic(traj) -> List[Tuple[Tuple[float, ...], Tuple[float, ...]]]:
    """Map a Jacobi trajectory [(a(t), b(t)), ...] to the relativistic
    chart: a list of (d'(t), ctilde'(t)) tuples."""
    out = []
    for (a, b) in traj:
        out.append(relativistic_from_jacobi(a, b))
    return out
