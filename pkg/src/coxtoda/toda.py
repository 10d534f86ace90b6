"""Toda flows on the quotient cell in the reduced (c, d) coordinates.

The Hamiltonians are F_k = (1/k) tr X^k; the bracket on the coordinates is
log-canonical with integer coefficients read off the chart's eps tuple, so
the equations of motion are polynomial.  Flows are integrated in floating
point (RK4) and cross-checked against the exact moment evolution
H_i'(t) = H_{i+k}(t), which linearizes the k-th flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .coxeter import CoxeterPair, FactorParams, build_X, factor_sequence, kappa_from_eps
from .errors import ArgumentError, FlowDiverged, InvalidMove, NonGeneric
from .linalg import det_any, mat_pow


@dataclass(frozen=True)
class FlowState:
    t: float
    c: Tuple[float, ...]
    d: Tuple[float, ...]
    eps: Tuple[int, ...]

    def __post_init__(self):
        if len(self.c) != len(self.d) - 1:
            raise ArgumentError("need n diagonal and n-1 coupling coordinates")
        if any(v == 0 for v in self.c + self.d):
            raise ArgumentError("flow coordinates must be nonzero")

    @property
    def n(self) -> int:
        return len(self.d)

    @classmethod
    def from_params(cls, p: FactorParams, eps, t: float = 0.0) -> "FlowState":
        return cls(t, tuple(float(v) for v in p.c), tuple(float(v) for v in p.d),
                   tuple(eps))


class BracketTable:
    """Log-canonical coefficients on z = (c_1..c_{n-1}, d_1..d_n):
    {z_a, z_b} = omega[a][b] z_a z_b."""

    def __init__(self, eps: Sequence[int]):
        n = len(eps)
        m = 2 * n - 1
        om = [[0] * m for _ in range(m)]

        def setw(a, b, v):
            om[a][b] = v
            om[b][a] = -v

        for i in range(1, n - 1):  # {c_i, c_{i+1}} = (eps_{i+1} - 1) c_i c_{i+1}
            setw(i - 1, i, eps[i] - 1)
        for i in range(1, n):  # {c_i, d_i} = -c_i d_i; {c_i, d_{i+1}} = c_i d_{i+1}
            setw(i - 1, n - 1 + i - 1, -1)
            setw(i - 1, n - 1 + i, 1)
        self.eps = tuple(eps)
        self.omega = om


def _float_factors(pair: CoxeterPair, c: Sequence[float], d: Sequence[float]):
    """Elementary factor matrices of X in the reduced gauge (c^+=1, c^-=c),
    together with the (kind, index) tag of each factor."""
    n = pair.n
    p = FactorParams.reduced([Fraction(1)] * n, [Fraction(1)] * (n - 1))
    factors, tags = [], []
    for block in factor_sequence(pair, p):
        M = np.eye(n)
        if block[0] == "diag":
            for i in range(n):
                M[i, i] = d[i]
            tags.append(("diag", None))
        elif block[0] == "lower":
            i = block[1]
            M[i, i - 1] = c[i - 1]
            tags.append(("lower", i))
        else:
            i = block[1]
            M[i - 1, i] = 1.0
            tags.append(("upper", i))
        factors.append(M)
    return factors, tags


def build_X_float(pair: CoxeterPair, c: Sequence[float], d: Sequence[float]) -> np.ndarray:
    factors, _ = _float_factors(pair, c, d)
    X = np.eye(pair.n)
    for M in factors:
        X = X @ M
    return X


def hamiltonian_Fk(pair: CoxeterPair, state, k: int):
    """F_k = (1/k) tr X^k; exact on FactorParams, float on FlowState."""
    if k < 1:
        raise ArgumentError("k must be a positive integer")
    if isinstance(state, FactorParams):
        X = build_X(pair, state)
        return mat_pow(X, k).trace() / k
    X = build_X_float(pair, state.c, state.d)
    return float(np.trace(np.linalg.matrix_power(X, k))) / k


def f1_closed_form(pair: CoxeterPair, c: Sequence, d: Sequence):
    """The path-sum expansion of tr X over the union I^- cup I^+."""
    comb = pair.comb
    union = sorted(set(comb.Iminus) | set(comb.Iplus))
    out = d[0]
    for l in range(len(union) - 1):
        for j in range(union[l] + 1, union[l + 1] + 1):
            out = out + d[j - 1]
            term = 1
            for r in range(j - 1, union[l] - 1, -1):
                term = term * c[r - 1]
                out = out + term * d[r - 1]
    return out


def _grad_Fk(pair: CoxeterPair, c, d, k: int) -> np.ndarray:
    """d F_k / d z for z = (c_1..c_{n-1}, d_1..d_n), via tr(X^{k-1} dX)."""
    n = pair.n
    factors, tags = _float_factors(pair, c, d)
    m = len(factors)
    prefix = [np.eye(n)]
    for M in factors:
        prefix.append(prefix[-1] @ M)
    suffix = [np.eye(n)]
    for M in reversed(factors):
        suffix.append(M @ suffix[-1])
    suffix.reverse()  # suffix[j] = product of factors j..m-1
    X = prefix[-1]
    Xk1 = np.linalg.matrix_power(X, k - 1) if k > 1 else np.eye(n)
    grad = np.zeros(2 * n - 1)
    for j, (kind, idx) in enumerate(tags):
        left = prefix[j]
        right = suffix[j + 1]
        if kind == "lower":
            dM = np.zeros((n, n))
            dM[idx, idx - 1] = 1.0
            grad[idx - 1] += float(np.trace(Xk1 @ left @ dM @ right))
        elif kind == "diag":
            for i in range(n):
                dM = np.zeros((n, n))
                dM[i, i] = 1.0
                grad[n - 1 + i] += float(np.trace(Xk1 @ left @ dM @ right))
    return grad


def vector_field(pair: CoxeterPair, state: FlowState, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """(c_dot, d_dot) of the k-th flow: z_a' = z_a sum_b omega_ab z_b dF/dz_b."""
    n = pair.n
    z = np.array(list(state.c) + list(state.d))
    grad = _grad_Fk(pair, state.c, state.d, k)
    om = np.array(BracketTable(state.eps).omega, dtype=float)
    zdot = z * (om @ (z * grad))
    return zdot[: n - 1], zdot[n - 1:]


def rk4_flow(pair: CoxeterPair, state: FlowState, k: int, t_end: float,
             dt: float = 1e-3) -> List[FlowState]:
    """Classical RK4 trajectory sampled at every step (endpoint included)."""
    if dt <= 0:
        raise ArgumentError("dt must be positive")
    n = pair.n
    z = np.array(list(state.c) + list(state.d))
    om = np.array(BracketTable(state.eps).omega, dtype=float)

    def f(zv):
        grad = _grad_Fk(pair, zv[: n - 1], zv[n - 1:], k)
        return zv * (om @ (zv * grad))

    out = [state]
    t = state.t
    steps = int(round(t_end / dt))
    for _ in range(steps):
        k1 = f(z)
        k2 = f(z + 0.5 * dt * k1)
        k3 = f(z + 0.5 * dt * k2)
        k4 = f(z + dt * k3)
        z = z + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
        if not np.all(np.isfinite(z)) or np.any(z == 0):
            raise FlowDiverged(f"flow left the generic stratum at t={t}")
        out.append(FlowState(t, tuple(z[: n - 1]), tuple(z[n - 1:]), state.eps))
    return out


def conservation_report(pair: CoxeterPair, traj: Sequence[FlowState]) -> Dict[str, float]:
    """Sup drift of F_1..F_{n-1} and det X along a trajectory."""
    n = pair.n
    drifts: Dict[str, float] = {}
    base = None
    for st in traj:
        X = build_X_float(pair, st.c, st.d)
        vals = {f"F{j}": float(np.trace(np.linalg.matrix_power(X, j))) / j
                for j in range(1, n)}
        vals["detX"] = float(np.linalg.det(X))
        if base is None:
            base = vals
        else:
            for key, v in vals.items():
                drifts[key] = max(drifts.get(key, 0.0), abs(v - base[key]))
    return drifts


# ---------------------------------------------------------------------------
# exact moment evolution (linearizing solver)


def _hankel_float(h, i, l):
    if i == 0:
        return 1.0
    rows = [[h(a + b + l - i - 1) for b in range(1, i + 1)] for a in range(1, i + 1)]
    return float(det_any([[float(v) for v in r] for r in rows]))


def params_from_moments_float(eps: Sequence[int], h) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Float replica of the Hankel inversion: h is a callable j -> h_j."""
    eps = tuple(eps)
    n = len(eps)
    kappa = kappa_from_eps(eps)
    x0 = [1.0] + [_hankel_float(h, i, kappa[i - 1]) for i in range(1, n + 1)]
    x1 = [1.0] + [_hankel_float(h, i, kappa[i - 1] + 1) for i in range(1, n + 1)]
    if any(v == 0 for v in x0 + x1):
        raise NonGeneric("vanishing Hankel determinant on the trajectory")
    d = tuple(x1[i] * x0[i - 1] / (x0[i] * x1[i - 1]) for i in range(1, n + 1))
    c = []
    for i in range(1, n):
        v = x0[i - 1] * x0[i + 1] / x1[i] ** 2
        v *= (x1[i + 1] / x0[i + 1]) ** eps[i]
        v *= (x1[i - 1] / x0[i - 1]) ** (2 - eps[i - 1])
        c.append(v)
    return tuple(c), d


def moment_flow(pair: CoxeterPair, p0: FactorParams, k: int, t: float,
                eps=None) -> FlowState:
    """Solve the k-th flow by evolving moments: H_i(t) = (X_0^i e^{tX_0^k})_{11},
    with negative indices supplied by the time-frozen characteristic
    recursion; parameters recovered by the Hankel inversion."""
    from scipy.linalg import expm

    n = pair.n
    eps = tuple(eps) if eps is not None else pair.comb.eps
    X0 = build_X(pair, p0).to_float()
    E = expm(t * np.linalg.matrix_power(X0, k))
    H: Dict[int, float] = {}
    P = np.eye(n)
    for i in range(0, 2 * n + 1):
        H[i] = float((P @ E)[0, 0])
        P = P @ X0
    # frozen char poly of X0: det(lambda + X0) coefficients p_0..p_n
    cp = np.poly(-X0)  # leading first, monic
    p = [float(cp[n - i]) for i in range(n + 1)]
    if p[0] == 0:
        raise NonGeneric("singular initial matrix")
    lo = 0
    while lo > -2 * n:
        kk = lo - 1
        s = sum((-1) ** i * p[i] * H[kk + i] for i in range(1, n + 1))
        H[kk] = -s / p[0]
        lo -= 1
    if H[0] == 0:
        raise NonGeneric("H_0(t) vanished")
    c, d = params_from_moments_float(eps, lambda j: H[j] / H[0])
    return FlowState(t, c, d, eps)


# ---------------------------------------------------------------------------
# named reductions


def reductions(state: FlowState) -> Dict[str, tuple]:
    """Named coordinate images available on the state's chart."""
    n = state.n
    c, d = state.c, state.d
    eps = state.eps
    out: Dict[str, tuple] = {}
    if eps == (2,) + (0,) * (n - 1):
        r = []
        for i in range(n):
            r.append(d[i])
            if i < n - 1:
                r.append(c[i] * d[i])
        out["volterra"] = tuple(r)
        out["toda_a"] = tuple(c[i] * d[i] ** 2 for i in range(n - 1))
        out["toda_b"] = tuple(d[i] + (c[i - 1] * d[i - 1] if i else 0.0)
                              for i in range(n))
    if n >= 2 and eps == (2,) + (1,) * (n - 2) + (0,):
        out["relativistic"] = tuple(c[i] * d[i] for i in range(n - 1))
    if not out:
        raise InvalidMove("no named reduction on this chart")
    return out


def jacobi_matrix(a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    """Tridiagonal Hessenberg matrix with unit superdiagonal from (a, b)."""
    n = len(b)
    L = np.zeros((n, n))
    for i in range(n):
        L[i, i] = b[i]
        if i < n - 1:
            L[i, i + 1] = 1.0
            L[i + 1, i] = a[i]
    return L
