"""Moments, Hankel determinants, the Weyl function and the inverse problem.

The moment map sends a cell element X to h_j = (X^j)_{11}; Hankel
determinants of the moments invert it: tau packages the determinants into
cluster coordinates, rho recovers the reduced factorization parameters
(d_i, c_i = c_i^+ c_i^-) from them.  All arithmetic is exact.

Two gauges are supported.  The h-gauge fixes h_0 = 1; the H-gauge keeps an
arbitrary nonzero H_0 with H_j = h_j H_0, and Hankel determinants scale as
DD_i^(l) = H_0^i Delta_i^(l).  Every inverse formula is degree zero in H, so
both gauges give the same parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .coxeter import (
    CombData,
    CoxeterPair,
    FactorParams,
    kappa_from_eps,
    validate_eps,
)
from .errors import ArgumentError, NonGeneric, RangeError, SingularMatrix
from .linalg import RatMatrix, char_poly, det, inverse, rat, rat_str


def _comb_of(tag) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Accept a CoxeterPair, CombData or bare eps tuple; return (eps, kappa)."""
    if isinstance(tag, CoxeterPair):
        tag = tag.comb
    if isinstance(tag, CombData):
        return tag.eps, tag.kappa
    eps = validate_eps(tag)
    return eps, kappa_from_eps(eps)


class MomentSeq:
    """Two-sided moment sequence H_j (immutable window semantics).

    When the characteristic-polynomial coefficients p_0..p_n of
    det(lambda + X) are known, the linear recursion

        sum_{i=0}^{n} (-1)^i p_i H_{k+i} = 0      (all k)

    extends the sequence in both directions (p_n = 1 forward, p_0 = det X
    backward).  Without them only the explicitly given window is available.
    """

    __slots__ = ("H0", "n", "p", "_H")

    def __init__(self, H0: Fraction, n: int, p: Optional[Tuple[Fraction, ...]],
                 H_window: Dict[int, Fraction]):
        H0 = rat(H0)
        if H0 == 0:
            raise ArgumentError("gauge H_0 must be nonzero")
        self.H0 = H0
        self.n = n
        self.p = tuple(p) if p is not None else None
        self._H = dict(H_window)
        self._H[0] = H0

    # -- construction -----------------------------------------------------

    @classmethod
    def from_X(cls, X: RatMatrix, jmin: Optional[int] = None,
               jmax: Optional[int] = None, H0=Fraction(1)) -> "MomentSeq":
        n = X.rows
        if jmin is None:
            jmin = -2 * n
        if jmax is None:
            jmax = 2 * n
        if det(X) == 0:
            raise SingularMatrix("moments of a singular matrix")
        H0 = rat(H0)
        window: Dict[int, Fraction] = {0: H0}
        P = RatMatrix.identity(n)
        for j in range(1, jmax + 1):
            P = P * X
            window[j] = P[0, 0] * H0
        Xi = inverse(X)
        P = RatMatrix.identity(n)
        for j in range(1, -jmin + 1):
            P = P * Xi
            window[-j] = P[0, 0] * H0
        # det(lambda + X) = det(lambda*1 - (-X)); char_poly returns leading first
        coeffs = char_poly(X.scale(-1))
        p = tuple(coeffs[n - i] for i in range(n + 1))
        return cls(H0, n, p, window)

    @classmethod
    def from_values(cls, n: int, hs: Sequence, H0=Fraction(1)) -> "MomentSeq":
        """Moments h_0=1, h_1, ... given explicitly; fits the recursion
        coefficients when at least 2n values are supplied and the n-th
        Hankel determinant is nonzero (otherwise the window is fixed)."""
        hs = [rat(x) for x in hs]
        if not hs or hs[0] != 1:
            raise ArgumentError("h-gauge values must start with h_0 = 1")
        H0 = rat(H0)
        window = {j: h * H0 for j, h in enumerate(hs)}
        p = None
        if len(hs) >= 2 * n:
            # solve sum_{i<n} (-1)^i p_i h_{k+i} = -(-1)^n h_{k+n}, k=0..n-1
            A = RatMatrix.zeros(n, n)
            rhs = RatMatrix.zeros(n, 1)
            for k in range(n):
                for i in range(n):
                    A[k, i] = (-1) ** i * hs[k + i]
                rhs[k, 0] = -((-1) ** n) * hs[k + n]
            try:
                sol = inverse(A) * rhs
            except SingularMatrix as exc:
                raise NonGeneric("moment sequence is degenerate") from exc
            p = tuple(sol[i, 0] for i in range(n)) + (Fraction(1),)
            if p[0] == 0:
                raise NonGeneric("recursion has p_0 = 0, no two-sided extension")
        return cls(H0, n, p, window)

    # -- access -----------------------------------------------------------

    def H(self, j: int) -> Fraction:
        if j in self._H:
            return self._H[j]
        if self.p is None:
            raise RangeError(f"moment H_{j} outside the available window")
        n, p = self.n, self.p
        lo, hi = min(self._H), max(self._H)
        while hi < j:
            # (-1)^n H_{k+n} = -sum_{i<n} (-1)^i p_i H_{k+i},  k = hi-n+1
            k = hi - n + 1
            s = sum((-1) ** i * p[i] * self._H[k + i] for i in range(n))
            self._H[hi + 1] = -s * (-1) ** n
            hi += 1
        while lo > j:
            k = lo - 1
            s = sum((-1) ** i * p[i] * self._H[k + i] for i in range(1, n + 1))
            self._H[k] = -s / p[0]
            lo -= 1
        return self._H[j]

    def h(self, j: int) -> Fraction:
        return self.H(j) / self.H0

    def rescaled(self, t) -> "MomentSeq":
        t = rat(t)
        if t == 0:
            raise ArgumentError("rescaling factor must be nonzero")
        return MomentSeq(self.H0 * t, self.n, self.p,
                         {j: v * t for j, v in self._H.items()})

    def shifted(self) -> "MomentSeq":
        """The moment form of eta: H_i -> H_{i+1}."""
        if self.H(1) == 0:
            raise NonGeneric("H_1 = 0: shifted sequence loses its gauge")
        return MomentSeq(self.H(1), self.n, self.p,
                         {j: self.H(j + 1) for j in list(self._H)})


def moments_from_X(X: RatMatrix, window: Optional[Tuple[int, int]] = None,
                   H0=Fraction(1)) -> MomentSeq:
    if window is None:
        return MomentSeq.from_X(X, H0=H0)
    return MomentSeq.from_X(X, window[0], window[1], H0=H0)


class HankelCache:
    """Memoized Hankel determinants Delta_i^(l) over one MomentSeq."""

    def __init__(self, ms: MomentSeq):
        self.ms = ms
        self.memo: Dict[Tuple[int, int], Fraction] = {}

    def delta(self, i: int, l: int) -> Fraction:
        """Delta_i^(l) = det(h_{a+b+l-i-1})_{a,b=1..i} (h-gauge)."""
        if i < 0:
            raise ArgumentError("Hankel size must be nonnegative")
        key = (i, l)
        if key not in self.memo:
            M = RatMatrix.zeros(i, i)
            for a in range(1, i + 1):
                for b in range(1, i + 1):
                    M[a - 1, b - 1] = self.ms.h(a + b + l - i - 1)
            self.memo[key] = det(M) if i else Fraction(1)
        return self.memo[key]

    def dd(self, i: int, l: int) -> Fraction:
        """H-gauge determinant DD_i^(l) = H_0^i Delta_i^(l)."""
        return self.ms.H0 ** i * self.delta(i, l)


def hankel(cache: HankelCache, i: int, l: int, gauge: str = "h") -> Fraction:
    if gauge == "h":
        return cache.delta(i, l)
    if gauge == "H":
        return cache.dd(i, l)
    raise ArgumentError("gauge must be 'h' or 'H'")


# ---------------------------------------------------------------------------
# Weyl function


@dataclass(frozen=True)
class WeylFunction:
    """m(lambda) = Q(lambda)/P(lambda) with P = char poly of X and
    Q = char poly of X with row and column 1 deleted (coefficients leading
    first); the Laurent expansion at infinity is sum h_j lambda^{-j-1}."""

    P: Tuple[Fraction, ...]
    Q: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.P[-1] == 0:
            raise NonGeneric("P(0) = 0: function not defined on invertible cells")

    @property
    def n(self) -> int:
        return len(self.P) - 1

    def to_json(self) -> dict:
        return {"P": [rat_str(c) for c in self.P], "Q": [rat_str(c) for c in self.Q]}

    @classmethod
    def from_json(cls, obj: dict) -> "WeylFunction":
        return cls(tuple(rat(c) for c in obj["P"]), tuple(rat(c) for c in obj["Q"]))

    def m_form(self, H0=Fraction(1)) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        """Coefficients of the boundary-measurement form
        M(lambda) = H_0((lambda*1 + X)^{-1}e_1, e_1) = -H_0 m(-lambda)."""
        n = self.n
        H0 = rat(H0)
        Pm = tuple((-1) ** n * (-1) ** (n - j) * c for j, c in enumerate(self.P))
        Qm = tuple(-H0 * (-1) ** n * (-1) ** (n - 1 - j) * c
                   for j, c in enumerate(self.Q))
        return Pm, Qm


def weyl_from_X(X: RatMatrix) -> WeylFunction:
    n = X.rows
    P = tuple(char_poly(X))
    if P[-1] == 0:
        raise SingularMatrix("Weyl function of a singular matrix")
    Q = tuple(char_poly(X.delete_rc(1, 1)))
    cache = HankelCache(MomentSeq.from_X(X, jmin=0, jmax=2 * n - 2))
    if cache.delta(n, n - 1) == 0:
        raise NonGeneric("P and Q share a root (Delta_n^(n-1) = 0)")
    return WeylFunction(P, Q)


def q_from_moments(ms: MomentSeq) -> Tuple[Fraction, ...]:
    """Numerator of the M-form recovered from moments alone:
    (-1)^{j+1} q_j = sum_{i=j+1}^n (-1)^i p_i H_{i-j-1} (leading first)."""
    if ms.p is None:
        raise RangeError("recursion coefficients unavailable")
    n, p = ms.n, ms.p
    q = []
    for j in range(n - 1, -1, -1):
        s = sum((-1) ** i * p[i] * ms.H(i - j - 1) for i in range(j + 1, n + 1))
        q.append((-1) ** (j + 1) * s)
    return tuple(q)


def eta(w: Union[WeylFunction, MomentSeq]):
    """The shift H_i -> H_{i+1}; on functions, M -> lambda*M - H_0."""
    if isinstance(w, MomentSeq):
        return w.shifted()
    n = w.n
    h0 = w.Q[0]  # leading coefficient of Q is h_0 (=1 for a moment function)
    newQ = [Fraction(0)] * n
    # lambda*Q - h0*P, the lambda^n terms cancel
    for j, c in enumerate(w.Q):
        if j > 0:
            newQ[j - 1] += c
    for j, c in enumerate(w.P):
        if j > 0:
            newQ[j - 1] -= h0 * c
    return WeylFunction(w.P, tuple(newQ))


# ---------------------------------------------------------------------------
# inverse problem: tau and rho


@dataclass(frozen=True)
class ClusterCoords:
    """x = (x_01, x_11, ..., x_0,n-1, x_1,n-1, DD_n^(n-1), 1/det X)."""

    x: Tuple[Fraction, ...]
    eps: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.x) // 2


def tau(tag, cache: HankelCache) -> ClusterCoords:
    eps, kappa = _comb_of(tag)
    n = len(eps)
    x: List[Fraction] = []
    for i in range(1, n):
        x.append(cache.dd(i, kappa[i - 1]))
        x.append(cache.dd(i, kappa[i - 1] + 1))
    x.append(cache.dd(n, n - 1))
    if x[-1] == 0:
        raise NonGeneric("DD_n^(n-1) vanishes")
    x.append(cache.dd(n, n - 2) / x[-1])
    if any(v == 0 for v in x):
        raise NonGeneric("vanishing Hankel determinant in the chart")
    return ClusterCoords(tuple(x), eps)


def _x_tables(coords: ClusterCoords):
    """x_{0i}, x_{1i} for i in [0,n], the i=n pair via the determinant shift
    DD_n^(l) = x_{2n-1} x_{2n}^{n-1-l}."""
    n = coords.n
    eps, kappa = _comb_of(coords.eps)
    x = coords.x
    x0 = [Fraction(1)] + [x[2 * i - 2] for i in range(1, n)]
    x1 = [Fraction(1)] + [x[2 * i - 1] for i in range(1, n)]
    x0.append(x[2 * n - 2] * x[2 * n - 1] ** (n - 1 - kappa[n - 1]))
    x1.append(x[2 * n - 2] * x[2 * n - 1] ** (n - 2 - kappa[n - 1]))
    return x0, x1, eps


def rho(tag, coords: ClusterCoords) -> FactorParams:
    """Factorization parameters in the reduced gauge (c^+ = 1, c^- = c)."""
    eps, _ = _comb_of(tag)
    if eps != coords.eps:
        raise ArgumentError("chart tag does not match the coordinates")
    n = coords.n
    x0, x1, eps = _x_tables(coords)
    if any(v == 0 for v in x0 + x1):
        raise NonGeneric("vanishing denominator in the inverse formulas")
    d = [x1[i] * x0[i - 1] / (x0[i] * x1[i - 1]) for i in range(1, n + 1)]
    c = []
    for i in range(1, n):
        base = x0[i - 1] * x0[i + 1] / x1[i] ** 2
        base *= (x1[i + 1] / x0[i + 1]) ** eps[i]
        base *= (x1[i - 1] / x0[i - 1]) ** (2 - eps[i - 1])
        c.append(base)
    if any(v == 0 for v in d + c):
        raise NonGeneric("degenerate parameters")
    return FactorParams.reduced(d, c)


def params_from_moments(pair_or_tag, ms: MomentSeq) -> FactorParams:
    return rho(pair_or_tag, tau(pair_or_tag, HankelCache(ms)))


# ---------------------------------------------------------------------------
# flag identities (verification routines)


def gamma_coeff(comb: CombData, p: FactorParams, sign: str, i: int) -> Fraction:
    """gamma_i^{+/-} of the flag lemma (gamma_1 = 1)."""
    if i == 1:
        return Fraction(1)
    if sign == "+":
        epss, epsb, cc = comb.eps_plus, comb.epsbar_plus, p.cplus
    else:
        epss, epsb, cc = comb.eps_minus, comb.epsbar_minus, p.cminus
    e_i = epss[i - 1]
    out = Fraction((-1) ** ((i - 1) * e_i)) * p.d[i - 1] ** (-e_i)
    for j in range(1, i):
        out *= cc[j - 1] * p.d[j - 1] ** (epsb[j - 1] - e_i)
    return out


def big_gamma(comb: CombData, p: FactorParams, l: int) -> Fraction:
    """Gamma_l relating shifted Hankel determinants to leading minors of X^k."""
    c = p.c
    epsb = tuple(a + b for a, b in zip(comb.epsbar_plus, comb.epsbar_minus))
    out = Fraction(1)
    for i in range(2, l + 1):
        out *= p.d[i - 1] ** (-comb.eps[i - 1])
        for j in range(1, i):
            out *= c[j - 1] * p.d[j - 1] ** (epsb[j - 1] - comb.eps[i - 1])
    return out


def poly_toep(ms: MomentSeq, i: int, l: int) -> List[Fraction]:
    """Coefficients c_0..c_i of the bordered-Hankel polynomial: the
    determinant of the (i+1)x(i+1) matrix whose first i rows are moments
    h_{l-i+a+b} and whose last row is (1, lambda, ..., lambda^i)."""
    if i == 0:
        return [Fraction(1)]
    coeffs = []
    for j in range(i + 1):
        cols = [b for b in range(i + 1) if b != j]
        M = RatMatrix.zeros(i, i)
        for a in range(1, i + 1):
            for bpos, b in enumerate(cols):
                M[a - 1, bpos] = ms.h(l - i + a + b)
        coeffs.append((-1) ** (i + j) * det(M))
    return coeffs


def laurent_in_X(coeffs: Sequence[Fraction], shift: int, X: RatMatrix) -> RatMatrix:
    """X^shift * sum_a coeffs[a] X^a."""
    n = X.rows
    acc = RatMatrix.zeros(n, n)
    P = RatMatrix.identity(n)
    for a, c in enumerate(coeffs):
        if a:
            P = P * X
        acc = acc + P.scale(c)
    if shift:
        from .linalg import mat_pow

        acc = mat_pow(X, shift) * acc
    return acc


def flag_polynomials(pair: CoxeterPair, p: FactorParams, ms: Optional[MomentSeq] = None):
    """The Laurent polynomials p_i^+/p_i^- as matrices p_i^{+/-}(X):
    returns (list of p_i^+(X), list of p_i^-(X)), 1-indexed at position i-1."""
    from .coxeter import build_X

    comb = pair.comb
    n = pair.n
    X = build_X(pair, p)
    if ms is None:
        ms = MomentSeq.from_X(X)
    cache = HankelCache(ms)
    plus, minus = [], []
    for sign, store in (("+", plus), ("-", minus)):
        epss = comb.eps_plus if sign == "+" else comb.eps_minus
        ks = comb.k_plus if sign == "+" else comb.k_minus
        for i in range(1, n + 1):
            e_i = epss[i - 1]
            dprev = cache.delta(i - 1, comb.kappa[i - 2]) if i > 1 else Fraction(1)
            if dprev == 0:
                raise NonGeneric("vanishing Hankel determinant in flag formula")
            g = gamma_coeff(comb, p, sign, i)
            pref = Fraction((-1) ** ((i - 1) * e_i)) / (g * dprev)
            l = (comb.kappa[i - 2] if i > 1 else 0) - e_i
            coeffs = [pref * c for c in poly_toep(ms, i - 1, l)]
            store.append(laurent_in_X(coeffs, ks[i - 1] - i + 1, X))
    return plus, minus
