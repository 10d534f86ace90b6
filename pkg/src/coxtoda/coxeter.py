"""Coxeter elements, combinatorial data, bidiagonal factorization and its inverse.

Conventions (all 1-based):
  * a Coxeter element is stored by its I-set {1 = i_0 < ... < i_k = n};
    the canonical reduced word is s_[i_{k-1},i_k] ... s_[i_1,i_2] s_[1,i_1]
    with s_[p,q] = s_p s_{p+1} ... s_{q-1};
  * the permutation matrix has ones at (i_{j-1}, i_j) and (l_j, l_{j-1}),
    where L = {1} | ([1,n] \\ I) | {n} is the I-set of the inverse;
  * a pair is stored by (Iplus, Iminus) = I-sets of v and of u^{-1}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import ArgumentError, InvalidParams, NonGeneric, NotCoxeter, SingularMatrix
from .linalg import RatMatrix, det, minor, rat, rat_str


def _word_from_I(I: Tuple[int, ...]) -> Tuple[int, ...]:
    word = []
    for j in range(len(I) - 1, 0, -1):
        word.extend(range(I[j - 1], I[j]))
    return tuple(word)


def _perm_from_word(n: int, word: Sequence[int]) -> Tuple[int, ...]:
    """Image tuple p with p[i-1] = image of i; rightmost letter acts first."""
    p = list(range(1, n + 1))
    for s in reversed(word):
        # left-compose with the transposition (s, s+1): p <- s_i o p
        p = [x + 1 if x == s else x - 1 if x == s + 1 else x for x in p]
    return tuple(p)


@dataclass(frozen=True)
class CoxeterElement:
    n: int
    I: Tuple[int, ...]

    def __post_init__(self):
        if not self.I or self.I[0] != 1 or self.I[-1] != self.n:
            raise NotCoxeter(f"I-set must contain 1 and n: {self.I}")
        if any(a >= b for a, b in zip(self.I, self.I[1:])):
            raise NotCoxeter("I-set must be strictly increasing")

    @classmethod
    def from_I(cls, n: int, I: Sequence[int]) -> "CoxeterElement":
        return cls(n, tuple(I))

    @classmethod
    def from_word(cls, n: int, word: Sequence[int]) -> "CoxeterElement":
        if sorted(word) != list(range(1, n)):
            raise NotCoxeter(
                "a Coxeter word must use each generator s_1..s_{n-1} exactly once"
            )
        p = _perm_from_word(n, word)
        I = tuple(sorted({1} | {i for i in range(2, n + 1) if p[i - 1] < i}))
        elem = cls(n, I)
        if elem.perm != p:
            raise NotCoxeter("word does not define a Coxeter element")
        return elem

    @property
    def word(self) -> Tuple[int, ...]:
        return _word_from_I(self.I)

    @property
    def L(self) -> Tuple[int, ...]:
        inner = set(range(1, self.n + 1)) - set(self.I)
        return tuple(sorted({1, self.n} | inner))

    @property
    def perm(self) -> Tuple[int, ...]:
        p = [0] * self.n
        for j in range(1, len(self.I)):
            p[self.I[j] - 1] = self.I[j - 1]
        L = self.L
        for j in range(1, len(L)):
            p[L[j - 1] - 1] = L[j]
        return tuple(p)

    def inverse(self) -> "CoxeterElement":
        return CoxeterElement(self.n, self.L)


def coxeter_from_word(n: int, word: Sequence[int]) -> CoxeterElement:
    return CoxeterElement.from_word(n, word)


def inverse_sets(c: CoxeterElement) -> Tuple[int, ...]:
    return c.L


def perm_matrix(c: CoxeterElement) -> RatMatrix:
    m = RatMatrix.zeros(c.n, c.n)
    p = c.perm
    for col in range(1, c.n + 1):
        m[p[col - 1] - 1, col - 1] = 1
    return m


def all_coxeter_elements(n: int):
    for sub in itertools.chain.from_iterable(
        itertools.combinations(range(2, n), r) for r in range(n - 1)
    ):
        yield CoxeterElement(n, tuple(sorted({1, n} | set(sub))))


# ---------------------------------------------------------------------------
# combinatorial data


@dataclass(frozen=True)
class CombData:
    n: int
    Iplus: Tuple[int, ...]
    Iminus: Tuple[int, ...]
    eps_plus: Tuple[int, ...]
    eps_minus: Tuple[int, ...]
    zeta_plus: Tuple[int, ...]
    zeta_minus: Tuple[int, ...]
    k_plus: Tuple[int, ...]
    k_minus: Tuple[int, ...]
    eps: Tuple[int, ...]
    kappa: Tuple[int, ...]
    epsbar_plus: Tuple[int, ...]
    epsbar_minus: Tuple[int, ...]

    @property
    def Lplus(self) -> Tuple[int, ...]:
        return CoxeterElement(self.n, self.Iplus).L

    @property
    def Lminus(self) -> Tuple[int, ...]:
        return CoxeterElement(self.n, self.Iminus).L

    def M(self, sign: str, i: int) -> Tuple[int, int]:
        k = (self.k_plus if sign == "+" else self.k_minus)[i - 1]
        return (k - i + 1, k)


def _one_sided(n: int, I: Tuple[int, ...]):
    eps = tuple(0 if (i in I and i != 1) else 1 for i in range(1, n + 1))
    zeta = tuple(
        i * (1 - eps[i - 1]) - sum(eps[: i - 1]) for i in range(1, n + 1)
    )
    k = tuple(i - sum(eps[:i]) for i in range(1, n + 1))
    # epsbar is built on the L-set: 0 exactly at L \ {1}
    L = CoxeterElement(n, I).L
    epsbar = tuple(0 if (i in L and i != 1) else 1 for i in range(1, n + 1))
    return eps, zeta, k, epsbar


def comb_from_sets(n: int, Iplus: Sequence[int], Iminus: Sequence[int]) -> CombData:
    Ip, Im = tuple(Iplus), tuple(Iminus)
    ep, zp, kp, ebp = _one_sided(n, Ip)
    em, zm, km, ebm = _one_sided(n, Im)
    eps = tuple(a + b for a, b in zip(ep, em))
    kappa = tuple(i + 1 - sum(eps[:i]) for i in range(1, n + 1))
    return CombData(n, Ip, Im, ep, em, zp, zm, kp, km, eps, kappa, ebp, ebm)


def comb_data(u: CoxeterElement, v: CoxeterElement) -> CombData:
    if u.n != v.n:
        raise ArgumentError("u and v must live in the same S_n")
    return comb_from_sets(u.n, v.I, u.inverse().I)


@dataclass(frozen=True)
class CoxeterPair:
    u: CoxeterElement
    v: CoxeterElement

    @property
    def n(self) -> int:
        return self.u.n

    @property
    def comb(self) -> CombData:
        return comb_data(self.u, self.v)

    @classmethod
    def from_sets(cls, n: int, Iplus: Sequence[int], Iminus: Sequence[int]) -> "CoxeterPair":
        v = CoxeterElement.from_I(n, Iplus)
        u = CoxeterElement.from_I(n, Iminus).inverse()
        return cls(u, v)

    def to_json(self) -> dict:
        c = self.comb
        return {"n": self.n, "Iplus": list(c.Iplus), "Iminus": list(c.Iminus)}

    @classmethod
    def from_json(cls, obj: dict) -> "CoxeterPair":
        return cls.from_sets(obj["n"], obj["Iplus"], obj["Iminus"])


def all_pairs(n: int):
    for v in all_coxeter_elements(n):
        for w in all_coxeter_elements(n):  # w plays the role of u^{-1}
            yield CoxeterPair(w.inverse(), v)


def validate_eps(eps: Sequence[int]) -> Tuple[int, ...]:
    eps = tuple(eps)
    n = len(eps)
    if n < 2 or eps[0] != 2 or eps[-1] != 0 or any(e not in (0, 1, 2) for e in eps):
        raise ArgumentError(f"invalid epsilon tuple {eps}")
    return eps


def kappa_from_eps(eps: Sequence[int]) -> Tuple[int, ...]:
    eps = validate_eps(eps)
    return tuple(i + 1 - sum(eps[:i]) for i in range(1, len(eps) + 1))


def all_eps(n: int):
    for mid in itertools.product((0, 1, 2), repeat=n - 2):
        yield (2,) + mid + (0,)


def pair_from_eps(eps: Sequence[int]) -> CoxeterPair:
    """A canonical pair realizing eps (minus-side absorbs single units)."""
    eps = validate_eps(eps)
    n = len(eps)
    em = [1] + [1 if eps[i - 1] >= 1 else 0 for i in range(2, n)] + [0]
    ep = [1] + [1 if eps[i - 1] == 2 else 0 for i in range(2, n)] + [0]
    Iminus = tuple(sorted({1, n} | {i for i in range(2, n) if em[i - 1] == 0}))
    Iplus = tuple(sorted({1, n} | {i for i in range(2, n) if ep[i - 1] == 0}))
    return CoxeterPair.from_sets(n, Iplus, Iminus)


# ---------------------------------------------------------------------------
# factorization parameters and the factorization map


@dataclass(frozen=True)
class FactorParams:
    d: Tuple[Fraction, ...]
    cplus: Tuple[Fraction, ...]
    cminus: Tuple[Fraction, ...]

    def __post_init__(self):
        if any(x == 0 for x in self.d + self.cplus + self.cminus):
            raise InvalidParams("all factorization parameters must be nonzero")
        if len(self.cplus) != len(self.d) - 1 or len(self.cminus) != len(self.d) - 1:
            raise InvalidParams("need n diagonal and n-1 +/- parameters")

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def c(self) -> Tuple[Fraction, ...]:
        """Reduced coordinates c_i = c_i^+ c_i^-."""
        return tuple(a * b for a, b in zip(self.cplus, self.cminus))

    @classmethod
    def make(cls, d, cplus, cminus) -> "FactorParams":
        return cls(tuple(map(rat, d)), tuple(map(rat, cplus)), tuple(map(rat, cminus)))

    @classmethod
    def reduced(cls, d, c) -> "FactorParams":
        """Canonical gauge c^- = c, c^+ = 1."""
        d = tuple(map(rat, d))
        return cls(d, tuple(Fraction(1) for _ in range(len(d) - 1)), tuple(map(rat, c)))

    def to_json(self) -> dict:
        return {
            "d": [rat_str(x) for x in self.d],
            "cplus": [rat_str(x) for x in self.cplus],
            "cminus": [rat_str(x) for x in self.cminus],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FactorParams":
        return cls.make(obj["d"], obj["cplus"], obj["cminus"])


def factor_sequence(pair: CoxeterPair, p: FactorParams):
    """Elementary blocks of the factorization, left to right (2n-1 of them).

    Yields ("lower", i, c_i^-), ("diag", d-tuple), ("upper", j, c_j^+).
    """
    comb = pair.comb
    if p.n != pair.n:
        raise InvalidParams("parameter arrays sized for the wrong n")
    Im, Ip = comb.Iminus, comb.Iplus
    for j in range(1, len(Im)):
        for a in range(Im[j] - 1, Im[j - 1] - 1, -1):
            yield ("lower", a, p.cminus[a - 1])
    yield ("diag", p.d)
    for j in range(len(Ip) - 1, 0, -1):
        for a in range(Ip[j - 1], Ip[j]):
            yield ("upper", a, p.cplus[a - 1])


def _elem_matrix(n: int, block) -> RatMatrix:
    kind = block[0]
    if kind == "diag":
        return RatMatrix.diag(block[1])
    m = RatMatrix.identity(n)
    _, i, t = block
    if kind == "lower":
        m[i, i - 1] = t  # entry (i+1, i), 1-based
    else:
        m[i - 1, i] = t  # entry (i, i+1), 1-based
    return m


def build_X(pair: CoxeterPair, p: FactorParams) -> RatMatrix:
    X = RatMatrix.identity(pair.n)
    for block in factor_sequence(pair, p):
        X = X * _elem_matrix(pair.n, block)
    return X


def build_X_inverse(pair: CoxeterPair, p: FactorParams) -> RatMatrix:
    """Inverse via the barred factorization over the L-sets."""
    comb = pair.comb
    n = pair.n
    Lm, Lp = comb.Lminus, comb.Lplus
    X = RatMatrix.identity(n)
    # upper groups, outermost first
    for j in range(len(Lp) - 1, 0, -1):
        for a in range(Lp[j - 1], Lp[j]):
            X = X * _elem_matrix(n, ("upper", a, -p.cplus[a - 1]))
    X = X * RatMatrix.diag([1 / x for x in p.d])
    for j in range(1, len(Lm)):
        for a in range(Lm[j] - 1, Lm[j - 1] - 1, -1):
            X = X * _elem_matrix(n, ("lower", a, -p.cminus[a - 1]))
    return X


def _safe_minor(X, rows, cols):
    v = minor(X, list(rows), list(cols))
    if v == 0:
        raise NonGeneric(f"vanishing minor rows={rows} cols={cols}")
    return v


def params_from_X(pair: CoxeterPair, X: RatMatrix) -> FactorParams:
    """Recover (d, c^+, c^-) from the matrix by the minor-ratio formulas."""
    comb = pair.comb
    n = pair.n
    lead = [Fraction(1)]
    for i in range(1, n + 1):
        lead.append(minor(X, list(range(1, i + 1)), list(range(1, i + 1))))
        if lead[i] == 0:
            raise NonGeneric(f"vanishing leading principal minor of order {i}")
    d = tuple(lead[i] / lead[i - 1] for i in range(1, n + 1))

    def side(I, transposed):
        def mnr(rows, cols):
            if transposed:
                rows, cols = cols, rows
            return _safe_minor(X, rows, cols)

        c = []
        for i in range(1, n):
            j = max(a for a in range(len(I)) if I[a] <= i)  # i_j <= i < i_{j+1}
            if I[j] < i:
                rows = list(I[1 : j + 1]) + [i + 1]
                rows_lo = list(I[1 : j + 1]) + [i]
                cols = list(I[: j + 1])
                c.append(mnr(rows, cols) / mnr(rows_lo, cols))
            else:  # i = i_j, j >= 1
                rows = list(I[1 : j + 1]) + [i + 1]
                cols = list(I[: j + 1])
                num = mnr(rows, cols) * lead[i - 1]
                den = mnr(list(I[1 : j + 1]), list(I[:j])) * lead[i]
                c.append(num / den)
        return tuple(c)

    cminus = side(comb.Iminus, transposed=False)
    cplus = side(comb.Iplus, transposed=True)
    return FactorParams(d, cplus, cminus)


def _block_rank_one(X: RatMatrix, lower: bool) -> bool:
    """Rank of every maximal lower-left (resp. upper-right) block is exactly 1."""
    n = X.rows
    for l in range(1, n):
        if lower:
            entries = [(r, c) for r in range(l + 1, n + 1) for c in range(1, l + 1)]
        else:
            entries = [(r, c) for r in range(1, l + 1) for c in range(l + 1, n + 1)]
        if all(X[r - 1, c - 1] == 0 for r, c in entries):
            return False
        for (r1, c1) in entries:
            for (r2, c2) in entries:
                if r1 < r2 and c1 < c2:
                    if (
                        X[r1 - 1, c1 - 1] * X[r2 - 1, c2 - 1]
                        != X[r1 - 1, c2 - 1] * X[r2 - 1, c1 - 1]
                    ):
                        return False
    return True


def cell_membership(X: RatMatrix) -> Optional[CoxeterPair]:
    """Identify the Coxeter pair whose cell contains X, or None."""
    n = X.rows
    if det(X) == 0:
        raise SingularMatrix("cell membership requires an invertible matrix")
    if not (_block_rank_one(X, lower=True) and _block_rank_one(X, lower=False)):
        return None

    def chain(get) -> Optional[Tuple[int, ...]]:
        I = [1]
        while I[-1] < n:
            col = I[-1]
            nxt = max((i for i in range(col + 1, n + 1) if get(i, col) != 0), default=None)
            if nxt is None:
                return None
            I.append(nxt)
        return tuple(I)

    Iminus = chain(lambda i, j: X[i - 1, j - 1])
    Iplus = chain(lambda i, j: X[j - 1, i - 1])
    if Iminus is None or Iplus is None:
        return None
    pair = CoxeterPair.from_sets(n, Iplus, Iminus)
    try:
        p = params_from_X(pair, X)
    except NonGeneric:
        return None
    if build_X(pair, p) == X:
        return pair
    return None
