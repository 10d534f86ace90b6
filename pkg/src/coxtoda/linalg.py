"""Exact rational matrices plus the few float kernels the flows need.

Rational scalars are ``fractions.Fraction`` (already reduced, positive
denominator — the ``Rat`` contract).  Matrices store flat numerator and
denominator int lists so the hot loops can run in the compiled kernel.
All public index arguments (minor rows/cols) are 1-based, matching the
conventions used everywhere else in the package.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kern
from .errors import ArgumentError, NumericOverflow, SingularMatrix

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ints, strings like '-3/7', floats-free input to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    raise ArgumentError(f"cannot coerce {type(x).__name__} to a rational")


def rat_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


class RatMatrix:
    __slots__ = ("rows", "cols", "_num", "_den")

    def __init__(self, rows: int, cols: int, num: list, den: list):
        self.rows = rows
        self.cols = cols
        self._num = num
        self._den = den

    # -- construction ---------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence]) -> "RatMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        num, den = [], []
        for r in data:
            if len(r) != cols:
                raise ArgumentError("ragged rows")
            for x in r:
                f = rat(x)
                num.append(f.numerator)
                den.append(f.denominator)
        return cls(rows, cols, num, den)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        num = [0] * (n * n)
        for i in range(n):
            num[i * n + i] = 1
        return cls(n, n, num, [1] * (n * n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [0] * (rows * cols), [1] * (rows * cols))

    @classmethod
    def diag(cls, entries: Sequence) -> "RatMatrix":
        n = len(entries)
        m = cls.zeros(n, n)
        for i, x in enumerate(entries):
            m[i, i] = rat(x)
        return m

    def copy(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, list(self._num), list(self._den))

    # -- element access (0-based internally) ----------------------------

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(self._num[i * self.cols + j], self._den[i * self.cols + j])

    def __setitem__(self, ij, value) -> None:
        i, j = ij
        f = rat(value)
        self._num[i * self.cols + j] = f.numerator
        self._den[i * self.cols + j] = f.denominator

    def tolists(self) -> list:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._num == other._num
            and self._den == other._den
        )

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(rat_str(self[i, j]) for j in range(self.cols))
            for i in range(self.rows)
        )
        return f"RatMatrix[{body}]"

    # -- arithmetic ------------------------------------------------------

    def __mul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ArgumentError("dimension mismatch in product")
        num, den = _kern.mat_mul(
            self._num, self._den, other._num, other._den,
            self.rows, self.cols, other.cols,
        )
        return RatMatrix(self.rows, other.cols, num, den)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ArgumentError("dimension mismatch in sum")
        out = RatMatrix.zeros(self.rows, self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = self[i, j] + other[i, j]
        return out

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + other.scale(-1)

    def scale(self, s) -> "RatMatrix":
        f = rat(s)
        out = self.copy()
        for idx in range(len(out._num)):
            v = Fraction(out._num[idx], out._den[idx]) * f
            out._num[idx] = v.numerator
            out._den[idx] = v.denominator
        return out

    def transpose(self) -> "RatMatrix":
        out = RatMatrix.zeros(self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j, i] = self[i, j]
        return out

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        """Submatrix from 1-based row/column index lists."""
        out = RatMatrix.zeros(len(rows), len(cols))
        for a, i in enumerate(rows):
            for b, j in enumerate(cols):
                out[a, b] = self[i - 1, j - 1]
        return out

    def delete_rc(self, i: int, j: int) -> "RatMatrix":
        """Drop 1-based row i and column j."""
        rows = [r for r in range(1, self.rows + 1) if r != i]
        cols = [c for c in range(1, self.cols + 1) if c != j]
        return self.submatrix(rows, cols)

    def to_float(self) -> np.ndarray:
        a = np.empty((self.rows, self.cols))
        for i in range(self.rows):
            for j in range(self.cols):
                a[i, j] = float(self[i, j])
        return a


def minor(A: RatMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """Exact minor for strictly increasing 1-based index lists."""
    if len(rows) != len(cols):
        raise ArgumentError("minor needs equally many rows and columns")
    if any(a >= b for a, b in zip(rows, rows[1:])) or any(
        a >= b for a, b in zip(cols, cols[1:])
    ):
        raise ArgumentError("minor indices must be strictly increasing")
    if not rows:
        return Fraction(1)
    if rows[0] < 1 or rows[-1] > A.rows or cols[0] < 1 or cols[-1] > A.cols:
        raise ArgumentError("minor indices out of bounds")
    return det(A.submatrix(rows, cols))


def det(A: RatMatrix) -> Fraction:
    if A.rows != A.cols:
        raise ArgumentError("determinant of a non-square matrix")
    n, d = _kern.mat_det(A._num, A._den, A.rows)
    return Fraction(n, d)


def inverse(A: RatMatrix) -> RatMatrix:
    if A.rows != A.cols:
        raise ArgumentError("inverse of a non-square matrix")
    try:
        num, den = _kern.mat_inv(A._num, A._den, A.rows)
    except ZeroDivisionError as exc:
        raise SingularMatrix("matrix is singular") from exc
    return RatMatrix(A.rows, A.rows, num, den)


def mat_pow(A: RatMatrix, k: int) -> RatMatrix:
    if A.rows != A.cols:
        raise ArgumentError("power of a non-square matrix")
    if k < 0:
        A = inverse(A)
        k = -k
    out = RatMatrix.identity(A.rows)
    base = A
    while k:
        if k & 1:
            out = out * base
        base = base * base if k > 1 else base
        k >>= 1
    return out


def char_poly(A: RatMatrix) -> list:
    """Coefficients of det(lambda*1 - A), leading first, via Faddeev-LeVerrier."""
    if A.rows != A.cols:
        raise ArgumentError("characteristic polynomial of a non-square matrix")
    n = A.rows
    coeffs = [Fraction(1)]
    M = RatMatrix.identity(n)
    for k in range(1, n + 1):
        AM = A * M
        c = -AM.trace() / k
        coeffs.append(c)
        M = AM + RatMatrix.identity(n).scale(c)
    return coeffs


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    """Monic gcd over the rationals (coefficient lists, leading first)."""

    def strip(p):
        p = list(p)
        while p and p[0] == 0:
            p.pop(0)
        return p

    a, b = strip(a), strip(b)
    while b:
        # a mod b
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[0] / b[0]
            for i in range(len(b)):
                r[i] -= f * b[i]
            r.pop(0)
            r = strip(r) if r and r[0] == 0 else r
        a, b = b, strip(r)
    if not a:
        return []
    lead = a[0]
    return [c / lead for c in a]


# -- float kernels -------------------------------------------------------


class FloatMatrix:
    """Thin wrapper over a dense float64 array (toda module plumbing)."""

    __slots__ = ("a",)

    def __init__(self, a):
        self.a = np.asarray(a, dtype=float)
        if not np.all(np.isfinite(self.a)):
            raise NumericOverflow("non-finite entries")

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]


def mat_exp(A: FloatMatrix, t: float = 1.0) -> FloatMatrix:
    """exp(t*A) by scaling-and-squaring with a truncated Taylor series."""
    M = t * A.a
    norm = np.linalg.norm(M, 1)
    if not math.isfinite(norm):
        raise NumericOverflow("matrix norm overflow")
    s = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    M = M / (2.0 ** s)
    n = M.shape[0]
    term = np.eye(n)
    acc = np.eye(n)
    k = 1
    while True:
        term = term @ M / k
        acc = acc + term
        if np.max(np.abs(term)) <= 1e-16 * max(1.0, np.max(np.abs(acc))):
            break
        k += 1
        if k > 200:  # series must have converged long before this
            break
    for _ in range(s):
        acc = acc @ acc
    if not np.all(np.isfinite(acc)):
        raise NumericOverflow("overflow in matrix exponential")
    return FloatMatrix(acc)


def det_any(rows: Iterable[Iterable]) -> object:
    """Generic Gaussian-elimination determinant (works for Fractions or floats)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    is_float = any(isinstance(x, float) for r in m for x in r)
    sign = 1
    for c in range(n):
        if is_float:
            piv = max(range(c, n), key=lambda r: abs(m[r][c]))
            if m[piv][c] == 0:
                return 0.0
        else:
            piv = next((r for r in range(c, n) if m[r][c] != 0), -1)
            if piv < 0:
                return Fraction(0)
        if piv != c:
            m[piv], m[c] = m[c], m[piv]
            sign = -sign
        for r in range(c + 1, n):
            if m[r][c] == 0:
                continue
            f = m[r][c] / m[c][c]
            for j in range(c, n):
                m[r][j] -= f * m[c][j]
    out = m[0][0]
    for i in range(1, n):
        out = out * m[i][i]
    return sign * out
