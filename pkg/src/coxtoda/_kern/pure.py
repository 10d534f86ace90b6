"""Pure-Python exact rational matrix kernels.

Matrices are flat row-major pairs of lists (numerators, denominators) of
Python ints; every entry is reduced with a positive denominator.  The
compiled twin in ``_fast.pyx`` implements the same contract.
"""

from math import gcd

BACKEND = "pure"


def _red(n, d):
    if d < 0:
        n, d = -n, -d
    g = gcd(n, d)
    if g > 1:
        n //= g
        d //= g
    return n, d


def _add(an, ad, bn, bd):
    return _red(an * bd + bn * ad, ad * bd)


def _mul(an, ad, bn, bd):
    g1 = gcd(an, bd) or 1
    g2 = gcd(bn, ad) or 1
    n = (an // g1) * (bn // g2)
    d = (ad // g2) * (bd // g1)
    if d < 0:
        n, d = -n, -d
    return n, d


def mat_mul(an, ad, bn, bd, n, m, k):
    """(n x m) * (m x k) -> flat (num, den) lists of length n*k."""
    cn = [0] * (n * k)
    cd = [1] * (n * k)
    for i in range(n):
        for j in range(k):
            sn, sd = 0, 1
            for t in range(m):
                pn, pd = _mul(an[i * m + t], ad[i * m + t], bn[t * k + j], bd[t * k + j])
                sn, sd = _add(sn, sd, pn, pd)
            cn[i * k + j] = sn
            cd[i * k + j] = sd
    return cn, cd


def mat_det(an, ad, n):
    """Exact determinant by rational Gaussian elimination, first nonzero pivot."""
    num = list(an)
    den = list(ad)
    sign = 1
    dn, dd = 1, 1
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if num[r * n + c] != 0:
                piv = r
                break
        if piv < 0:
            return 0, 1
        if piv != c:
            sign = -sign
            for j in range(c, n):
                a, b = piv * n + j, c * n + j
                num[a], num[b] = num[b], num[a]
                den[a], den[b] = den[b], den[a]
        pn, pd = num[c * n + c], den[c * n + c]
        dn, dd = _mul(dn, dd, pn, pd)
        for r in range(c + 1, n):
            rn, rd = num[r * n + c], den[r * n + c]
            if rn == 0:
                continue
            fn, fd = _mul(rn, rd, pd, pn)  # a_rc / pivot
            num[r * n + c] = 0
            den[r * n + c] = 1
            for j in range(c + 1, n):
                qn, qd = _mul(fn, fd, num[c * n + j], den[c * n + j])
                num[r * n + j], den[r * n + j] = _add(
                    num[r * n + j], den[r * n + j], -qn, qd
                )
    if sign < 0:
        dn = -dn
    return dn, dd


def mat_inv(an, ad, n):
    """Exact inverse by Gauss-Jordan; raises ZeroDivisionError if singular."""
    w = 2 * n
    num = [0] * (n * w)
    den = [1] * (n * w)
    for i in range(n):
        for j in range(n):
            num[i * w + j] = an[i * n + j]
            den[i * w + j] = ad[i * n + j]
        num[i * w + n + i] = 1
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if num[r * w + c] != 0:
                piv = r
                break
        if piv < 0:
            raise ZeroDivisionError("singular matrix")
        if piv != c:
            for j in range(w):
                a, b = piv * w + j, c * w + j
                num[a], num[b] = num[b], num[a]
                den[a], den[b] = den[b], den[a]
        pn, pd = num[c * w + c], den[c * w + c]
        for j in range(c, w):
            num[c * w + j], den[c * w + j] = _mul(num[c * w + j], den[c * w + j], pd, pn)
        for r in range(n):
            if r == c:
                continue
            fn, fd = num[r * w + c], den[r * w + c]
            if fn == 0:
                continue
            for j in range(c, w):
                qn, qd = _mul(fn, fd, num[c * w + j], den[c * w + j])
                num[r * w + j], den[r * w + j] = _add(
                    num[r * w + j], den[r * w + j], -qn, qd
                )
    cn = [0] * (n * n)
    cd = [1] * (n * n)
    for i in range(n):
        for j in range(n):
            cn[i * n + j] = num[i * w + n + j]
            cd[i * n + j] = den[i * w + n + j]
    return cn, cd
