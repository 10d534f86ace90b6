# cython: language_level=3
"""Compiled exact rational matrix kernels (same contract as ``pure.py``).

Entries stay arbitrary-precision Python ints; Cython removes the
interpreter overhead of the inner elimination loops.
"""

from math import gcd

BACKEND = "fast"


cdef inline tuple _red(object n, object d):
    if d < 0:
        n = -n
        d = -d
    g = gcd(n, d)
    if g > 1:
        n //= g
        d //= g
    return n, d


cdef inline tuple _add(object an, object ad, object bn, object bd):
    return _red(an * bd + bn * ad, ad * bd)


cdef inline tuple _mul(object an, object ad, object bn, object bd):
    g1 = gcd(an, bd) or 1
    g2 = gcd(bn, ad) or 1
    n = (an // g1) * (bn // g2)
    d = (ad // g2) * (bd // g1)
    if d < 0:
        n = -n
        d = -d
    return n, d


def mat_mul(list an, list ad, list bn, list bd, Py_ssize_t n, Py_ssize_t m, Py_ssize_t k):
    cdef Py_ssize_t i, j, t
    cdef list cn = [0] * (n * k)
    cdef list cd = [1] * (n * k)
    for i in range(n):
        for j in range(k):
            sn, sd = 0, 1
            for t in range(m):
                pn, pd = _mul(an[i * m + t], ad[i * m + t], bn[t * k + j], bd[t * k + j])
                sn, sd = _add(sn, sd, pn, pd)
            cn[i * k + j] = sn
            cd[i * k + j] = sd
    return cn, cd


def mat_det(list an, list ad, Py_ssize_t n):
    cdef Py_ssize_t c, r, j, piv, a, b
    cdef int sign = 1
    cdef list num = list(an)
    cdef list den = list(ad)
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
                a = piv * n + j
                b = c * n + j
                num[a], num[b] = num[b], num[a]
                den[a], den[b] = den[b], den[a]
        pn, pd = num[c * n + c], den[c * n + c]
        dn, dd = _mul(dn, dd, pn, pd)
        for r in range(c + 1, n):
            rn, rd = num[r * n + c], den[r * n + c]
            if rn == 0:
                continue
            fn, fd = _mul(rn, rd, pd, pn)
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


def mat_inv(list an, list ad, Py_ssize_t n):
    cdef Py_ssize_t w = 2 * n
    cdef Py_ssize_t c, r, j, piv, a, b, i
    cdef list num = [0] * (n * w)
    cdef list den = [1] * (n * w)
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
                a = piv * w + j
                b = c * w + j
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
    cdef list cn = [0] * (n * n)
    cdef list cd = [1] * (n * n)
    for i in range(n):
        for j in range(n):
            cn[i * n + j] = num[i * w + n + j]
            cd[i * n + j] = den[i * w + n + j]
    return cn, cd
