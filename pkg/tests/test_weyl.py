import random
from fractions import Fraction

import pytest

from coxtoda.cluster import seed_init
from coxtoda.coxeter import CoxeterPair, FactorParams, all_pairs, build_X, pair_from_eps
from coxtoda.errors import NonGeneric, RangeError
from coxtoda.linalg import RatMatrix, char_poly, mat_pow, poly_eval
from coxtoda.weyl import (
    HankelCache,
    MomentSeq,
    eta,
    flag_polynomials,
    hankel,
    moments_from_X,
    params_from_moments,
    q_from_moments,
    rho,
    tau,
    weyl_from_X,
)

RUNNING = CoxeterPair.from_sets(5, [1, 3, 4, 5], [1, 4, 5])


def random_params(rng, n):
    return FactorParams.make(
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n)],
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n - 1)],
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n - 1)],
    )


def test_moments_match_matrix_powers():
    rng = random.Random(0)
    p = random_params(rng, 4)
    pair = pair_from_eps((2, 1, 2, 0))
    X = build_X(pair, p)
    ms = moments_from_X(X)
    for j in range(-4, 9):
        assert ms.h(j) == mat_pow(X, j)[0, 0]
        assert ms.H(j) == ms.h(j) * ms.H(0)


def test_two_sided_recursion_extends_window():
    rng = random.Random(1)
    p = random_params(rng, 4)
    X = build_X(RUNNING4 := pair_from_eps((2, 2, 0, 0)), p)
    # seed only the window h_0..h_3, then extend both ways via char poly
    ms = moments_from_X(X, window=(0, 3))
    for j in range(-6, 12):
        assert ms.h(j) == mat_pow(X, j)[0, 0]


def test_from_values_fits_recursion():
    rng = random.Random(2)
    p = random_params(rng, 3)
    X = build_X(pair_from_eps((2, 1, 0)), p)
    hs = [mat_pow(X, j)[0, 0] for j in range(6)]
    ms = MomentSeq.from_values(3, hs, H0=Fraction(2, 3))
    assert [ms.h(j) for j in range(6)] == hs
    assert ms.h(7) == mat_pow(X, 7)[0, 0]
    # the recursion coefficients are det(lambda + X), ascending in lambda
    cp = char_poly(X)  # det(lambda - X), leading first
    assert list(ms.p) == [(-1) ** (3 - j) * cp[3 - j] for j in range(4)]


def test_rescaled_and_shifted():
    rng = random.Random(3)
    p = random_params(rng, 3)
    ms = moments_from_X(build_X(pair_from_eps((2, 0, 0)), p))
    t = Fraction(5, 2)
    r = ms.rescaled(t)
    # rescaling multiplies every H_j but leaves the h_j = H_j/H_0 alone
    assert all(r.H(j) == t * ms.H(j) for j in range(-2, 7))
    s = ms.shifted()
    assert all(s.H(j) == ms.H(j + 1) for j in range(-2, 7))
    if ms.H(1) == 0:
        pytest.skip("degenerate draw")


def test_eta_on_weyl_function():
    rng = random.Random(4)
    p = random_params(rng, 4)
    X = build_X(pair_from_eps((2, 1, 1, 0)), p)
    w = weyl_from_X(X)
    w2 = eta(w)
    ms2 = moments_from_X(X).shifted()
    q2 = q_from_moments(ms2)
    assert w2.P == w.P
    # q is the numerator at -lambda: q(lam) = +/- Q(-lam), coefficient-wise
    deg = len(w2.Q) - 1
    flipped = tuple((-1) ** (deg - k) * c for k, c in enumerate(w2.Q))
    assert tuple(c * flipped[0] for c in q2) == tuple(c * q2[0] for c in flipped)


def test_weyl_q_matches_deleted_charpoly():
    rng = random.Random(5)
    for pair in all_pairs(4):
        p = random_params(rng, 4)
        X = build_X(pair, p)
        w = weyl_from_X(X)
        ms = moments_from_X(X)
        # q from moments is Q evaluated at -lambda, up to scale
        q = q_from_moments(ms)
        deg = len(w.Q) - 1
        flipped = tuple((-1) ** (deg - k) * c for k, c in enumerate(w.Q))
        assert tuple(c * flipped[0] for c in q) == tuple(c * q[0] for c in flipped)
        # Laurent expansion at infinity: P(lam) * sum h_j lam^{-j-1} ~ Q(lam)
        r = max(sum(abs(X[i, j]) for j in range(4)) for i in range(4))
        lam = 4 * r
        N = 14
        series = sum(ms.h(j) * lam ** (-j - 1) for j in range(N))
        diff = poly_eval(list(w.P), lam) * series - poly_eval(list(w.Q), lam)
        # |h_j| <= r^j, so the truncation error admits an exact geometric bound
        bound = abs(poly_eval(list(w.P), lam)) * (r / lam) ** N / (lam - r)
        assert abs(diff) <= bound


def test_weyl_json_and_m_form():
    rng = random.Random(6)
    p = random_params(rng, 3)
    X = build_X(pair_from_eps((2, 2, 0)), p)
    w = weyl_from_X(X)
    import json

    assert weyl_from_X(X) == type(w).from_json(json.loads(json.dumps(w.to_json())))
    H0 = Fraction(3)
    Pm, Qm = w.m_form(H0)
    lam = Fraction(4, 7)
    # M(lambda) = H0 * ((lam I + X)^{-1})_{11}
    from coxtoda.linalg import inverse

    M = RatMatrix.identity(3).scale(lam) + X
    want = H0 * inverse(M)[0, 0]
    assert poly_eval(list(Qm), lam) / poly_eval(list(Pm), lam) == want


def test_hankel_gauges():
    rng = random.Random(7)
    p = random_params(rng, 4)
    ms = moments_from_X(build_X(pair_from_eps((2, 0, 1, 0)), p), window=None)
    cache = HankelCache(ms)
    for i in range(0, 4):
        for l in range(-2, 5):
            assert hankel(cache, i, l, "H") == ms.H(0) ** i * hankel(cache, i, l, "h")
            assert cache.dd(i, l) == hankel(cache, i, l, "H")


def test_tau_rho_inverts_moments():
    rng = random.Random(8)
    for eps in ((2, 0, 0), (2, 1, 0), (2, 2, 0), (2, 1, 2, 0), (2, 2, 1, 0, 0)):
        pair = pair_from_eps(eps)
        p = random_params(rng, len(eps))
        X = build_X(pair, p)
        ms = moments_from_X(X)
        q = rho(eps, tau(eps, HankelCache(ms)))
        assert q.d == p.d and q.c == p.c
        assert params_from_moments(pair, ms).d == p.d


def test_weyl_nongeneric_detection():
    # X with coinciding P and Q root: a block-diagonal matrix decouples e_1
    X = RatMatrix.from_rows([[2, 0, 0], [0, 1, 1], [0, 1, 2]])
    with pytest.raises(NonGeneric):
        weyl_from_X(X)
    ms = MomentSeq(Fraction(1), 3, None, {0: Fraction(1), 1: Fraction(2)})
    with pytest.raises(RangeError):
        ms.h(5)


def test_flag_polynomials_row_property():
    rng = random.Random(9)
    for eps in ((2, 1, 0), (2, 2, 0, 0), (2, 2, 1, 0, 0)):
        pair = pair_from_eps(eps)
        p = random_params(rng, len(eps))
        plus, minus = flag_polynomials(pair, p)
        n = pair.n
        for i in range(1, n + 1):
            # first row of p_i^+(X) is the i-th coordinate vector
            row = [plus[i - 1][0, j] for j in range(n)]
            want = [Fraction(int(j == i - 1)) for j in range(n)]
            assert row == want
            col = [minus[i - 1][j, 0] for j in range(n)]
            assert col == want
