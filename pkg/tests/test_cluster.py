import json
import random
from fractions import Fraction

import pytest

from coxtoda.cluster import (
    ClusterSeed,
    EpsMove,
    eps_move,
    mutate,
    positivity_probe,
    seed_init,
    shift_T,
    transport,
    transport_path,
)
from coxtoda.coxeter import FactorParams, all_eps, build_X, pair_from_eps
from coxtoda.errors import ArgumentError, InvalidMove
from coxtoda.network import b_matrix
from coxtoda.weyl import ClusterCoords, HankelCache, moments_from_X, rho


def positive_params(rng, n):
    return FactorParams.reduced(
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n)],
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n - 1)],
    )


def cache_for(rng, eps):
    pair = pair_from_eps(eps)
    p = positive_params(rng, len(eps))
    X = build_X(pair, p)
    return p, HankelCache(moments_from_X(X))


def test_seed_init_matches_exchange_matrix():
    rng = random.Random(0)
    for eps in all_eps(4):
        p, cache = cache_for(rng, eps)
        seed = seed_init(eps, cache)
        _, bt = b_matrix(pair_from_eps(eps).comb)
        assert seed.Btilde == tuple(tuple(r) for r in bt)
        assert seed.eps == eps
        assert len(seed.x) == 8


def test_mutation_is_an_involution():
    rng = random.Random(1)
    for eps in all_eps(4):
        _, cache = cache_for(rng, eps)
        seed = seed_init(eps, cache)
        for k in range(1, 7):
            again = mutate(mutate(seed, k), k)
            assert again.x == seed.x
            assert again.Btilde == seed.Btilde


def test_mutation_preserves_skew_and_range():
    rng = random.Random(2)
    _, cache = cache_for(rng, (2, 1, 1, 0))
    seed = seed_init((2, 1, 1, 0), cache)
    s = seed
    for k in (1, 3, 2, 5, 4):
        s = mutate(s, k)  # skew-symmetry re-checked by the constructor
    with pytest.raises(ArgumentError):
        mutate(seed, 7)  # frozen directions 2n-1, 2n cannot mutate
    with pytest.raises(ArgumentError):
        mutate(seed, 0)


def test_eps_move_agrees_with_target_chart():
    rng = random.Random(3)
    _, cache = cache_for(rng, (2, 1, 1, 0))
    seed = seed_init((2, 1, 1, 0), cache)
    out = eps_move(seed, EpsMove(2, 1))  # (eps_2, eps_3): (1,1) -> (2,0)
    assert out.eps == (2, 2, 0, 0)
    want = seed_init((2, 2, 0, 0), cache)
    assert out.x == want.x
    assert out.Btilde == want.Btilde
    with pytest.raises(InvalidMove):
        eps_move(seed_init((2, 1, 0, 0), cache), EpsMove(2, 1))


def test_transport_round_trips_between_all_charts():
    rng = random.Random(4)
    n = 3
    _, cache = cache_for(rng, (2, 0, 0))
    seeds = {e: seed_init(e, cache) for e in all_eps(n)}
    for e1 in all_eps(n):
        for e2 in all_eps(n):
            out = transport(seeds[e1], e2)
            assert out.x == seeds[e2].x
            assert out.Btilde == seeds[e2].Btilde
            assert out.eps == e2


def test_transport_path_shape():
    assert transport_path((2, 0, 0), (2, 0, 0)) == []
    up = transport_path((2, 0, 0), (2, 2, 0))
    down = transport_path((2, 2, 0), (2, 0, 0))
    assert [(-m.i, m.s) for m in reversed(up)] == [(-m.i, 1 - m.s) for m in down]
    with pytest.raises(ArgumentError):
        transport_path((2, 0, 0), (2, 1, 0, 0))


def test_shift_pass_moves_the_hankel_window():
    rng = random.Random(5)
    n = 4
    eps0 = (2, 0, 0, 0)
    _, cache = cache_for(rng, eps0)
    seed = seed_init(eps0, cache)
    ms = cache.ms
    assert seed.x[0] == ms.H(0) and seed.x[1] == ms.H(1)
    fwd = shift_T(seed, "forward")
    assert fwd.x[0] == ms.H(2) and fwd.x[1] == ms.H(3)
    back = shift_T(fwd, "backward")
    assert back.x == seed.x and back.Btilde == seed.Btilde
    with pytest.raises(InvalidMove):
        shift_T(transport(seed, (2, 1, 0, 0)))
    with pytest.raises(ArgumentError):
        shift_T(seed, "sideways")


def test_seed_json_roundtrip():
    rng = random.Random(6)
    _, cache = cache_for(rng, (2, 2, 0))
    seed = seed_init((2, 2, 0), cache)
    again = ClusterSeed.from_json(json.loads(json.dumps(seed.to_json())))
    assert again.x == seed.x and again.Btilde == seed.Btilde and again.eps == seed.eps


def test_rho_recovers_params_after_transport():
    rng = random.Random(7)
    for eps in all_eps(4):
        for eps2 in ((2, 0, 0, 0), (2, 2, 2, 0)):
            pair = pair_from_eps(eps)
            p = positive_params(rng, 4)
            cache = HankelCache(moments_from_X(build_X(pair, p)))
            moved = transport(seed_init(eps, cache), eps2)
            q = rho(eps2, ClusterCoords(moved.x, moved.eps))
            X2 = build_X(pair_from_eps(eps2), q)
            # same moments: h_j agree on a full determining window
            ms2 = moments_from_X(X2)
            assert all(ms2.h(j) == cache.ms.h(j) for j in range(8))


def test_positivity_probe():
    rng = random.Random(8)
    n = 4
    eps0 = (2, 0, 0, 0)
    _, cache = cache_for(rng, eps0)
    paths = [[k] for k in range(1, 2 * n - 1)] + [[1, 3, 5]]
    assert positivity_probe(eps0, cache, paths)
