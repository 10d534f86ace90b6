import itertools
import random
from fractions import Fraction

import pytest

from coxtoda.coxeter import CoxeterPair, FactorParams, all_pairs, build_X
from coxtoda.errors import InvalidParams
from coxtoda.linalg import RatMatrix, det, inverse, minor
from coxtoda.network import (
    a_matrix,
    b_matrix,
    boundary_matrix,
    build_disk_network,
    dual_edge_multiplicities,
    face_poisson_check,
    face_weight_inner,
    face_weights,
    lindstrom_minor,
    omega_factor_check,
    omega_matrix,
)

RUNNING = CoxeterPair.from_sets(5, [1, 3, 4, 5], [1, 4, 5])


def random_params(rng, n):
    return FactorParams.make(
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n)],
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n - 1)],
        [Fraction(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n - 1)],
    )


def test_boundary_measurements_equal_factored_matrix():
    rng = random.Random(0)
    for pair in list(all_pairs(3)) + list(all_pairs(4)) + [RUNNING]:
        p = random_params(rng, pair.n)
        N = build_disk_network(pair, p)
        assert boundary_matrix(N) == build_X(pair, p)


def test_disjoint_path_minors():
    rng = random.Random(1)
    for pair in all_pairs(4):
        p = random_params(rng, 4)
        N = build_disk_network(pair, p)
        X = build_X(pair, p)
        for size in (1, 2, 3):
            for rows in itertools.combinations(range(1, 5), size):
                for cols in itertools.combinations(range(1, 5), size):
                    assert lindstrom_minor(N, rows, cols) == minor(X, rows, cols)


def test_network_json_schema():
    rng = random.Random(2)
    p = random_params(rng, 3)
    pair = CoxeterPair.from_sets(3, [1, 3], [1, 2, 3])
    obj = build_disk_network(pair, p).to_json()
    assert obj["n"] == 3
    assert {"id", "level", "column", "color"} <= set(obj["vertices"][0])
    assert {"from", "to", "weight"} <= set(obj["edges"][0])


def test_face_weights_closed_form():
    rng = random.Random(3)
    p = random_params(rng, 4)
    H0 = Fraction(3, 2)
    y = face_weights(RUNNING_4 := CoxeterPair.from_sets(4, [1, 4], [1, 4]), p, H0)
    c, d = p.c, p.d
    assert y[0] == 1 / H0
    assert y[1] == H0 / d[0]
    for i in range(1, 4):
        assert y[2 * i] == 1 / c[i - 1]
        assert y[2 * i + 1] == c[i - 1] * d[i - 1] / d[i]
    assert face_weight_inner(p) == d[3]
    with pytest.raises(InvalidParams):
        face_weights(RUNNING_4, p, 0)


def test_face_weight_product_is_one():
    # telescoping: y_00 y_10 = 1/d_1, y_0i y_1i = d_{i-1}/d_i, inner face = d_n
    rng = random.Random(4)
    for n in (3, 4, 5):
        pair = CoxeterPair.from_sets(n, [1, n], list(range(1, n + 1)))
        p = random_params(rng, n)
        ys = face_weights(pair, p, Fraction(5, 7)) + [face_weight_inner(p)]
        prod = Fraction(1)
        for v in ys:
            prod *= v
        assert prod == 1


def test_omega_integrality_and_factorization():
    for n in (2, 3, 4, 5, 6, 7):
        for pair in all_pairs(n):
            comb = pair.comb
            om = omega_matrix(comb)
            O = RatMatrix.from_rows(om)
            assert det(O) == 1
            assert omega_factor_check(comb)
            bfull, btilde = b_matrix(comb)
            B = RatMatrix.from_rows(bfull)
            # B is skew-symmetric with integer entries
            assert all(bfull[i][j] == -bfull[j][i]
                       for i in range(2 * n) for j in range(2 * n))
            A = RatMatrix.from_rows(a_matrix(comb))
            assert A.transpose() * inverse(O) * A == B
            assert btilde == bfull[: 2 * n - 2]


def test_face_poisson_and_dual_graph():
    for n in (3, 4, 5):
        for pair in all_pairs(n):
            comb = pair.comb
            assert face_poisson_check(comb)
            dual = dual_edge_multiplicities(comb)
            # every face pair appears in a single direction
            assert all((g, f) not in dual for (f, g) in dual)
            assert all(cnt > 0 for cnt in dual.values())
