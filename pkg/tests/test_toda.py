import random
from fractions import Fraction

import numpy as np
import pytest

from coxtoda.coxeter import FactorParams, all_pairs, build_X, pair_from_eps
from coxtoda.errors import ArgumentError, InvalidMove
from coxtoda.toda import (
    BracketTable,
    FlowState,
    build_X_float,
    conservation_report,
    f1_closed_form,
    hamiltonian_Fk,
    jacobi_matrix,
    moment_flow,
    reductions,
    rk4_flow,
    vector_field,
)

TRIDIAG = pair_from_eps((2, 0, 0, 0))


def tame_params(rng, n):
    # spectra of order one keep the absolute drift tolerances meaningful
    return FactorParams.reduced(
        [Fraction(rng.randint(2, 6), 4) for _ in range(n)],
        [Fraction(rng.randint(1, 4), 8) for _ in range(n - 1)],
    )


def test_f1_closed_form_is_trace():
    rng = random.Random(0)
    for pair in all_pairs(4):
        p = tame_params(rng, 4)
        assert f1_closed_form(pair, p.c, p.d) == hamiltonian_Fk(pair, p, 1)
    with pytest.raises(ArgumentError):
        hamiltonian_Fk(TRIDIAG, tame_params(rng, 4), 0)


def test_build_X_float_matches_exact():
    rng = random.Random(1)
    for pair in all_pairs(4):
        p = tame_params(rng, 4)
        Xf = build_X_float(pair, [float(v) for v in p.c], [float(v) for v in p.d])
        X = build_X(pair, p)
        want = np.array([[float(X[i, j]) for j in range(4)] for i in range(4)])
        assert np.allclose(Xf, want, atol=1e-14)


def test_bracket_table_antisymmetry():
    for eps in ((2, 0, 0), (2, 1, 0), (2, 2, 1, 0)):
        w = BracketTable(eps).omega
        m = len(w)
        assert all(w[a][b] == -w[b][a] for a in range(m) for b in range(m))
        n = len(eps)
        # {c_i, c_{i+1}} carries eps_{i+1} - 1
        assert all(w[i - 1][i] == eps[i] - 1 for i in range(1, n - 1))


def test_vector_field_preserves_invariants_short_flow():
    rng = random.Random(2)
    for eps in ((2, 0, 0, 0), (2, 1, 1, 0)):
        pair = pair_from_eps(eps)
        p = tame_params(rng, 4)
        traj = rk4_flow(pair, FlowState.from_params(p, eps), 1, 0.5, 1e-3)
        rep = conservation_report(pair, traj)
        assert max(rep[f"F{j}"] for j in range(1, 4)) < 1e-8
        assert rep["detX"] < 1e-10


def test_moment_solver_matches_rk4():
    rng = random.Random(3)
    p = tame_params(rng, 4)
    traj = rk4_flow(TRIDIAG, FlowState.from_params(p, TRIDIAG.comb.eps), 1, 0.4, 1e-3)
    for st in traj[:: len(traj) // 8]:
        ref = moment_flow(TRIDIAG, p, 1, st.t)
        err = max(
            max(abs(a - b) for a, b in zip(st.c, ref.c)),
            max(abs(a - b) for a, b in zip(st.d, ref.d)),
        )
        assert err < 1e-6


def test_moment_flow_at_zero_is_identity():
    rng = random.Random(4)
    p = tame_params(rng, 4)
    st = moment_flow(TRIDIAG, p, 2, 0.0)
    assert np.allclose(st.c, [float(v) for v in p.c], atol=1e-10)
    assert np.allclose(st.d, [float(v) for v in p.d], atol=1e-10)


def test_higher_flow_commutes_with_invariants():
    rng = random.Random(5)
    p = tame_params(rng, 3)
    pair = pair_from_eps((2, 0, 0))
    traj = rk4_flow(pair, FlowState.from_params(p, pair.comb.eps), 2, 0.3, 1e-3)
    rep = conservation_report(pair, traj)
    assert max(rep.values()) < 1e-8


def test_reductions_and_jacobi():
    rng = random.Random(6)
    p = tame_params(rng, 4)
    st = FlowState.from_params(p, (2, 0, 0, 0))
    red = reductions(st)
    a, b = red["toda_a"], red["toda_b"]
    assert len(a) == 3 and len(b) == 4
    # the Jacobi matrix is isospectral to X on the tridiagonal chart
    L = jacobi_matrix(a, b)
    X = build_X_float(TRIDIAG, st.c, st.d)
    assert np.allclose(np.sort(np.linalg.eigvals(L)), np.sort(np.linalg.eigvals(X)),
                       atol=1e-10)
    rel = reductions(FlowState.from_params(p, (2, 1, 1, 0)))
    assert rel["relativistic"] == tuple(st.c[i] * st.d[i] for i in range(3))
    with pytest.raises(InvalidMove):
        reductions(FlowState.from_params(p, (2, 2, 0, 0)))


def test_vector_field_is_hamiltonian_consistent():
    # dF_m/dt = 0 along the k-flow: directional derivative of F_m vanishes
    rng = random.Random(7)
    p = tame_params(rng, 4)
    eps = (2, 1, 0, 0)
    pair = pair_from_eps(eps)
    st = FlowState.from_params(p, eps)
    cdot, ddot = vector_field(pair, st, 1)
    eta = 1e-6
    for m in (1, 2, 3):
        plus = FlowState(0.0, tuple(np.array(st.c) + eta * cdot),
                         tuple(np.array(st.d) + eta * ddot), eps)
        minus = FlowState(0.0, tuple(np.array(st.c) - eta * cdot),
                          tuple(np.array(st.d) - eta * ddot), eps)
        dF = (hamiltonian_Fk(pair, plus, m) - hamiltonian_Fk(pair, minus, m)) / (2 * eta)
        assert abs(dF) < 1e-6
