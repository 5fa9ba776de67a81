import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import linalg

from nblab.errors import ConditioningError
from nblab.extremal import (
    BCF_CONSTANT, asymptotic_table, compare_mollifier, determinant_table, min_norm_oracle,
    solve_problem2, node_sum, zero_nodes,
)
from nblab.ortho import kernel_eval, psi_matrix


@pytest.mark.parametrize("p", [2.0, 1.5, 1.25, 1.01])
@pytest.mark.parametrize("t", [0.0, 3.3, -17.0])
def test_n1_closed_form(p, t):
    sol = solve_problem2(p, 1, [t])
    assert sol.d2 == pytest.approx(p / 2, abs=1e-12)
    assert np.allclose(sol.psi_coeffs, [1.0])
    assert np.allclose(min_norm_oracle(p, 1, [t]), [1.0])


def test_m1_identity():
    sol = solve_problem2(2, 100, [0.0])
    assert sol.d2 == pytest.approx(1.0 / kernel_eval(2, 100, 0, 0).real, rel=1e-13)


def random_instance(rng):
    p = float(rng.choice([2.0, 1.25]))
    m = int(rng.integers(1, 5))
    n = int(rng.integers(m + 3, 201))
    nodes = rng.uniform(-30, 30, m)
    return p, n, nodes


def test_agrees_with_saddle_point_oracle():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p, n, nodes = random_instance(rng)
        sol = solve_problem2(p, n, nodes)
        ref = min_norm_oracle(p, n, nodes)
        assert np.linalg.norm(sol.psi_coeffs - ref) <= 1e-9 * np.linalg.norm(ref)
        assert sol.residuals.max() <= 1e-9


def test_invariants_random():
    rng = np.random.default_rng(12)
    for _ in range(30):
        p, n, nodes = random_instance(rng)
        sol = solve_problem2(p, n, nodes)
        b = sol.psi_coeffs
        assert sol.d2 > 0
        # norm identity: three paths
        H = psi_matrix(p, n, nodes)
        H = H @ H.conj().T
        via_h = 0.5 * p * np.real(np.ones(len(nodes)) @ linalg.solve(H, np.ones(len(nodes))))
        assert sol.d2 == pytest.approx(0.5 * p * np.vdot(b, b).real, abs=1e-10)
        assert sol.d2 == pytest.approx(via_h, abs=1e-10)
        # basis conversion
        t = rng.uniform(-40, 40, 5)
        assert np.allclose(sol(t), psi_matrix(p, n, t) @ b, atol=1e-10)


def test_optimality_against_null_space():
    rng = np.random.default_rng(13)
    p, n, nodes = 1.25, 60, np.array([0.0, 4.0, -9.5])
    sol = solve_problem2(p, n, nodes)
    A = psi_matrix(p, n, nodes)
    null = linalg.null_space(A)
    base = np.linalg.norm(sol.psi_coeffs)
    for _ in range(20):
        w = null @ (rng.normal(size=null.shape[1]) + 1j * rng.normal(size=null.shape[1]))
        w *= 1e-3 / np.linalg.norm(w)
        assert np.allclose(A @ w, 0, atol=1e-12)
        assert np.linalg.norm(sol.psi_coeffs + w) > base


@given(st.lists(st.floats(-25, 25), min_size=1, max_size=3, unique=True),
       st.integers(5, 150), st.integers(1, 150), st.sampled_from([2.0, 1.6, 1.25]))
@settings(max_examples=40)
def test_monotone_in_n(nodes, n1, extra, p):
    nodes = np.array(nodes)
    if np.min(np.abs(np.subtract.outer(nodes, nodes)) + np.eye(len(nodes)) * 99) < 0.5:
        return
    try:
        a = solve_problem2(p, n1, nodes).d2
    except ConditioningError:
        return
    b = solve_problem2(p, n1 + extra, nodes).d2
    assert b <= a * (1 + 1e-10)


@given(st.lists(st.floats(-25, 25), min_size=2, max_size=4, unique=True),
       st.integers(20, 200), st.sampled_from([2.0, 1.25]))
@settings(max_examples=40)
def test_monotone_in_m(nodes, n, p):
    nodes = np.array(nodes)
    if np.min(np.abs(np.subtract.outer(nodes, nodes)) + np.eye(len(nodes)) * 99) < 0.5:
        return
    try:
        full = solve_problem2(p, n, nodes).d2
    except ConditioningError:
        return
    fewer = solve_problem2(p, n, nodes[:-1]).d2
    assert fewer <= full * (1 + 1e-10)


def test_ill_conditioned_detected():
    with pytest.raises(ConditioningError, match="too small"):
        solve_problem2(2, 3, [0.0, 1e-3, 2e-3])
    with pytest.raises(ConditioningError):
        solve_problem2(2, 10, [1.0, 1.0])


def test_asymptotic_table_shape():
    tab = asymptotic_table(2, [0.0], [10**4, 10**3, 10**5])
    assert [r[0] for r in tab.rows] == [10**3, 10**4, 10**5]
    assert tab.target == 4.0
    ratios = [r[3] for r in tab.rows]
    assert ratios[0] < ratios[1] < ratios[2] < 1
    for n, d2, dl, r in tab.rows:
        assert dl == pytest.approx(d2 * math.log(n))
        assert r == pytest.approx(dl / 4.0)


def test_zero_nodes_target():
    z = zero_nodes(1, 2)
    assert np.allclose(z, [14.134725, 21.022040], atol=1e-6)
    assert node_sum(2, z) == pytest.approx(1 / (0.25 + z[0] ** 2) + 1 / (0.25 + z[1] ** 2))


def test_compare_contract():
    nodes = zero_nodes(1, 2)
    grid = np.linspace(0, 30, 13)
    res = compare_mollifier(40, nodes, grid)
    assert len(res.rows) == len(grid)
    assert all(np.isfinite(v) for row in res.rows for v in row)
    at_nodes = compare_mollifier(40, nodes, nodes)
    for t, mol, ext in at_nodes.rows:
        assert ext == pytest.approx(1.0, abs=1e-9)
        assert mol == pytest.approx(1.0, abs=1e-8)
    assert -1 <= res.correlation <= 1


def test_reference_constant_only_displayed():
    assert BCF_CONSTANT == pytest.approx(0.046191, abs=1e-6)


def test_determinant_table():
    tab = determinant_table(2, [0.0, 5.0], [10**3, 10**4])
    assert tab.target == pytest.approx(6.3125)
    assert len(tab.rows) == 2
