import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from nblab.arith import character, characters_mod
from nblab.bd import (
    bd_distance, build_gram, determinant_quotient, distance_from_gram, freq_objective,
    gram_entry, optimal_coefficients, plancherel_check, time_objective, unit_moment,
)
from nblab.errors import ConditioningError, InvalidParameterError
from nblab.kappa import kappa_build, kappa_eval
from nblab.lfun import DirichletPoly, mollifier_vn

GAMMA = 0.57721566490153286
G11_UNIT = math.log(2 * math.pi) - GAMMA - 1
G11_HALF = math.log(2 * math.pi) - GAMMA
V1 = 1 - GAMMA


def quad_oracle(K, j, k, eps, support):
    """int_eps^U lambda_j conj(lambda_k) dx with y = 1/x, one quad per smooth piece."""
    Y = 1.0 / eps
    y0 = 0.0 if support == "half_line" else 1.0
    cuts = set(np.arange(j, Y, j)) | set(np.arange(k, Y, k)) | {y0, Y}
    pts = sorted(c for c in cuts if y0 <= c <= Y)

    def f(y, part):
        z = kappa_eval(K, y / j) * np.conj(kappa_eval(K, y / k)) / (y * y)
        return z.real if part == 0 else z.imag

    total = 0j
    for a, b in zip(pts[:-1], pts[1:]):
        # evaluate strictly inside each piece so floor() sees a constant value
        a_in, b_in = a + 1e-12 * max(1.0, a), b - 1e-12 * max(1.0, b)
        re = integrate.quad(f, a_in, b_in, args=(0,), epsabs=1e-14, epsrel=1e-13)[0]
        im = integrate.quad(f, a_in, b_in, args=(1,), epsabs=1e-14, epsrel=1e-13)[0]
        total += re + 1j * im
    return total


ORACLE_CASES = [(q, chi.index, p) for q in (1, 3, 4) for chi in characters_mod(q) for p in (2.0, 1.25)]


@pytest.mark.parametrize("q,idx,p", ORACLE_CASES)
@pytest.mark.parametrize("support", ["unit", "half_line"])
def test_gram_entries_match_quadrature(q, idx, p, support):
    K = kappa_build(character(q, idx), p)
    for j in range(1, 7):
        for k in range(j, 7, 2):
            eps = 0.02 / max(j, k)
            val, _ = gram_entry(K, j, k, eps, support=support, tail_correction=False)
            ref = quad_oracle(K, j, k, eps, support)
            assert abs(val - ref) <= 1e-8, (j, k)


def test_g11_closed_forms():
    K = kappa_build(character(1), 2)
    val, bound = gram_entry(K, 1, 1, 1e-4)
    assert abs(val - G11_UNIT) <= max(bound, 1e-9)
    val, bound = gram_entry(K, 1, 1, 1e-4, support="half_line")
    assert abs(val - G11_HALF) <= max(bound, 1e-9)


def test_g11_quadrature_oracle():
    # int_0^1 {1/x}^2 dx by adaptive quadrature, y = 1/x, one piece per unit interval
    pieces = [integrate.quad(lambda y, m=m: (y - m) ** 2 / y**2, m, m + 1, epsabs=1e-15)[0]
              for m in range(1, 200_000)]
    tail = 1.0 / 3.0 / 200_000  # mean of {y}^2 is 1/3
    assert math.fsum(pieces) + tail == pytest.approx(G11_UNIT, abs=1e-9)


def test_step_function_character_entry():
    K = kappa_build(character(4, 1), 2)
    val, _ = gram_entry(K, 1, 1, 1e-3, tail_correction=False)
    assert abs(val - quad_oracle(K, 1, 1, 1e-3, "unit")) <= 1e-8


@pytest.mark.parametrize("q,idx,p", [(1, 0, 2.0), (5, 1, 2.0), (5, 1, 1.5), (4, 0, 1.25)])
def test_hermitian_symmetry(q, idx, p):
    K = kappa_build(character(q, idx), p)
    for j, k in [(1, 2), (2, 5), (3, 4)]:
        a, _ = gram_entry(K, j, k, 1e-3)
        b, _ = gram_entry(K, k, j, 1e-3)
        assert abs(a - np.conj(b)) < 1e-13


@pytest.mark.parametrize("support", ["unit", "half_line"])
def test_tail_correction_is_within_bound(support):
    K = kappa_build(character(1), 2)
    fine, fine_bound = gram_entry(K, 2, 3, 1e-6, support=support)
    for eps in (1e-3, 1e-4):
        val, bound = gram_entry(K, 2, 3, eps, support=support)
        assert abs(val - fine) <= bound + fine_bound


def test_unit_moment():
    K = kappa_build(character(1), 2)
    val, bound = unit_moment(K, 1, 1e-4)
    assert abs(val - V1) <= max(bound, 1e-12)
    g = build_gram(K, 1)
    assert g.v[0] == pytest.approx(V1, abs=1e-9)


def test_build_examples():
    K = kappa_build(character(1), 2)
    g8 = build_gram(K, 8)
    assert g8.tail_bound < 1e-4
    g2 = build_gram(K, 2)
    g1 = build_gram(K, 1)
    assert np.array_equal(g2.G[:1, :1], g1.G)
    assert np.array_equal(g8.G[:2, :2], g2.G)
    assert np.array_equal(g8.leading(2).v, g2.v)


@pytest.mark.parametrize("q,idx,p", [(1, 0, 2.0), (5, 1, 2.0), (7, 2, 1.25), (4, 1, 1.5)])
@pytest.mark.parametrize("support", ["unit", "half_line"])
def test_gram_is_positive_semidefinite(q, idx, p, support):
    g = build_gram(kappa_build(character(q, idx), p), 12, eps=1e-3, support=support)
    assert np.allclose(g.G, g.G.conj().T, atol=0)
    ev = np.linalg.eigvalsh(g.G)
    assert ev.min() >= -1e-10 * np.abs(ev).max()


def test_tail_bound_decreases_with_eps():
    K = kappa_build(character(3, 1), 1.25)
    bounds = [build_gram(K, 4, eps=e).tail_bound for e in (1e-2, 1e-3, 1e-4)]
    assert bounds[0] > bounds[1] > bounds[2] >= 0


def test_bd_distance_examples():
    K = kappa_build(character(1), 2)
    res = bd_distance(K, 1)
    assert res.d2 == pytest.approx(0.3142577, abs=1e-6)
    assert res.d2 == pytest.approx(1 - V1**2 / G11_UNIT, abs=1e-8)
    half = bd_distance(K, 1, support="half_line")
    assert half.d2 == pytest.approx(1 - V1**2 / G11_HALF, abs=1e-8)
    assert bd_distance(K, 5).d2 <= res.d2 <= 1


def test_monotone_in_n():
    K = kappa_build(character(1), 2)
    g = build_gram(K, 40)
    d = [distance_from_gram(g.leading(m)).d2 for m in range(1, 41)]
    assert all(b <= a for a, b in zip(d, d[1:]))


@pytest.mark.parametrize("q,idx,p", [(1, 0, 2.0), (5, 1, 2.0), (5, 2, 1.5), (12, 3, 1.25)])
def test_determinant_quotient_matches(q, idx, p):
    g = build_gram(kappa_build(character(q, idx), p), 10, eps=1e-3)
    for m in range(1, 11):
        sub = g.leading(m)
        assert determinant_quotient(sub) == pytest.approx(distance_from_gram(sub).d2, abs=1e-8)


@pytest.mark.parametrize("q,idx,p", [(1, 0, 2.0), (5, 1, 2.0), (4, 1, 1.25)])
def test_optimal_coefficients_minimise(q, idx, p):
    g = build_gram(kappa_build(character(q, idx), p), 6, eps=1e-3)
    b = optimal_coefficients(g)
    best = time_objective(g, b)
    assert best == pytest.approx(distance_from_gram(g).d2, abs=1e-10)
    rng = np.random.default_rng(q)
    for _ in range(20):
        w = 1e-3 * (rng.normal(size=6) + 1j * rng.normal(size=6))
        assert time_objective(g, b + w) > best


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=5))
@settings(max_examples=30)
def test_time_objective_zero_and_quadratic(b):
    g = build_gram(kappa_build(character(1), 2), 5, eps=1e-3)
    assert time_objective(g, np.zeros(len(b))) == pytest.approx(1.0)
    b = np.asarray(b)
    j0 = time_objective(g, b)
    # J(2b) - 2 J(b) + 1 = 2 b^H G b >= 0
    assert time_objective(g, 2 * b) - 2 * j0 + 1 >= -1e-12


def test_conditioning_and_cap():
    K = kappa_build(character(1), 2)
    with pytest.raises(ConditioningError):
        bd_distance(K, 8, cond_threshold=10.0)
    with pytest.raises(InvalidParameterError):
        build_gram(K, 65)
    with pytest.raises(InvalidParameterError):
        gram_entry(K, 1, 2, 0.9)
    with pytest.raises(InvalidParameterError):
        build_gram(K, 2, support="whole")


def test_threads_give_identical_results(monkeypatch):
    K = kappa_build(character(5, 1), 2)
    serial = build_gram(K, 6, eps=1e-3, workers=1)
    parallel = build_gram(K, 6, eps=1e-3, workers=4)
    assert np.array_equal(serial.G, parallel.G)


@pytest.mark.parametrize("p", [2.0, 1.6, 1.25])
def test_freq_objective_zero_polynomial(p):
    T = 200.0
    value, tail = freq_objective(character(1), p, DirichletPoly(np.zeros(1)), T)
    # (1/2pi) int_{|t|<=T} dt/(1/p^2+t^2) = (p/pi) atan(pT), which is p/2 as T -> inf
    assert value == pytest.approx(p / math.pi * math.atan(p * T), abs=1e-10)
    # doubling T captures about half of a 1/T tail
    assert value == pytest.approx(p / 2, abs=3 * tail)


def test_freq_objective_mollifier_improves():
    chi = character(1)
    v20, _ = freq_objective(chi, 2, mollifier_vn(20), 200)
    v50, _ = freq_objective(chi, 2, mollifier_vn(50), 200)
    assert math.isfinite(v20) and v50 < v20


def test_plancherel_zero_vector():
    r = plancherel_check(character(1), 2, [0.0], 500)
    assert r.time_value == 1.0
    assert r.freq_value == pytest.approx(2 / math.pi * math.atan(2 * 500), abs=1e-10)


@pytest.mark.parametrize("q,idx,p", [(1, 0, 2.0), (4, 1, 1.25)])
def test_plancherel_converges_in_T(q, idx, p):
    """The discrepancy is the truncated tail: it shrinks like log(T)/T."""
    b = np.array([0.5, -0.3, 0.2])
    rs = [plancherel_check(character(q, idx), p, b, T) for T in (100, 200, 400)]
    d = [r.discrepancy for r in rs]
    assert d[0] > d[1] > d[2]
    assert 1.5 < d[0] / d[1] < 2.5 and 1.5 < d[1] / d[2] < 2.5


def test_plancherel_scaling_same_on_both_sides():
    chi = character(1)
    r1 = plancherel_check(chi, 2, [0.25], 300)
    r2 = plancherel_check(chi, 2, [0.5], 300)
    # the identity is quadratic in b: both sides move together, up to the truncation tail
    assert abs((r2.time_value - r1.time_value) - (r2.freq_value - r1.freq_value)) <= r1.discrepancy + r2.discrepancy


@pytest.mark.xfail(strict=True, reason="truncating |t| <= 500 omits a tail of ~1/(pi T) times the mean of "
                   "|1 - eta A|^2; measured discrepancy is 2.3e-3 (see notes)")
def test_plancherel_example_half():
    r = plancherel_check(character(1), 2, [0.5], 500)
    assert r.discrepancy <= 1e-3
