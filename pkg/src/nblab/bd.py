"""Báez-Duarte distances for Dirichlet L-functions.

Time domain: the Gram matrix of the dilates ``lambda_k(x) = kappa(1/(k x))``
is integrated exactly, segment by segment, on ``(eps_k, U]`` where
``U = inf`` (``support="half_line"``) or ``U = 1`` (``support="unit"``).
For ``p = 2`` kappa is periodic and the omitted piece ``(0, eps]`` is
replaced by its mean-value asymptotic ``mu * eps`` (error ``O(eps^2)``).

Frequency domain: weighted integrals over a vertical line, computed by
adaptive Gauss-Kronrod panels, plus the Mellin-Plancherel cross-check.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import linalg

from ._numerics import adaptive_panels, csum, power_integral
from .errors import ConditioningError, InvalidParameterError
from .kappa import kappa_build, kappa_sup
from .lfun import DirichletPoly, l_eval

SUPPORTS = ("half_line", "unit")
DEFAULT_EPS = 1e-4
DEFAULT_MAX_N = 64
DEFAULT_COND_THRESHOLD = 1e12


def _upper(support):
    if support not in SUPPORTS:
        raise InvalidParameterError(f"support must be one of {SUPPORTS}, got {support!r}")
    return math.inf if support == "half_line" else 1.0


def _denominators(k, eps):
    """Integers ``N = k m`` with ``1/N > eps`` (segment upper ends)."""
    top = int(math.ceil(1.0 / (k * eps)))
    m = np.arange(1, top + 1, dtype=np.int64)
    N = k * m
    return N[N * eps < 1.0]


def _sup_kappa(K, y_max):
    if K.periodic:
        return kappa_sup(K, float(K.chi.modulus))
    return kappa_sup(K, max(y_max, 2.0 * K.chi.modulus))


def _pair_mean(K, j, k):
    """Mean of ``kappa(y/j) conj(kappa(y/k))`` over one period (``p = 2``)."""
    q = K.chi.modulus
    P = j * k // math.gcd(j, k) * q
    pts = np.union1d(np.arange(0, P + 1, j), np.arange(0, P + 1, k))
    a, b = pts[:-1], pts[1:]
    h = (b - a).astype(float)
    mj, mk = a // j, a // k
    K.prefix.extend(int(max(mj.max(), mk.max())) + 1)
    # local linear form kappa(y/j) = a_j + s_j (y - a) on [a, b)
    aj = K.beta * a / j - K.prefix[mj]
    ak = K.beta * a / k - K.prefix[mk]
    sj, sk = K.beta / j, K.beta / k
    integ = aj * np.conj(ak) * h + (aj * sk + sj * np.conj(ak)) * h**2 / 2 + sj * sk * h**3 / 3
    return csum(integ) / P, P


def _single_mean(K, k):
    q = K.chi.modulus
    P = k * q
    a = np.arange(0, P, k)
    m = a // k
    K.prefix.extend(int(m.max()) + 1)
    ak = K.beta * a / k - K.prefix[m]
    integ = ak * k + K.beta / k * k**2 / 2
    return csum(integ) / P, P


def gram_entry(K, j, k, eps, *, support="unit", tail_correction=True):
    """``integral lambda_j conj(lambda_k)`` over ``(eps, U]``.

    Returns ``(value, bound)`` where ``bound`` covers the omitted ``(0, eps]``:
    ``sup|kappa|^2 eps`` without correction, ``2 P sup|kappa|^2 eps^2`` with
    the periodic mean-value correction (``P`` the joint period).
    """
    for name, val in (("j", j), ("k", k)):
        if int(val) != val or val < 1:
            raise InvalidParameterError(f"{name} must be a positive integer, got {val!r}")
    j, k = int(j), int(k)
    if not 0.0 < eps < 1.0 / max(j, k):
        raise InvalidParameterError(f"eps must lie in (0, 1/max(j,k)), got {eps}")
    upper = _upper(support)
    D = np.union1d(_denominators(j, eps), _denominators(k, eps))
    hi = 1.0 / D.astype(float)
    lo = np.empty_like(hi)
    lo[:-1] = hi[1:]
    lo[-1] = eps
    mj, mk = D // j, D // k
    Sj = K.prefix[mj]
    Sk = K.prefix[mk]
    alpha, beta = K.alpha, K.beta
    cj, ck = beta * j ** (-alpha), beta * k ** (-alpha)
    parts = [Sj * np.conj(Sk) * (hi - lo)]
    if beta != 0.0:
        i2 = power_integral(lo, hi, 2 * alpha)
        i1 = power_integral(lo, hi, alpha)
        parts.append(cj * ck * i2)
        parts.append(-(cj * np.conj(Sk) + ck * Sj) * i1)
        d0 = float(min(j, k))
        if upper == math.inf:
            parts.append(np.array([cj * ck * d0 ** (2 * alpha - 1) / (2 * alpha - 1)]))
        elif d0 > 1:
            parts.append(np.array([cj * ck * power_integral(1.0 / d0, 1.0, 2 * alpha)]))
    value = csum(np.concatenate([np.atleast_1d(x).astype(complex) for x in parts]))
    sup = _sup_kappa(K, 1.0 / eps)
    if tail_correction and K.periodic:
        mean, P = _pair_mean(K, j, k)
        value += mean * eps
        bound = 2.0 * P * sup**2 * eps**2
    else:
        bound = sup**2 * eps
    return value, bound


def unit_moment(K, k, eps, *, tail_correction=True):
    """``integral_0^1 lambda_k`` over ``(eps, 1]`` and its omission bound."""
    D = _denominators(k, eps)
    hi = 1.0 / D.astype(float)
    lo = np.empty_like(hi)
    lo[:-1] = hi[1:]
    lo[-1] = eps
    S = K.prefix[D // k]
    ck = K.beta * k ** (-K.alpha)
    parts = [-S * (hi - lo)]
    if K.beta != 0.0:
        parts.append(ck * power_integral(lo, hi, K.alpha))
        if k > 1:
            parts.append(np.array([ck * power_integral(1.0 / k, 1.0, K.alpha)]))
    value = csum(np.concatenate([np.atleast_1d(x).astype(complex) for x in parts]))
    sup = _sup_kappa(K, 1.0 / eps)
    if tail_correction and K.periodic:
        mean, P = _single_mean(K, k)
        value += mean * eps
        bound = 2.0 * P * sup * eps**2
    else:
        bound = sup * eps
    return value, bound


@dataclass(frozen=True, eq=False)
class GramSystem:
    """``G[j,k] = int lambda_j conj(lambda_k)``, ``v[k] = int_0^1 conj(lambda_k)``."""

    n: int
    G: np.ndarray
    v: np.ndarray
    tail_bound: float
    eps: np.ndarray = field(repr=False)
    support: str = "unit"
    tail_correction: bool = True

    def leading(self, m):
        """The nested system for the first ``m`` frequencies."""
        return GramSystem(m, self.G[:m, :m].copy(), self.v[:m].copy(), self.tail_bound,
                          self.eps[:m].copy(), self.support, self.tail_correction)


def _workers():
    try:
        return max(1, int(os.environ.get("NB_LAB_THREADS", "1")))
    except ValueError:
        return 1


def build_gram(K, n, *, eps=DEFAULT_EPS, support="unit", tail_correction=True,
               max_n=DEFAULT_MAX_N, workers=None):
    """Assemble the Gram system for frequencies ``1..n``.

    Frequency ``k`` is cut at ``eps_k = eps / k`` so every dilate carries
    the same number of segments; entry ``(j, k)`` uses ``max(eps_j, eps_k)``,
    which makes ``G`` the exact Gram matrix of the truncated dilates.
    """
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if n > max_n:
        raise InvalidParameterError(
            f"n={n} exceeds the cap {max_n}: these Gram matrices are severely ill-conditioned")
    if not 0.0 < eps < 1.0:
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps}")
    _upper(support)
    eps_k = eps / np.arange(1, n + 1)
    K.prefix.extend(int(math.ceil(1.0 / eps)) + 2)
    pairs = [(j, k) for j in range(1, n + 1) for k in range(j, n + 1)]

    def entry(jk):
        j, k = jk
        return gram_entry(K, j, k, float(max(eps_k[j - 1], eps_k[k - 1])),
                          support=support, tail_correction=tail_correction)

    workers = workers or _workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(entry, pairs))
    else:
        results = [entry(jk) for jk in pairs]
    G = np.zeros((n, n), dtype=complex)
    bounds = []
    for (j, k), (val, bnd) in zip(pairs, results):
        G[j - 1, k - 1] = val
        G[k - 1, j - 1] = np.conj(val)
        bounds.append(bnd if j == k else 2 * bnd)
    v = np.empty(n, dtype=complex)
    for k in range(1, n + 1):
        val, bnd = unit_moment(K, k, float(eps_k[k - 1]), tail_correction=tail_correction)
        v[k - 1] = np.conj(val)
        bounds.append(2 * bnd)
    if np.all(G.imag == 0):
        G = G.real.astype(complex)
    return GramSystem(n, G, v, float(math.fsum(bounds)), eps_k, support, tail_correction)


class BDResult(NamedTuple):
    d2: float
    cond_estimate: float
    tail_bound: float


def _solve_distance(gram, cond_threshold):
    G = gram.G
    cond = float(np.linalg.cond(G))
    if not np.isfinite(cond) or cond > cond_threshold:
        raise ConditioningError(
            f"Gram matrix for n={gram.n} is too ill-conditioned; use a smaller n", cond)
    w = np.conj(gram.v)  # int_0^1 lambda_k
    try:
        c = linalg.cho_factor(G, lower=True)
    except linalg.LinAlgError as exc:
        raise ConditioningError(f"Gram matrix for n={gram.n} is not positive definite", cond) from exc
    proj = float(np.real(np.vdot(w, linalg.cho_solve(c, w))))
    return min(1.0, max(0.0, 1.0 - proj)), cond


def distance_from_gram(gram, *, cond_threshold=DEFAULT_COND_THRESHOLD):
    """``d^2 = 1 - w^H G^{-1} w`` with ``w = conj(v)`` (Hermitian solve)."""
    d2, cond = _solve_distance(gram, cond_threshold)
    return BDResult(d2, cond, gram.tail_bound)


def bd_distance(K, n, *, eps=DEFAULT_EPS, support="unit", tail_correction=True,
                cond_threshold=DEFAULT_COND_THRESHOLD, max_n=DEFAULT_MAX_N):
    """``d_n^2(L, p)``: squared distance from the indicator of (0,1) to the dilates.

    ``support="half_line"`` integrates over ``(0, inf)`` as in the
    Báez-Duarte criterion; ``support="unit"`` restricts to ``L^2(0, 1)``.
    """
    gram = build_gram(K, n, eps=eps, support=support, tail_correction=tail_correction,
                      max_n=max_n)
    return distance_from_gram(gram, cond_threshold=cond_threshold)


def determinant_quotient(gram):
    """Validation path: ``det Gram(lambda_1..lambda_n, 1) / det Gram(lambda_1..lambda_n)``."""
    n = gram.n
    B = np.empty((n + 1, n + 1), dtype=complex)
    B[:n, :n] = gram.G
    B[:n, n] = np.conj(gram.v)  # <lambda_j, 1>
    B[n, :n] = gram.v  # <1, lambda_k>
    B[n, n] = 1.0
    s1, l1 = np.linalg.slogdet(B)
    s0, l0 = np.linalg.slogdet(gram.G)
    return float(np.real(s1 / s0) * math.exp(l1 - l0))


def optimal_coefficients(gram):
    """Minimiser ``b`` of ``int |1_(0,1) - sum b_k lambda_k|^2``."""
    w = np.conj(gram.v)
    return np.conj(linalg.solve(gram.G, w, assume_a="her"))


def time_objective(gram, b):
    """``int |1_(0,1) - sum b_k lambda_k|^2`` from the Gram system."""
    b = np.asarray(b, dtype=complex)
    n = b.size
    G, v = gram.G[:n, :n], gram.v[:n]
    val = 1.0 - 2.0 * np.real(np.vdot(b, v)) + np.real(np.vdot(b, np.conj(G) @ b))
    return float(val)


# ----------------------------------------------------------------------------
# frequency side


class _LineCache:
    """Memoised ``L(sigma + i t, chi)`` keyed by the node value ``t``."""

    def __init__(self, chi, sigma):
        self.chi = chi
        self.sigma = sigma
        self.store = {}

    def __call__(self, t):
        flat = np.asarray(t, dtype=float).ravel()
        missing = np.array([x for x in np.unique(flat) if x not in self.store])
        if missing.size:
            vals = l_eval(self.chi, self.sigma + 1j * missing)
            self.store.update(zip(missing.tolist(), np.atleast_1d(vals).tolist()))
        return np.array([self.store[x] for x in flat.tolist()]).reshape(np.shape(t))


_CACHES = {}


def _line_cache(chi, sigma):
    key = (chi.modulus, chi.index, chi.exponents, float(sigma))
    cache = _CACHES.get(key)
    if cache is None:
        if len(_CACHES) > 16:
            _CACHES.clear()
        cache = _CACHES[key] = _LineCache(chi, sigma)
    return cache


def _weighted_line_integral(chi, l_sigma, poly, poly_sigma, weight_c2, T, tol):
    """``(1/2pi) int_{-T}^{T} |1 - L(l_sigma+it) A(poly_sigma+it)|^2 / (c^2 + t^2) dt``."""
    cache = _line_cache(chi, l_sigma)

    def integrand(t):
        Lv = cache(t)
        Av = poly(poly_sigma + 1j * t) if poly is not None else 0.0
        return np.abs(1.0 - Lv * Av) ** 2 / (weight_c2 + t * t)

    initial = max(16, int(math.ceil(2 * T / 0.5)))
    val, err, _ = adaptive_panels(integrand, -T, T, tol=tol, initial=initial)
    return val / (2 * math.pi), err / (2 * math.pi)


def freq_objective(chi, p, A, T, *, tol=1e-8):
    """Frequency-domain objective on the line ``Re s = 1/p``.

    Returns ``(value, tail_report)``: the truncated integral over
    ``|t| <= T`` and the change observed when ``T`` is doubled.
    """
    from .arith import _check_p

    p = _check_p(p)
    if not T > 0:
        raise InvalidParameterError(f"T must be positive, got {T}")
    poly = None if A is None or not np.any(A.coeffs) else A
    sigma = 1.0 / p
    value, _ = _weighted_line_integral(chi, sigma, poly, sigma, sigma**2, T, tol)
    doubled, _ = _weighted_line_integral(chi, sigma, poly, sigma, sigma**2, 2 * T, tol)
    return value, abs(doubled - value)


class PlancherelResult(NamedTuple):
    time_value: float
    freq_value: float
    discrepancy: float


def plancherel_check(chi, p, b, T, *, eps=1e-5, tol=1e-8):
    """Compare both sides of the Mellin-Plancherel identity for coefficients ``b``.

    Time side: ``int_0^inf |1_(0,1) - sum b_k lambda_k|^2`` from the exact
    half-line Gram system.  Frequency side on ``Re s = 1/2`` with
    ``eta(s) = L(s + 1/p - 1/2, chi)``: the Mellin transform of
    ``-sum b_k lambda_k`` is ``eta(s) sum b_k k^-s / s``, so the matching
    polynomial is ``A_b = -sum b_k k^-s``.
    """
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    K = kappa_build(chi, p)
    gram = build_gram(K, b.size, eps=eps, support="half_line")
    time_value = time_objective(gram, b)
    poly = DirichletPoly(-b) if np.any(b) else None
    freq_value, _ = _weighted_line_integral(chi, 1.0 / K.p, poly, 0.5, 0.25, T, tol)
    return PlancherelResult(time_value, freq_value, abs(time_value - freq_value))
