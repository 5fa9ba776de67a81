"""Hurwitz zeta, Dirichlet L-functions and Dirichlet polynomials.

Evaluation uses Euler-Maclaurin summation with ``N = max(20, ceil(2|t|))``
direct terms and ``M = 12`` Bernoulli corrections.  All functions accept a
Python complex ``s`` or an array of them; the error bound returned by the
``*_with_bound`` variants is the Euler-Maclaurin remainder estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import bernoulli, loggamma

from .arith import CharacterTable, characters_mod, factorize, mobius_sieve
from .errors import InvalidParameterError, PoleError, PrecisionError

DEFAULT_TOL = 1e-10
BERNOULLI_ORDER = 12
_CHUNK = 1 << 21  # complex entries per work block

_B2J = {}


def _bernoulli_even(m):
    if m not in _B2J:
        _B2J[m] = bernoulli(2 * m)[2::2]
    return _B2J[m]


def default_terms(s):
    """Direct-sum length for points ``s``: ``max(20, ceil(2 max|t|))``."""
    tmax = float(np.max(np.abs(np.imag(s)))) if np.size(s) else 0.0
    return max(20, math.ceil(2.0 * tmax))


def _em_tail(s, x, M):
    """Bernoulli corrections at ``x = N + a`` and the remainder bound."""
    b2 = _bernoulli_even(M)
    logx = np.log(x)
    poch = s.copy()  # s (s+1) ... (s+2j-2)
    xpow = np.exp(-(s + 1.0) * logx)  # x^(-s-1)
    inv_x2 = 1.0 / (x * x)
    corr = np.zeros_like(s)
    for j in range(1, M + 1):
        term = b2[j - 1] / math.factorial(2 * j) * poch * xpow
        corr += term
        poch = poch * (s + 2 * j - 1) * (s + 2 * j)
        xpow = xpow * inv_x2
    # |R| <= 4 |(s)_{2M}| / (2 pi)^{2M} * x^(1 - sigma - 2M) / (sigma + 2M - 1)
    sigma = s.real
    log_poch = np.zeros(s.shape)
    for i in range(2 * M):
        log_poch += np.log(np.abs(s + i))
    log_bound = (math.log(4.0) + log_poch - 2 * M * math.log(2 * math.pi)
                 + (1.0 - sigma - 2 * M) * logx - np.log(sigma + 2 * M - 1.0))
    return corr, np.exp(log_bound)


def _power_sum(s, shifts):
    """``sum_j (shifts_j)^(-s)`` for every entry of ``s`` (blocked)."""
    logs = np.log(shifts)
    out = np.empty(s.shape, dtype=complex)
    rows = max(1, _CHUNK // max(1, logs.size))
    flat = s.ravel()
    res = out.ravel()
    for i in range(0, flat.size, rows):
        blk = flat[i:i + rows]
        res[i:i + rows] = np.exp(-np.outer(blk, logs)).sum(axis=1)
    return out


def _as_points(s):
    arr = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError("s must be finite")
    return arr


def hurwitz_zeta_with_bound(s, a, *, terms=None, order=BERNOULLI_ORDER):
    """Hurwitz zeta ``sum_{n>=0} (n+a)^(-s)`` continued analytically.

    Returns ``(value, bound)``.
    """
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise InvalidParameterError(f"a must lie in (0, 1], got {a}")
    arr = _as_points(s)
    if np.any(arr == 1.0):
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    N = terms or default_terms(arr)
    x = N + a
    direct = _power_sum(arr, a + np.arange(N, dtype=float))
    pole = np.exp((1.0 - arr) * math.log(x)) / (arr - 1.0)
    half = 0.5 * np.exp(-arr * math.log(x))
    corr, bound = _em_tail(arr, x, order)
    value = direct + pole + half + corr
    if arr.ndim == 0:
        return complex(value), float(bound)
    return value, bound


def hurwitz_zeta(s, a, *, tol=DEFAULT_TOL, terms=None, order=BERNOULLI_ORDER):
    """Hurwitz zeta; raises :class:`PrecisionError` if the bound exceeds ``tol``."""
    value, bound = hurwitz_zeta_with_bound(s, a, terms=terms, order=order)
    worst = float(np.max(bound))
    if worst > tol:
        raise PrecisionError("Hurwitz zeta accuracy target missed", worst)
    return value


def zeta_eval(s, *, tol=DEFAULT_TOL):
    """Riemann zeta via ``zeta(s, 1)``."""
    return hurwitz_zeta(s, 1.0, tol=tol)


def l_eval_with_bound(chi, s, *, terms=None, order=BERNOULLI_ORDER):
    """``L(s, chi) = q^(-s) sum_a chi(a) zeta(s, a/q)`` and its error bound.

    The pole parts of the Hurwitz terms are combined before division by
    ``s - 1`` so that non-principal characters stay accurate near ``s = 1``.
    """
    arr = _as_points(s)
    q = chi.modulus
    if q == 1:
        return hurwitz_zeta_with_bound(arr, 1.0, terms=terms, order=order)
    if chi.is_principal and np.any(arr == 1.0):
        raise PoleError("L(s, chi_0) has a pole at s = 1")
    residues = np.array([r for r in range(1, q + 1) if chi(r) != 0])
    weights = chi(residues)
    N = terms or default_terms(arr)
    total = np.zeros(arr.shape, dtype=complex)
    bound = np.zeros(arr.shape)
    # direct part: sum over n < N of chi(a) (n + a/q)^(-s), all residues at once
    shifts = (np.arange(N, dtype=float)[:, None] + residues[None, :] / q).ravel()
    logs = np.log(shifts)
    wts = np.tile(weights, N)
    flat = arr.ravel()
    res = total.ravel()
    rows = max(1, _CHUNK // logs.size)
    for i in range(0, flat.size, rows):
        blk = flat[i:i + rows]
        res[i:i + rows] = np.exp(-np.outer(blk, logs)) @ wts
    one_minus_s = 1.0 - arr
    for a_res, w in zip(residues, weights):
        x = N + a_res / q
        half = 0.5 * np.exp(-arr * math.log(x))
        corr, bnd = _em_tail(arr, x, order)
        total = total + w * (half + corr)
        bound = bound + bnd
    # pole part: sum_a chi(a) x_a^(1-s) / (s-1)
    if chi.is_principal:
        for a_res, w in zip(residues, weights):
            x = N + a_res / q
            total = total + w * np.exp(one_minus_s * math.log(x)) / (arr - 1.0)
    else:
        # sum chi(a) = 0, so subtract N^(1-s)/(s-1) from each term:
        # (x^(1-s) - N^(1-s))/(s-1) = -N^(1-s) ell expm1(z)/z, z = (1-s) ell
        base = np.exp(one_minus_s * math.log(N))
        for a_res, w in zip(residues, weights):
            ell = math.log1p(a_res / (q * N))
            z = one_minus_s * ell
            small = np.abs(z) < 1e-8
            zs = np.where(small, 1.0, z)
            ratio = np.where(small, 1.0 + z / 2.0, np.expm1(zs) / zs)
            total = total - w * base * ell * ratio
    value = np.exp(-arr * math.log(q)) * total
    scale = np.exp(-arr.real * math.log(q))
    bound = bound * scale
    if arr.ndim == 0:
        return complex(value), float(bound)
    return value, bound


def l_eval(chi, s, *, tol=DEFAULT_TOL, terms=None):
    """Dirichlet ``L(s, chi)``; raises :class:`PrecisionError` past ``tol``."""
    value, bound = l_eval_with_bound(chi, s, terms=terms)
    worst = float(np.max(bound))
    if worst > tol:
        raise PrecisionError("L-function accuracy target missed", worst)
    return value


def eta_eval(chi, p, s, *, tol=DEFAULT_TOL):
    """The shifted function ``eta(s) = L(s + 1/p - 1/2, chi)``."""
    return l_eval(chi, np.asarray(s) + (1.0 / p - 0.5), tol=tol)


def euler_factor(q, s):
    """``prod_{prime | q} (1 - prime^(-s))``."""
    arr = np.asarray(s, dtype=complex)
    out = np.ones(arr.shape, dtype=complex)
    for prime in factorize(q) if q > 1 else {}:
        out = out * (1.0 - np.exp(-arr * math.log(prime)))
    return complex(out) if out.ndim == 0 else out


def inv_l_partial(chi, n, s):
    """Partial sum ``sum_{k<=n} mu(k) chi(k) k^(-s)`` of ``1/L(s, chi)``."""
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    mu = mobius_sieve(n)[1:].astype(float)
    k = np.arange(1, n + 1)
    coef = mu * chi(k)
    keep = coef != 0
    return DirichletPoly.sparse(k[keep], coef[keep])(s)


@dataclass(frozen=True)
class DirichletPoly:
    """Ordinary Dirichlet polynomial ``sum_{k=1}^n b_k k^(-s)``.

    ``coeffs[k-1]`` is the coefficient of frequency ``k``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size < 1:
            raise InvalidParameterError("a Dirichlet polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def sparse(cls, freqs, coeffs):
        """Build from explicit frequencies (kept sparse for evaluation)."""
        poly = cls(np.zeros(1))
        object.__setattr__(poly, "_freqs", np.asarray(freqs, dtype=float))
        object.__setattr__(poly, "_vals", np.asarray(coeffs, dtype=complex))
        return poly

    @property
    def degree(self):
        freqs = getattr(self, "_freqs", None)
        return int(freqs.max()) if freqs is not None else self.coeffs.size

    def _terms(self):
        freqs = getattr(self, "_freqs", None)
        if freqs is not None:
            return freqs, self._vals
        k = np.arange(1, self.coeffs.size + 1, dtype=float)
        nz = self.coeffs != 0
        return k[nz], self.coeffs[nz]

    def __call__(self, s):
        arr = np.asarray(s, dtype=complex)
        freqs, vals = self._terms()
        if freqs.size == 0:
            return complex(0) if arr.ndim == 0 else np.zeros(arr.shape, dtype=complex)
        logs = np.log(freqs)
        flat = arr.ravel()
        out = np.empty(flat.shape, dtype=complex)
        rows = max(1, _CHUNK // logs.size)
        for i in range(0, flat.size, rows):
            out[i:i + rows] = np.exp(-np.outer(flat[i:i + rows], logs)) @ vals
        out = out.reshape(arr.shape)
        return complex(out) if arr.ndim == 0 else out

    def __neg__(self):
        return DirichletPoly(-self.coeffs)

    def conj(self):
        return DirichletPoly(np.conj(self.coeffs))


def mollifier_vn(n):
    """Coefficients ``(1 - log k / log n) mu(k)``; ``V_1 = 1`` by convention."""
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if n == 1:
        return DirichletPoly(np.ones(1))
    k = np.arange(1, n + 1, dtype=float)
    mu = mobius_sieve(n)[1:].astype(float)
    taper = 1.0 - np.log(k) / math.log(n)
    taper[-1] = 0.0
    return DirichletPoly(taper * mu)


def hardy_z(t):
    """Hardy's ``Z(t) = exp(i theta(t)) zeta(1/2 + it)`` (real for real t)."""
    t = np.asarray(t, dtype=float)
    theta = np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)
    z = zeta_eval(0.5 + 1j * t)
    return np.real(np.exp(1j * theta) * z)


def zeta_zero_ordinates(first, last, *, step=0.05):
    """Ordinates of the ``first..last`` (1-based) nontrivial zeros of zeta.

    Sign changes of Hardy's Z on a fine scan, refined by Brent's method.
    Intended for the small indices used as interpolation nodes.
    """
    from scipy.optimize import brentq

    if first < 1 or last < first:
        raise InvalidParameterError("zero indices must satisfy 1 <= first <= last")
    found = []
    t0 = 10.0
    while len(found) < last:
        grid = t0 + step * np.arange(2001)
        z = hardy_z(grid)
        idx = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
        for i in idx:
            found.append(brentq(lambda t: float(hardy_z(t)), grid[i], grid[i + 1], xtol=1e-13))
        t0 = grid[-1]
    return np.array(found[first - 1:last])


__all__ = [
    "CharacterTable", "DirichletPoly", "characters_mod", "default_terms", "eta_eval",
    "euler_factor", "hardy_z", "hurwitz_zeta", "hurwitz_zeta_with_bound", "inv_l_partial",
    "l_eval", "l_eval_with_bound", "mollifier_vn", "zeta_eval", "zeta_zero_ordinates",
]
