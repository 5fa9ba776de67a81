"""The kappa function of a (character, p) pair and its dilates.

``kappa(x) = beta x^alpha - S_floor(x)`` with ``S_m`` the weighted character
prefix sum.  For principal characters ``alpha = 3/2 - 1/p`` and
``beta = phi(q)/(alpha q)``; otherwise both vanish.

The dilates ``lambda_k(x) = kappa(1/(k x))`` are piecewise of the form
``c1 x^(-alpha) + c0`` between consecutive breakpoints ``1/(k m)``; this
is what makes the Gram integrals in :mod:`nblab.bd` exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import CharacterTable, WeightedPrefix, _check_p, totient
from .errors import InvalidParameterError


@dataclass(frozen=True, eq=False)
class KappaSpec:
    chi: CharacterTable
    p: float
    alpha: float
    beta: float
    prefix: WeightedPrefix

    @property
    def periodic(self):
        """True when kappa is exactly periodic (``p = 2``), period ``q``."""
        return self.p == 2.0

    def __call__(self, x):
        return kappa_eval(self, x)


def kappa_build(chi, p):
    p = _check_p(p)
    if chi.is_principal:
        alpha = 1.5 - 1.0 / p
        beta = totient(chi.modulus) / (alpha * chi.modulus)
    else:
        alpha = beta = 0.0
    return KappaSpec(chi, p, alpha, beta, WeightedPrefix(chi, p))


def kappa_eval(K, x):
    """``beta x^alpha - S_floor(x)`` for ``x > 0`` (scalar or array)."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise InvalidParameterError("kappa is evaluated at positive x only")
    m = np.floor(xa).astype(np.int64)
    out = K.beta * xa**K.alpha - K.prefix[m]
    return complex(out) if out.ndim == 0 else out


def kappa_sup(K, xmax):
    """``sup_{0 < x <= xmax} |kappa(x)|``, exact for the piecewise form.

    On ``[m, m+1)`` the modulus of ``beta x^alpha - S_m`` is extremal at an
    endpoint, so checking both endpoints of every cell is enough.
    """
    M = int(math.floor(xmax))
    best = K.beta if M >= 1 else K.beta * xmax**K.alpha
    if M >= 1:
        m = np.arange(1, M + 1)
        s = K.prefix[m]
        left = np.abs(K.beta * m.astype(float) ** K.alpha - s)
        right_x = np.minimum(m + 1.0, xmax)
        right = np.abs(K.beta * right_x**K.alpha - s)
        best = max(best, float(left.max()), float(right.max()))
    return float(best)


def kappa_scan(K, xmax, points=64):
    """Running supremum of ``|kappa|`` on a doubling grid ending at ``xmax``.

    Returns a list of ``(X, sup_{x<=X} |kappa|)``.
    """
    xs = np.unique(np.geomspace(1.0, xmax, points).round(6))
    return [(float(X), kappa_sup(K, X)) for X in xs]


@dataclass(frozen=True)
class Segment:
    """``lambda_k(x) = power_coeff * x^(-alpha) + const_coeff`` on ``(lo, hi]``."""

    lo: float
    hi: float
    power_coeff: complex
    const_coeff: complex

    def __call__(self, x, alpha):
        return self.power_coeff * np.asarray(x, dtype=float) ** (-alpha) + self.const_coeff


@dataclass(frozen=True, eq=False)
class LambdaSegments:
    """Piecewise representation of ``lambda_k`` on ``(eps, inf)``.

    Arrays run from the rightmost segment ``(1/(2k), 1/k]`` leftwards;
    ``tail`` is the analytic piece on ``(1/k, inf)``.
    """

    k: int
    alpha: float
    eps: float
    lo: np.ndarray
    hi: np.ndarray
    power_coeff: float
    const_coeff: np.ndarray
    tail: Segment

    def segments(self):
        return [Segment(float(a), float(b), self.power_coeff, complex(c))
                for a, b, c in zip(self.lo, self.hi, self.const_coeff)]

    def __len__(self):
        return self.lo.size

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= self.eps):
            raise InvalidParameterError("x lies below the segment cutoff")
        # (1/(k(m+1)), 1/(k m)]  <->  m = floor(1/(k x))
        m = np.floor(1.0 / (self.k * x)).astype(np.int64)
        idx = np.clip(m - 1, 0, max(self.lo.size - 1, 0))
        c0 = np.where(m >= 1, self.const_coeff[idx] if self.lo.size else 0.0, 0.0)
        return self.power_coeff * x ** (-self.alpha) + c0


def lambda_segments(K, k, eps):
    """Segments of ``lambda_k(x) = kappa(1/(k x))`` covering ``(eps, 1/k]``.

    Breakpoints are ``x = 1/(k m)``; on ``(1/(k(m+1)), 1/(k m)]`` the
    coefficients are ``c1 = beta k^(-alpha)`` and ``c0 = -S_m``.  The
    leftmost segment is cut at ``eps``.
    """
    if int(k) != k or k < 1:
        raise InvalidParameterError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    if not 0.0 < eps < 1.0 / k:
        raise InvalidParameterError(f"eps must lie in (0, 1/k) = (0, {1.0 / k}), got {eps}")
    # m runs while the segment's upper end 1/(k m) exceeds eps
    mmax = int(math.ceil(1.0 / (k * eps))) - 1
    while 1.0 / (k * (mmax + 1)) > eps:
        mmax += 1
    while mmax > 1 and 1.0 / (k * mmax) <= eps:
        mmax -= 1
    m = np.arange(1, mmax + 1)
    hi = 1.0 / (k * m.astype(float))
    lo = 1.0 / (k * (m + 1.0))
    lo[-1] = max(lo[-1], eps)
    c1 = K.beta * k ** (-K.alpha)
    c0 = -K.prefix[m]
    tail = Segment(1.0 / k, math.inf, c1, 0j)
    return LambdaSegments(k, K.alpha, eps, lo, hi, c1, np.asarray(c0), tail)
