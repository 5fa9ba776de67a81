"""Minimum-norm Dirichlet polynomial interpolation.

Among ``B = sum_k b_k psi_k`` of degree ``n`` with ``B(1/p + i t_j) = 1`` at
``m`` nodes, the smallest weighted norm ``(p/2) sum |b_k|^2`` is reached by
the projection ``b = A^H H^{-1} 1`` where ``A[j, k] = psi_k(t_j)`` and
``H = A A^H`` is the kernel matrix.  As ``n`` grows,

    d^2 log n  ->  sum_j 1 / (1/p^2 + t_j^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import linalg

from .arith import _check_p, character
from .errors import ConditioningError
from .lfun import DirichletPoly, l_eval, mollifier_vn, zeta_zero_ordinates
from .ortho import _check_n, _check_nodes, _norm_sq, kernel_matrix, kernel_matrix_scan, psi_matrix

COND_THRESHOLD = 1e10

# Reference values that are not desk-verifiable (displayed, never asserted).
# sum over zeros of 1/|rho|^2 = 2 + gamma - log(4 pi), the constant in the
# RH-conditional asymptotic for the classical distance d_n(zeta, 2).
EULER_GAMMA = 0.57721566490153286
BCF_CONSTANT = 2.0 + EULER_GAMMA - math.log(4.0 * math.pi)
REFERENCE_NOTES = {
    "bcf_limit": "d_n^2 log n -> 2 + gamma - log(4 pi) ~ 0.0461, conditional on RH and a zero-simplicity hypothesis",
    "burnol_liminf": "liminf d_n^2 log n >= sum_rho m(rho)^2/|rho|^2, unconditional but not verifiable at finite n",
}


def node_sum(p, nodes):
    """``sum_j 1 / (1/p^2 + t_j^2)``."""
    return float(sum(1.0 / (1.0 / p**2 + t * t) for t in nodes))


@dataclass(frozen=True, eq=False)
class ExtremalSolution:
    p: float
    n: int
    nodes: np.ndarray
    psi_coeffs: np.ndarray = field(repr=False)
    mono_coeffs: np.ndarray = field(repr=False)
    d2: float
    predicted: float
    residuals: np.ndarray
    cond: float

    @property
    def ratio(self):
        return self.d2 / self.predicted if math.isfinite(self.predicted) else math.nan

    @property
    def poly(self):
        """The extremal polynomial as ``sum c_j j^-s``."""
        return DirichletPoly(self.mono_coeffs)

    def __call__(self, t):
        """``B(1/p + i t)``."""
        return self.poly(1.0 / self.p + 1j * np.asarray(t, dtype=float))


def _mono_from_psi(p, b):
    """``c_j = j^(2/p) (b_j / sqrt(D_j) - b_{j+1} / sqrt(D_{j+1}))`` with ``b_{n+1} = 0``."""
    k = np.arange(1, b.size + 1, dtype=float)
    scaled = b / np.sqrt(_norm_sq(p, k))
    diff = scaled - np.append(scaled[1:], 0.0)
    return k ** (2.0 / p) * diff


def _factor(km, cond_threshold):
    if not np.isfinite(km.cond) or km.cond > cond_threshold:
        raise ConditioningError(f"n={km.n} too small for these nodes", km.cond)
    try:
        return linalg.cho_factor(km.H, lower=True)
    except linalg.LinAlgError as exc:
        raise ConditioningError(f"n={km.n} too small for these nodes", km.cond) from exc


def solve_problem2(p, n, nodes, *, cond_threshold=COND_THRESHOLD):
    """Exact minimum-norm interpolant of degree ``n`` with value 1 at ``1/p + i t_j``."""
    p = _check_p(p)
    n = _check_n(n)
    km = kernel_matrix(p, n, nodes)
    c = _factor(km, cond_threshold)
    ones = np.ones(km.m, dtype=complex)
    lam = linalg.cho_solve(c, ones)
    A = psi_matrix(p, n, km.nodes)
    b = A.conj().T @ lam
    d2 = 0.5 * p * float(np.real(np.vdot(ones, lam)))
    residuals = np.abs(A @ b - 1.0)
    predicted = node_sum(p, km.nodes) / math.log(n) if n > 1 else math.inf
    return ExtremalSolution(p, n, km.nodes, b, _mono_from_psi(p, b), d2, predicted, residuals, km.cond)


def min_norm_oracle(p, n, nodes):
    """Independent path: solve ``[[I, A^H], [A, 0]] [b; mu] = [0; 1]`` densely."""
    p = _check_p(p)
    n = _check_n(n)
    nodes = _check_nodes(nodes)
    A = psi_matrix(p, n, nodes)
    m = nodes.size
    M = np.zeros((n + m, n + m), dtype=complex)
    M[:n, :n] = np.eye(n)
    M[:n, n:] = A.conj().T
    M[n:, :n] = A
    rhs = np.concatenate([np.zeros(n), np.ones(m)]).astype(complex)
    try:
        sol = linalg.solve(M, rhs)
    except linalg.LinAlgError as exc:
        raise ConditioningError("saddle-point system is singular") from exc
    return sol[:n]


class AsymptoticTable(NamedTuple):
    rows: list
    slope: float
    intercept: float
    extrapolated_ratio: float
    target: float


def asymptotic_table(p, nodes, n_list, *, cond_threshold=COND_THRESHOLD):
    """Rows ``(n, d2, d2 log n, ratio)`` with ``ratio = d2 log n / sum_j 1/(1/p^2+t_j^2)``.

    ``1/ratio`` is fitted linearly against ``1/log n``; the fit's intercept
    and its reciprocal (the extrapolated ratio) are returned alongside.
    """
    p = _check_p(p)
    target = node_sum(p, np.atleast_1d(np.asarray(nodes, dtype=float)))
    rows = []
    for km in kernel_matrix_scan(p, nodes, n_list):
        c = _factor(km, cond_threshold)
        ones = np.ones(km.m, dtype=complex)
        d2 = 0.5 * p * float(np.real(np.vdot(ones, linalg.cho_solve(c, ones))))
        L = math.log(km.n)
        rows.append((km.n, d2, d2 * L, d2 * L / target))
    slope = intercept = math.nan
    if len(rows) >= 2 and all(r[0] > 1 for r in rows):
        x = 1.0 / np.log([r[0] for r in rows])
        y = 1.0 / np.array([r[3] for r in rows])
        slope, intercept = np.polyfit(x, y, 1)
    return AsymptoticTable(rows, float(slope), float(intercept), 1.0 / float(intercept), target)


class DeterminantTable(NamedTuple):
    rows: list
    intercept: float
    target: float


def determinant_table(p, nodes, n_list):
    """Rows ``(n, det H / (log n)^m)`` with the linear-in-``1/log n`` intercept."""
    from .ortho import reduced_determinant_target

    p = _check_p(p)
    rows = [(km.n, km.det_ratio()) for km in kernel_matrix_scan(p, nodes, n_list)]
    x = 1.0 / np.log([r[0] for r in rows])
    _, intercept = np.polyfit(x, [r[1] for r in rows], 1)
    return DeterminantTable(rows, float(intercept), reduced_determinant_target(p, nodes))


class Comparison(NamedTuple):
    rows: list
    correlation: float
    nodes: np.ndarray


def compare_mollifier(n, nodes, t_grid):
    """Rows ``(t, |1 - zeta V_n|, |B_n|)`` on ``s = 1/2 + i t``.

    ``V_n`` is the log-tapered Möbius sum and ``B_n`` the degree-``n``
    extremal polynomial at ``p = 2`` interpolating 1 at ``nodes``.  The
    Pearson correlation of the two columns is reported, not asserted.
    """
    n = _check_n(n)
    sol = solve_problem2(2.0, n, nodes)
    t = np.asarray(t_grid, dtype=float)
    s = 0.5 + 1j * t
    zeta = l_eval(character(1), s)
    mol = np.abs(1.0 - zeta * mollifier_vn(n)(s))
    ext = np.abs(sol(t))
    rows = [(float(a), float(b), float(c)) for a, b, c in zip(t, mol, ext)]
    corr = float(np.corrcoef(mol, ext)[0, 1]) if t.size > 1 else math.nan
    return Comparison(rows, corr, sol.nodes)


def zero_nodes(first, last):
    """Ordinates of zeta zeros ``first..last`` for use as interpolation nodes."""
    return zeta_zero_ordinates(first, last)
