"""Orthonormal Dirichlet polynomials for the arctangent density.

With ``lambda_k = k^(1/p)`` the functions

    psi_1 = 1,  psi_k(t) = (k^(1/p-it) - (k-1)^(1/p-it)) / sqrt(k^(2/p) - (k-1)^(2/p))

are orthonormal for ``(1/(p pi)) dt / (1/p^2 + t^2)`` on the real line.
This module evaluates them, their reproducing kernel ``K_n`` (streamed in
chunks for ``n`` up to ``1e8``) and the kernel matrices at a node set.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from ._numerics import Accumulator
from .arith import _check_p
from .errors import ConditioningError, InvalidParameterError

CHUNK = 1 << 18
DUPLICATE_TOL = 1e-9


def _check_n(n, name="n"):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParameterError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def _norm_sq(p, k):
    """``k^(2/p) - (k-1)^(2/p)`` without cancellation (1 at ``k = 1``)."""
    k = np.asarray(k, dtype=float)
    safe = np.where(k > 1, k, 2.0)
    d = -(safe ** (2.0 / p)) * np.expm1((2.0 / p) * np.log1p(-1.0 / safe))
    return np.where(k > 1, d, 1.0)


def psi_values(p, k, t):
    """``psi_k(t)`` broadcast over integer array ``k`` and real ``t``."""
    k = np.asarray(k, dtype=float)
    t = np.asarray(t, dtype=float)
    a = 1.0 / p - 1j * t
    safe = np.where(k > 1, k, 2.0)
    num = -np.exp(a * np.log(safe)) * np.expm1(a * np.log1p(-1.0 / safe))
    out = num / np.sqrt(_norm_sq(p, safe))
    return np.where(k > 1, out, 1.0 + 0j)


def psi_eval(p, k, t):
    """``psi_k(t)``; ``psi_1 = 1``."""
    p = _check_p(p)
    k = _check_n(k, "k")
    return complex(psi_values(p, k, float(t)))


def psi_matrix(p, n, nodes):
    """``A[j, k-1] = psi_k(t_j)`` for ``k = 1..n``."""
    p = _check_p(p)
    n = _check_n(n)
    nodes = np.atleast_1d(np.asarray(nodes, dtype=float))
    return psi_values(p, np.arange(1, n + 1)[None, :], nodes[:, None])


def monomial_inner(p, j, k):
    """``(1/(p pi)) int j^(1/p-it) conj(k^(1/p-it)) dt/(1/p^2+t^2) = min(j,k)^(2/p)``.

    The integral is ``(j k)^(1/p) exp(-|log(j/k)|/p)`` by the Poisson kernel.
    """
    p = _check_p(p)
    j, k = _check_n(j, "j"), _check_n(k, "k")
    return float(min(j, k)) ** (2.0 / p)


def psi_inner(p, j, k):
    """``<psi_j, psi_k>`` expanded by bilinearity over :func:`monomial_inner`."""
    p = _check_p(p)
    j, k = _check_n(j, "j"), _check_n(k, "k")

    def mono(a, b):
        return 0.0 if a == 0 or b == 0 else float(min(a, b)) ** (2.0 / p)

    num = mono(j, k) - mono(j, k - 1) - mono(j - 1, k) + mono(j - 1, k - 1)
    return num / math.sqrt(float(_norm_sq(p, j)) * float(_norm_sq(p, k)))


def _terms(p, k):
    """``psi_k`` as a list of ``(coefficient, frequency log a)`` with ``psi_k = sum c a^(1/p-it)``."""
    if k == 1:
        return [(1.0, 0.0)]
    s = 1.0 / math.sqrt(float(_norm_sq(p, k)))
    return [(s * k ** (1.0 / p), math.log(k)), (-s * (k - 1) ** (1.0 / p), math.log(k - 1))]


def psi_inner_quadrature(p, j, k, *, epsabs=1e-11):
    """``<psi_j, psi_k>`` by numerical quadrature (independent oracle).

    The product expands into a few oscillations ``exp(-i w t)``; each weighted
    integral ``int cos(w t) / (1/p^2 + t^2) dt`` over the half line is done with
    QUADPACK's Fourier-integral routine, the ``w = 0`` terms with plain ``quad``.
    Real and odd parts cancel by symmetry, so the result is real.
    """
    p = _check_p(p)
    c2 = 1.0 / p**2
    cache = {}

    def cos_integral(w):
        w = abs(w)
        if w not in cache:
            if w == 0.0:
                val = integrate.quad(lambda t: 1.0 / (c2 + t * t), 0, np.inf, epsabs=epsabs)[0]
            else:
                val = integrate.quad(lambda t: 1.0 / (c2 + t * t), 0, np.inf, weight="cos",
                                     wvar=w, epsabs=epsabs, limlst=200)[0]
            cache[w] = 2.0 * val
        return cache[w]

    total = 0.0
    for ca, la in _terms(p, _check_n(j, "j")):
        for cb, lb in _terms(p, _check_n(k, "k")):
            total += ca * cb * cos_integral(la - lb)
    return total / (p * math.pi)


def _chunks(start, stop, size=CHUNK):
    for lo in range(start, stop + 1, size):
        yield np.arange(lo, min(lo + size, stop + 1), dtype=float)


def _kernel_stream(p, u, v, checkpoints):
    """Yield ``(n, K_n(u, v))`` at each checkpoint (ascending) in one pass."""
    diag = u == v
    acc = Accumulator((), float if diag else complex)
    done = 0
    for n in checkpoints:
        for k in _chunks(done + 1, n):
            pu = psi_values(p, k, u)
            if diag:
                acc.add(np.sum(pu.real**2 + pu.imag**2))
            else:
                acc.add(np.sum(pu * np.conj(psi_values(p, k, v))))
        done = n
        yield n, acc.value[()]


def kernel_eval(p, n, u, v):
    """``K_n(u, v) = sum_{k<=n} psi_k(u) conj(psi_k(v))``, streamed and compensated."""
    p = _check_p(p)
    n = _check_n(n)
    u, v = float(u), float(v)
    (_, val), = _kernel_stream(p, u, v, [n])
    return complex(val)


def lubinsky_diagonal(p, u, n):
    """Leading term ``(p/2) |1/p + iu|^2 log n`` of ``K_n(u, u)``."""
    return 0.5 * p * (1.0 / p**2 + u * u) * math.log(n)


def kernel_scan(p, u, n_list, v=None):
    """Rows ``(n, K_n(u, v), ratio)`` for ascending ``n_list`` in a single pass.

    ``ratio`` compares ``K_n(u,u)`` with :func:`lubinsky_diagonal` (only
    meaningful for ``v = u``; reported as ``nan`` otherwise or for ``n = 1``).
    """
    p = _check_p(p)
    ns = sorted({_check_n(n) for n in n_list})
    u = float(u)
    v = u if v is None else float(v)
    rows = []
    for n, val in _kernel_stream(p, u, v, ns):
        lead = lubinsky_diagonal(p, u, n) if u == v and n > 1 else float("nan")
        rows.append((n, complex(val), float(np.real(val)) / lead if lead == lead else float("nan")))
    return rows


def lubinsky_offdiagonal_bound(p, u, v):
    """Main term ``p |1/p+iu| |1/p-iv| / |u-v|`` of the off-diagonal estimate."""
    if u == v:
        raise InvalidParameterError("the off-diagonal estimate needs u != v")
    return p * abs(1.0 / p + 1j * u) * abs(1.0 / p - 1j * v) / abs(u - v)


def reduced_determinant_target(p, nodes):
    """``prod_j (p/2) |1/p + i t_j|^2``, the limit of ``det H / (log n)^m``."""
    return float(np.prod([0.5 * p * (1.0 / p**2 + t * t) for t in nodes]))


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """``H[i, j] = K_n(t_i, t_j)`` at distinct real nodes."""

    p: float
    n: int
    nodes: np.ndarray
    H: np.ndarray = field(repr=False)
    cond: float

    @property
    def m(self):
        return self.nodes.size

    def det_ratio(self):
        """``det H / (log n)^m``."""
        return float(np.real(np.linalg.det(self.H))) / math.log(self.n) ** self.m


def _check_nodes(nodes):
    nodes = np.atleast_1d(np.asarray(nodes, dtype=float))
    if nodes.ndim != 1 or nodes.size == 0:
        raise InvalidParameterError("nodes must be a non-empty list of reals")
    if not np.all(np.isfinite(nodes)):
        raise InvalidParameterError("nodes must be finite")
    gaps = np.abs(nodes[:, None] - nodes[None, :]) + np.eye(nodes.size) * 1.0
    if np.any(gaps <= DUPLICATE_TOL):
        raise ConditioningError("duplicate nodes make the kernel matrix singular", float("inf"))
    return nodes


def kernel_matrix_scan(p, nodes, n_list):
    """:class:`KernelMatrix` for each ``n`` in ascending order, in one pass."""
    p = _check_p(p)
    nodes = _check_nodes(nodes)
    ns = sorted({_check_n(n) for n in n_list})
    m = nodes.size
    acc = Accumulator((m, m), complex)
    done = 0
    out = []
    for n in ns:
        if n < m:
            warnings.warn(f"n={n} < m={m}: the kernel matrix is singular", RuntimeWarning, stacklevel=2)
        for k in _chunks(done + 1, n):
            A = psi_values(p, k[None, :], nodes[:, None])
            acc.add(A @ A.conj().T)
        done = n
        H = acc.value.copy()
        H = 0.5 * (H + H.conj().T)
        out.append(KernelMatrix(p, n, nodes.copy(), H, float(np.linalg.cond(H))))
    return out


def kernel_matrix(p, n, nodes):
    """Assemble ``H = (K_n(t_i, t_j))`` with its condition estimate."""
    return kernel_matrix_scan(p, nodes, [n])[0]
