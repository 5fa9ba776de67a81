"""Low-level numerical helpers shared by the modules.

Error-free transformations for compensated summation, a closed-form power
integral, and a vectorised adaptive Gauss-Kronrod panel integrator.
"""

from __future__ import annotations

import math

import numpy as np


def two_sum(a, b):
    """Knuth's TwoSum: ``a + b = s + e`` exactly (elementwise)."""
    s = a + b
    bp = s - a
    ap = s - bp
    e = (a - ap) + (b - bp)
    return s, e


def _compensated_cumsum_real(x, hi0=0.0, lo0=0.0):
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return x.copy(), hi0, lo0
    # np.add.accumulate adds sequentially, so the rounding error of every
    # step can be recovered with a vectorised TwoSum afterwards.
    s = np.add.accumulate(np.concatenate(([hi0], x)))
    _, err = two_sum(s[:-1], x)
    corr = lo0 + np.add.accumulate(err)
    out = s[1:] + corr
    return out, float(s[-1]), float(corr[-1])


def compensated_cumsum(x, carry=None):
    """Prefix sums of ``x`` with cascaded error compensation.

    ``carry`` is the ``(hi, lo)`` state returned by a previous call, which
    makes incremental extension agree with a fresh computation.  Returns
    ``(prefix, carry)``; complex input is handled componentwise.
    """
    x = np.asarray(x)
    if np.iscomplexobj(x):
        (rh, rl), (ih, il) = carry if carry is not None else ((0.0, 0.0), (0.0, 0.0))
        re, rh, rl = _compensated_cumsum_real(x.real, rh, rl)
        im, ih, il = _compensated_cumsum_real(x.imag, ih, il)
        return re + 1j * im, ((rh, rl), (ih, il))
    hi, lo = carry if carry is not None else (0.0, 0.0)
    out, hi, lo = _compensated_cumsum_real(x, hi, lo)
    return out, (hi, lo)


def csum(x):
    """Correctly rounded sum of a real or complex array (``math.fsum``)."""
    x = np.asarray(x).ravel()
    if np.iscomplexobj(x):
        return complex(math.fsum(x.real), math.fsum(x.imag))
    return math.fsum(x)


class Accumulator:
    """Running Neumaier sum for scalars or arrays (real or complex).

    Used to reduce chunked partial sums in streaming loops, so the result
    does not depend on the number of chunks beyond the last few ulps.
    """

    def __init__(self, shape=(), dtype=complex):
        self.hi = np.zeros(shape, dtype=dtype)
        self.lo = np.zeros(shape, dtype=dtype)

    def add(self, y):
        y = np.asarray(y, dtype=self.hi.dtype)
        if np.iscomplexobj(self.hi):
            hr, er = two_sum(self.hi.real, y.real)
            hi_, ei = two_sum(self.hi.imag, y.imag)
            self.hi = hr + 1j * hi_
            self.lo = self.lo + (er + 1j * ei)
        else:
            self.hi, e = two_sum(self.hi, y)
            self.lo = self.lo + e

    @property
    def value(self):
        return self.hi + self.lo


def expm1_ratio(z):
    """``expm1(z)/z`` with the removable singularity at 0 filled in."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-8
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 + z / 2.0, np.expm1(safe) / safe)


def power_integral(a, b, s):
    """Integral of ``x**(-s)`` over ``(a, b)`` for ``0 < a <= b``, real ``s``.

    Written as ``a**(1-s) * log(b/a) * expm1(z)/z`` with ``z = (1-s) log(b/a)``
    so that ``s`` near 1 (the logarithmic case) loses no precision.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ell = np.log(b / a)
    return a ** (1.0 - s) * ell * expm1_ratio((1.0 - s) * ell)


# Gauss-Kronrod 7/15 rule on [-1, 1] (QUADPACK qk15 tables).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

GK_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
GK_WEIGHTS = np.concatenate((_WGK[:-1], _WGK[::-1]))
# Gauss weights laid out on the 15 Kronrod nodes (zero at Kronrod-only nodes).
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[[1, 3, 5]] = _WG[:3]
G_WEIGHTS[7] = _WG[3]
G_WEIGHTS[[13, 11, 9]] = _WG[:3]


def panel_nodes(lo, hi):
    """Kronrod nodes for each panel ``[lo_i, hi_i]``: shape ``(npanels, 15)``."""
    lo = np.asarray(lo, dtype=float)[:, None]
    hi = np.asarray(hi, dtype=float)[:, None]
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * GK_NODES[None, :]


def panel_rules(values, lo, hi):
    """Per-panel Kronrod and Gauss estimates from values at ``panel_nodes``."""
    half = 0.5 * (np.asarray(hi, dtype=float) - np.asarray(lo, dtype=float))
    k = (values * GK_WEIGHTS).sum(axis=-1) * half
    g = (values * G_WEIGHTS).sum(axis=-1) * half
    return k, g


def adaptive_panels(func, a, b, *, tol=1e-10, initial=64, max_panels=200_000):
    """Adaptively integrate a vectorised scalar ``func`` over ``[a, b]``.

    Panels whose Kronrod/Gauss discrepancy exceeds their share of ``tol``
    (absolute) are bisected until the total estimated error is below ``tol``.
    Returns ``(value, error_estimate, (lo, hi))`` with the final panels.
    """
    edges = np.linspace(a, b, initial + 1)
    done_val = []
    done_err = []
    done_lo = []
    done_hi = []
    lo, hi = edges[:-1], edges[1:]
    total_width = b - a
    while lo.size:
        vals = func(panel_nodes(lo, hi))
        k, g = panel_rules(vals, lo, hi)
        err = np.abs(k - g)
        ok = err <= tol * (hi - lo) / total_width
        done_val.append(k[ok])
        done_err.append(err[ok])
        done_lo.append(lo[ok])
        done_hi.append(hi[ok])
        lo, hi = lo[~ok], hi[~ok]
        if sum(x.size for x in done_lo) + 2 * lo.size > max_panels:
            done_val.append(k[~ok])
            done_err.append(err[~ok])
            done_lo.append(lo)
            done_hi.append(hi)
            break
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate((lo, mid)), np.concatenate((mid, hi))
    order = np.argsort(np.concatenate(done_lo))
    value = csum(np.concatenate(done_val)[order])
    error = float(np.sum(np.concatenate(done_err)))
    return value, error, (np.concatenate(done_lo)[order], np.concatenate(done_hi)[order])
