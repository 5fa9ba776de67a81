"""Elementary multiplicative number theory.

Möbius function, Euler totient, the full group of Dirichlet characters
modulo ``q`` and weighted character prefix sums.

Characters are built from the cyclic decomposition of ``(Z/qZ)^*``: one
generator per odd prime power and ``-1, 5`` for ``2^e`` with ``e >= 3``.
Values are kept as exact angles ``num / order`` (in turns) so that
multiplicativity can be checked in integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._numerics import compensated_cumsum
from .errors import InvalidParameterError

CHARACTER_MODULUS_LIMIT = 10**6


def _check_positive_int(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidParameterError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def factorize(n):
    """Trial-division factorisation as ``{prime: exponent}``."""
    n = _check_positive_int("n", n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(k):
    """Möbius function mu(k)."""
    k = _check_positive_int("k", k)
    fac = factorize(k)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def totient(q):
    """Euler's phi(q)."""
    q = _check_positive_int("q", q)
    out = q
    for prime in factorize(q):
        out = out // prime * (prime - 1)
    return out


def mobius_sieve(n):
    """Array ``mu[0..n]`` (``mu[0] = 0``) by a linear sieve; for batch use."""
    n = _check_positive_int("n", n)
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    for prime in range(2, n + 1):
        if is_comp[prime]:
            continue
        is_comp[2 * prime :: prime] = True
        mu[prime::prime] *= -1
        sq = prime * prime
        if sq <= n:
            mu[sq::sq] = 0
    return mu


def _primitive_root(prime):
    phi = prime - 1
    factors = list(factorize(phi)) if phi > 1 else []
    for g in range(2, prime + 1):
        if all(pow(g, phi // f, prime) != 1 for f in factors):
            return g
    return 1  # prime == 2


def _cyclic_components(q):
    """Cyclic factors of (Z/qZ)^*: list of ``(order, log_table)``.

    ``log_table[r]`` is the discrete log of ``r mod q`` in that factor,
    or -1 when ``gcd(r, q) > 1``.
    """
    residues = np.arange(q)
    units = np.array([math.gcd(int(r), q) == 1 for r in residues]) if q > 1 else np.array([True])
    comps = []
    for prime, e in sorted(factorize(q).items()) if q > 1 else []:
        pe = prime**e
        if prime == 2:
            if e == 1:
                continue
            # (Z/2^e)^* = <-1> x <5>, the second factor trivial for e = 2
            ord5 = 2 ** (e - 2)
            log_m1 = np.full(pe, -1, dtype=np.int64)
            log_5 = np.full(pe, -1, dtype=np.int64)
            for a in range(2):
                x = 1 if a == 0 else pe - 1
                for b in range(ord5):
                    log_m1[x] = a
                    log_5[x] = b
                    x = x * 5 % pe
            comps.append((2, log_m1))
            if ord5 > 1:
                comps.append((ord5, log_5))
            continue
        g = _primitive_root(prime)
        if e > 1 and pow(g, prime - 1, prime * prime) == 1:
            g += prime
        order = pe - pe // prime
        log_g = np.full(pe, -1, dtype=np.int64)
        x = 1
        for i in range(order):
            log_g[x] = i
            x = x * g % pe
        comps.append((order, log_g))
    tables = []
    for order, local in comps:
        pe = local.size
        tab = local[residues % pe]
        tab[~units] = -1
        tables.append((order, tab))
    return tables, units


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """A Dirichlet character modulo ``modulus`` as a periodic value table.

    ``angles[r]`` is the value at residue ``r`` as a multiple of
    ``2*pi/order`` (``-1`` marks a zero value).  ``values`` follows the
    ordering ``chi(1), ..., chi(q)``.
    """

    modulus: int
    index: int
    exponents: tuple
    order: int
    angles: np.ndarray = field(repr=False)

    @property
    def is_principal(self):
        return all(x == 0 for x in self.exponents)

    @cached_property
    def _residue_values(self):
        out = np.zeros(self.modulus, dtype=complex)
        nz = self.angles >= 0
        a = self.angles[nz]
        # exact values at quarter turns keep real characters real
        vals = np.exp(2j * np.pi * a / self.order)
        quarter = (4 * a) % self.order == 0
        if quarter.any():
            lut = np.array([1, 1j, -1, -1j])
            vals[quarter] = lut[(4 * a[quarter] // self.order) % 4]
        out[nz] = vals
        out.setflags(write=False)
        return out

    @property
    def values(self):
        q = self.modulus
        return self._residue_values[np.r_[1:q, 0]] if q > 1 else self._residue_values.copy()

    @property
    def is_real(self):
        return bool(np.all(self.angles[self.angles >= 0] * 2 % self.order == 0))

    def __call__(self, k):
        """Evaluate at integer(s) ``k`` using ``k mod q``."""
        k = np.asarray(k, dtype=np.int64)
        out = self._residue_values[k % self.modulus]
        return complex(out) if out.ndim == 0 else out

    def angle(self, k):
        """Exact angle numerator at ``k`` (``-1`` where chi vanishes)."""
        return int(self.angles[int(k) % self.modulus])

    def conjugate(self):
        angles = np.where(self.angles >= 0, (-self.angles) % self.order, -1)
        angles.setflags(write=False)
        orders = _component_orders(self.modulus)
        exps = tuple((-x) % o for x, o in zip(self.exponents, orders))
        return CharacterTable(self.modulus, _exponent_index(orders, exps), exps, self.order, angles)

    def same_values(self, other):
        """True when both tables describe the same function."""
        return self.modulus == other.modulus and _turns(self) == _turns(other)

    def __str__(self):
        kind = "principal" if self.is_principal else "non-principal"
        return f"chi_{self.index} mod {self.modulus} ({kind})"


def _exponent_index(orders, exps):
    idx = 0
    for x, o in zip(exps, orders):
        idx = idx * o + x
    return idx


def _turns(chi):
    """Angles as exact fractions of a turn (``None`` where chi vanishes)."""
    from fractions import Fraction

    return [None if a < 0 else Fraction(int(a), chi.order) for a in chi.angles]


_COMPONENT_CACHE = {}
_CACHE_LOCK = threading.Lock()


def _component_data(q):
    with _CACHE_LOCK:
        if q not in _COMPONENT_CACHE:
            _COMPONENT_CACHE[q] = _cyclic_components(q)
        return _COMPONENT_CACHE[q]


def _component_orders(q):
    return tuple(o for o, _ in _component_data(q)[0])


def characters_mod(q, *, limit=CHARACTER_MODULUS_LIMIT):
    """All ``phi(q)`` Dirichlet characters modulo ``q``.

    Index 0 is the principal character; the others follow the
    lexicographic order of their exponent vectors.
    """
    q = _check_positive_int("q", q)
    if q > limit:
        raise InvalidParameterError(f"q={q} exceeds the configured limit {limit}")
    tables, units = _component_data(q)
    orders = [o for o, _ in tables]
    exponent = 1
    for o in orders:
        exponent = exponent * o // math.gcd(exponent, o)
    scaled = [tab for _, tab in tables]
    chars = []
    for idx, exps in enumerate(itertools.product(*(range(o) for o in orders))):
        num = np.zeros(q, dtype=np.int64)
        for x, o, tab in zip(exps, orders, scaled):
            if x:
                num += x * (exponent // o) * tab
        num %= exponent
        num[~units] = -1
        num.setflags(write=False)
        chars.append(CharacterTable(q, idx, tuple(exps), exponent, num))
    return chars


def character(q, index=0):
    """The character with the given index in :func:`characters_mod` order."""
    chars = characters_mod(q)
    if not 0 <= index < len(chars):
        raise InvalidParameterError(f"char-index must lie in [0, {len(chars) - 1}], got {index}")
    return chars[index]


def _check_p(p):
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise InvalidParameterError(f"p must lie in (1, 2], got {p}")
    return p


def prefix_terms(chi, p, start, stop):
    """Terms ``chi(k) k^(1/2 - 1/p)`` for ``start <= k < stop``."""
    k = np.arange(start, stop, dtype=np.int64)
    weight = np.ones(k.size) if p == 2.0 else k.astype(float) ** (0.5 - 1.0 / p)
    return chi(k) * weight


class WeightedPrefix:
    """Append-only cache of ``S_m = sum_{k<=m} chi(k) k^(1/2-1/p)``.

    Extension is incremental and compensated; reads after extension are
    safe from several threads.
    """

    def __init__(self, chi, p):
        self.chi = chi
        self.p = _check_p(p)
        self._sums = np.zeros(1, dtype=complex)
        self._carry = None
        self._lock = threading.Lock()

    @property
    def size(self):
        return self._sums.size - 1

    def extend(self, m):
        """Make ``S_0..S_m`` available."""
        if m <= self.size:
            return
        with self._lock:
            have = self.size
            if m <= have:
                return
            target = max(m, 2 * have)
            terms = prefix_terms(self.chi, self.p, have + 1, target + 1)
            new, self._carry = compensated_cumsum(terms, self._carry)
            self._sums = np.concatenate((self._sums, new))

    def __getitem__(self, m):
        m_arr = np.asarray(m)
        top = int(m_arr.max()) if m_arr.size else 0
        if top > self.size:
            self.extend(top)
        return self._sums[m]


def weighted_prefix(chi, p, m):
    """``S_m = sum_{k=1}^m chi(k) k^(1/2-1/p)``; ``S_0 = 0``."""
    p = _check_p(p)
    if int(m) != m or m < 0:
        raise InvalidParameterError(f"m must be a nonnegative integer, got {m!r}")
    m = int(m)
    if m == 0:
        return 0j
    sums, _ = compensated_cumsum(prefix_terms(chi, p, 1, m + 1))
    return complex(sums[-1])
