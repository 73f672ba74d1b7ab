"""Batch kernels for the hot loops: sieving, oracle enumeration and the
vectorized forms of the composition/cancelation identities.

Every kernel exists twice, as a numba ``@njit`` loop and as a pure-numpy
expression. The public wrappers pick one according to ``backend``
(``"numba"`` / ``"numpy"``); the default follows ``QUADREP_DISABLE_JIT``.

All kernels work on int64 arrays. Coordinates are limited to
``MAX_COORD`` and oracle values to ``MAX_ORACLE_VALUE`` so that no
intermediate product can overflow; the scalar functions in
:mod:`quadrep.quadform` have no such limit.
"""

from __future__ import annotations

import numpy as np

from ._jit import HAVE_NUMBA, JIT_ENABLED, njit
from .errors import InvalidArgumentError

MAX_COORD = 1 << 20
MAX_ORACLE_VALUE = 1 << 52

BRANCH_FAIL = 0
BRANCH_PLUS = 1
BRANCH_MINUS = 2
BRANCH_COMMON = 3

# Broadcast chunk for the numpy oracle, in matrix cells.
_ORACLE_CHUNK_CELLS = 1 << 22


def available_backends():
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def default_backend():
    return "numba" if JIT_ENABLED else "numpy"


def _resolve(backend):
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise InvalidArgumentError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise InvalidArgumentError("numba backend requested but numba is not installed")
    return backend


def _as_int64(*arrays):
    out = np.broadcast_arrays(*(np.asarray(a, dtype=np.int64) for a in arrays))
    return [np.ascontiguousarray(a).ravel() for a in out], out[0].shape


def _check_coords(*arrays):
    for a in arrays:
        if a.size and (a.min() < -MAX_COORD or a.max() > MAX_COORD):
            raise InvalidArgumentError(f"batch coordinates must lie within +-{MAX_COORD}")


# --------------------------------------------------------------------------
# sieve


@njit(cache=True)
def _sieve_jit(limit):
    flags = np.ones(limit + 1, dtype=np.bool_)
    flags[0] = False
    if limit >= 1:
        flags[1] = False
    i = 2
    while i * i <= limit:
        if flags[i]:
            for j in range(i * i, limit + 1, i):
                flags[j] = False
        i += 1
    return np.nonzero(flags)[0].astype(np.int64)


def _sieve_numpy(limit):
    flags = np.ones(limit + 1, dtype=np.bool_)
    flags[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.nonzero(flags)[0].astype(np.int64)


def sieve_primes(limit, backend=None):
    """All primes ``<= limit`` as an int64 array."""
    limit = int(limit)
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _sieve_jit(limit)
    return _sieve_numpy(limit)


@njit(cache=True)
def _spf_jit(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    i = 2
    while i <= limit:
        if spf[i] == 0:
            spf[i] = i
            if i * i <= limit:
                for j in range(i * i, limit + 1, i):
                    if spf[j] == 0:
                        spf[j] = i
        i += 1
    return spf


def _spf_numpy(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    for i in range(2, int(limit**0.5) + 1):
        if spf[i] == 0:
            block = spf[i * i :: i]
            block[block == 0] = i
    rest = np.nonzero(spf == 0)[0]
    spf[rest[rest >= 2]] = rest[rest >= 2]
    return spf


def smallest_factor_table(limit, backend=None):
    """``spf[m]`` = smallest prime factor of m for ``2 <= m <= limit``
    (entries 0 and 1 are 0)."""
    limit = int(limit)
    if limit < 2 or limit >= 1 << 31:
        raise InvalidArgumentError("table limit must lie in [2, 2**31)")
    if _resolve(backend) == "numba":
        return _spf_jit(limit)
    return _spf_numpy(limit)


# --------------------------------------------------------------------------
# oracle enumeration


@njit(cache=True)
def _isqrt_jit(r):
    x = np.int64(np.sqrt(np.float64(r)))
    while x * x > r:
        x -= 1
    while (x + 1) * (x + 1) <= r:
        x += 1
    return x


@njit(cache=True)
def _oracle_jit(values, n):
    k = values.shape[0]
    counts = np.zeros(k, dtype=np.int64)
    xs = np.full(k, -1, dtype=np.int64)
    ys = np.full(k, -1, dtype=np.int64)
    for i in range(k):
        m = values[i]
        y = 0
        while n * y * y <= m:
            r = m - n * y * y
            x = _isqrt_jit(r)
            if x * x == r:
                if counts[i] == 0:
                    xs[i] = x
                    ys[i] = y
                counts[i] += 1
            y += 1
    return counts, xs, ys


def _oracle_numpy(values, n):
    k = values.shape[0]
    counts = np.zeros(k, dtype=np.int64)
    xs = np.full(k, -1, dtype=np.int64)
    ys = np.full(k, -1, dtype=np.int64)
    if k == 0:
        return counts, xs, ys
    order = np.argsort(values, kind="stable")
    rows = max(1, _ORACLE_CHUNK_CELLS // (int(np.sqrt(values.max() / n)) + 3))
    start = 0
    while start < k:
        stop = min(k, start + rows)
        idx = order[start:stop]
        vals = values[idx]
        # rows are sorted, so the chunk's last value bounds every y range in it
        ymax = int(np.sqrt(vals[-1] / n)) + 2
        yy = np.arange(ymax + 1, dtype=np.int64)
        rem = vals[:, None] - n * yy[None, :] ** 2
        ok = rem >= 0
        safe = np.where(ok, rem, 0)
        root = np.sqrt(safe.astype(np.float64)).astype(np.int64)
        root -= (root * root > safe).astype(np.int64)
        root += ((root + 1) * (root + 1) <= safe).astype(np.int64)
        hit = ok & (root * root == safe)
        counts[idx] = hit.sum(axis=1)
        first = hit.argmax(axis=1)
        found = counts[idx] > 0
        xs[idx[found]] = root[found, first[found]]
        ys[idx[found]] = first[found]
        start = stop
    return counts, xs, ys


def oracle_batch(values, n, backend=None):
    """Count solutions of ``x^2 + n*y^2 = m`` with ``x, y >= 0`` for each m.

    Returns ``(counts, xs, ys)`` where ``(xs[i], ys[i])`` is the solution
    with the smallest y, or ``(-1, -1)`` when ``counts[i] == 0``.
    """
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    values = np.ascontiguousarray(np.asarray(values, dtype=np.int64).ravel())
    if values.size and (values.min() < 0 or values.max() >= MAX_ORACLE_VALUE):
        raise InvalidArgumentError("oracle values must lie in [0, 2**52)")
    if _resolve(backend) == "numba":
        return _oracle_jit(values, np.int64(n))
    return _oracle_numpy(values, n)


# --------------------------------------------------------------------------
# Euler identity


@njit(cache=True)
def _compose_jit(a, b, x, y, n, sign):
    k = a.shape[0]
    X = np.empty(k, dtype=np.int64)
    Y = np.empty(k, dtype=np.int64)
    for i in range(k):
        X[i] = abs(a[i] * x[i] + sign * n * b[i] * y[i])
        Y[i] = abs(a[i] * y[i] - sign * b[i] * x[i])
    return X, Y


def compose_batch(a, b, x, y, n, sign=1, backend=None):
    """Vectorized Euler identity: ``(|ax +- nby|, |ay -+ bx|)``."""
    if sign not in (1, -1):
        raise InvalidArgumentError("sign must be +1 or -1")
    (a, b, x, y), shape = _as_int64(a, b, x, y)
    _check_coords(a, b, x, y)
    if _resolve(backend) == "numba":
        X, Y = _compose_jit(a, b, x, y, np.int64(n), np.int64(sign))
    else:
        X = np.abs(a * x + sign * n * b * y)
        Y = np.abs(a * y - sign * b * x)
    return X.reshape(shape), Y.reshape(shape)


@njit(cache=True)
def _compose_form_jit(x, y, a, b):
    k = x.shape[0]
    X = np.empty(k, dtype=np.int64)
    Y = np.empty(k, dtype=np.int64)
    for i in range(k):
        X[i] = abs(2 * a[i] * x[i] + b[i] * x[i] + a[i] * y[i] + 3 * b[i] * y[i])
        Y[i] = abs(b[i] * x[i] - a[i] * y[i])
    return X, Y


def compose_form_batch(x, y, a, b, backend=None):
    """Vectorized product of two ``2u^2 + 2uv + 3v^2`` values as an
    ``x^2 + 5y^2`` pair; ``(x, y)`` and ``(a, b)`` may be negative."""
    (x, y, a, b), shape = _as_int64(x, y, a, b)
    _check_coords(x, y, a, b)
    if _resolve(backend) == "numba":
        X, Y = _compose_form_jit(x, y, a, b)
    else:
        X = np.abs(2 * a * x + b * x + a * y + 3 * b * y)
        Y = np.abs(b * x - a * y)
    return X.reshape(shape), Y.reshape(shape)


# --------------------------------------------------------------------------
# cancelation


@njit(cache=True)
def _cancel_jit(a, b, x, y, n, square):
    k = a.shape[0]
    X = np.full(k, -1, dtype=np.int64)
    Y = np.full(k, -1, dtype=np.int64)
    branch = np.zeros(k, dtype=np.int64)
    for i in range(k):
        d = a[i] * a[i] + n * b[i] * b[i]
        if d == 0:
            continue
        u_plus = a[i] * x[i] + n * b[i] * y[i]
        v_plus = a[i] * y[i] - b[i] * x[i]
        u_minus = a[i] * x[i] - n * b[i] * y[i]
        v_minus = a[i] * y[i] + b[i] * x[i]
        if v_plus % d == 0 and u_plus % d == 0:
            X[i] = abs(u_plus) // d
            Y[i] = abs(v_plus) // d
            branch[i] = 1
        elif v_minus % d == 0 and u_minus % d == 0:
            X[i] = abs(u_minus) // d
            Y[i] = abs(v_minus) // d
            branch[i] = 2
        elif square:
            q = _isqrt_jit(d)
            if q * q == d and x[i] % q == 0 and y[i] % q == 0:
                X[i] = x[i] // q
                Y[i] = y[i] // q
                branch[i] = 3
    return X, Y, branch


def _cancel_numpy(a, b, x, y, n, square):
    d = a * a + n * b * b
    live = d != 0
    dd = np.where(live, d, 1)
    u_plus = a * x + n * b * y
    v_plus = a * y - b * x
    u_minus = a * x - n * b * y
    v_minus = a * y + b * x
    plus = live & (v_plus % dd == 0) & (u_plus % dd == 0)
    minus = live & ~plus & (v_minus % dd == 0) & (u_minus % dd == 0)
    X = np.full(a.shape, -1, dtype=np.int64)
    Y = np.full(a.shape, -1, dtype=np.int64)
    branch = np.zeros(a.shape, dtype=np.int64)
    X[plus] = np.abs(u_plus[plus]) // dd[plus]
    Y[plus] = np.abs(v_plus[plus]) // dd[plus]
    branch[plus] = BRANCH_PLUS
    X[minus] = np.abs(u_minus[minus]) // dd[minus]
    Y[minus] = np.abs(v_minus[minus]) // dd[minus]
    branch[minus] = BRANCH_MINUS
    if square:
        q = np.sqrt(dd.astype(np.float64)).astype(np.int64)
        q -= (q * q > dd).astype(np.int64)
        q += ((q + 1) * (q + 1) <= dd).astype(np.int64)
        common = live & ~plus & ~minus & (q * q == dd) & (x % q == 0) & (y % q == 0)
        X[common] = x[common] // q[common]
        Y[common] = y[common] // q[common]
        branch[common] = BRANCH_COMMON
    return X, Y, branch


def cancel_batch(a, b, x, y, n, square=False, backend=None):
    """Vectorized cancelation of the key ``a^2 + n*b^2`` from ``x^2 + n*y^2``.

    Tries the plus branch first, then the minus branch, and (with
    ``square=True``, key value a perfect square ``q^2``) finally the
    common-divisor branch ``(x/q, y/q)``. Returns ``(X, Y, branch)``;
    ``branch == BRANCH_FAIL`` marks entries where no branch applies, i.e.
    the key value does not divide the big value.
    """
    (a, b, x, y), shape = _as_int64(a, b, x, y)
    _check_coords(a, b, x, y)
    if _resolve(backend) == "numba":
        X, Y, br = _cancel_jit(a, b, x, y, np.int64(n), bool(square))
    else:
        X, Y, br = _cancel_numpy(a, b, x, y, n, square)
    return X.reshape(shape), Y.reshape(shape), br.reshape(shape)
