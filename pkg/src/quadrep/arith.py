"""Exact integer services: modular powers, Legendre symbols, square roots
modulo a prime, primality and factorization.

Everything here runs on Python ints. Numba has no 128-bit product, so the
64-bit modular arithmetic cannot move into a kernel; only the sieve that
feeds trial division does.

Inputs are limited to ``MAX_VALUE = 2**64 - 1``; the Miller-Rabin witness
set below is exact on that whole range.
"""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd, isqrt
from typing import NamedTuple

from .errors import InvalidArgumentError, NoSquareRootError, OutOfRangeError
from .kernels import sieve_primes, smallest_factor_table

MAX_VALUE = (1 << 64) - 1

# The first twelve primes are a deterministic witness set for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

TRIAL_DIVISION_LIMIT = 10**6
# Values up to this bound are factored by smallest-prime-factor lookup.
SPF_LIMIT = 10**6


class PrimePower(NamedTuple):
    prime: int
    exponent: int


def check_range(m):
    if m < 0:
        raise InvalidArgumentError(f"{m} is negative")
    if m > MAX_VALUE:
        raise OutOfRangeError(f"{m} exceeds the supported bound 2**64 - 1")


def pow_mod(base, exp, modulus):
    """``base**exp mod modulus`` for ``exp >= 0``, ``modulus >= 2``."""
    if modulus < 2:
        raise InvalidArgumentError(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise InvalidArgumentError("exponent must be nonnegative")
    return pow(base, exp, modulus)


@lru_cache(maxsize=1024)
def _is_odd_prime(p):
    return p >= 3 and p % 2 == 1 and is_prime(p)


def _require_odd_prime(p):
    if not _is_odd_prime(p):
        raise InvalidArgumentError(f"{p} is not an odd prime")


def _legendre(a, p):
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def legendre(a, p):
    """Legendre symbol ``(a/p)`` in ``{-1, 0, 1}`` by Euler's criterion."""
    _require_odd_prime(p)
    return _legendre(a, p)


@lru_cache(maxsize=4096)
def _ts_constants(p):
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    return q, s, pow(z, q, p)


def _tonelli_shanks(a, p):
    q, s, c = _ts_constants(p)
    m, t, r = s, pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        if i == m:
            # t has full order 2^s only when a is a non-residue
            raise NoSquareRootError(f"{a} is not a square modulo {p}")
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _sqrt_mod(a, p):
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
        if x * x % p != a:
            raise NoSquareRootError(f"{a} is not a square modulo {p}")
    else:
        x = _tonelli_shanks(a, p)
    return min(x, p - x)


def sqrt_mod(a, p):
    """The smaller square root of ``a`` modulo the odd prime ``p``.

    The result satisfies ``x <= (p - 1) // 2``.
    """
    _require_odd_prime(p)
    return _sqrt_mod(a, p)


def _mr_round(n, d, s, a):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(m):
    check_range(m)
    if m < 2:
        return False
    for p in _MR_WITNESSES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return all(_mr_round(m, d, s, a) for a in _MR_WITNESSES)


@lru_cache(maxsize=1)
def _small_primes():
    return tuple(int(p) for p in sieve_primes(TRIAL_DIVISION_LIMIT))


@lru_cache(maxsize=1)
def _spf():
    return smallest_factor_table(SPF_LIMIT).tolist()


def _factor_small(m):
    spf = _spf()
    out = []
    while m > 1:
        p = spf[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append(PrimePower(p, e))
    return out


def _brent(m):
    """One nontrivial factor of the odd composite ``m`` (Brent's rho)."""
    rng = random.Random(m)
    while True:
        y = rng.randrange(1, m)
        c = rng.randrange(1, m)
        batch = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % m
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % m
                    q = q * abs(x - y) % m
                g = gcd(q, m)
                k += batch
            r *= 2
        if g == m:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % m
                g = gcd(abs(x - ys), m)
        if g != m:
            return g


def _rho_split(m, out):
    if m == 1:
        return
    if is_prime(m):
        out.append(m)
        return
    f = _brent(m)
    _rho_split(f, out)
    _rho_split(m // f, out)


def factorize(m):
    """Complete factorization of ``m >= 1`` as a list of ``PrimePower``.

    Values up to ``SPF_LIMIT`` use a smallest-prime-factor table. Larger
    ones get trial division by primes up to ``TRIAL_DIVISION_LIMIT``, then
    Brent's rho with a generator seeded from the cofactor, so the result
    is reproducible run to run.
    """
    check_range(m)
    if m < 1:
        raise InvalidArgumentError("factorize needs m >= 1")
    if m <= SPF_LIMIT:
        return _factor_small(m)
    counts = {}
    bound = isqrt(m)
    for p in _small_primes():
        if p > bound:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            counts[p] = e
            bound = isqrt(m)
    if m > 1:
        big = []
        _rho_split(m, big)
        for p in big:
            counts[p] = counts.get(p, 0) + 1
    return [PrimePower(p, counts[p]) for p in sorted(counts)]


def expand(factors):
    out = 1
    for p, e in factors:
        out *= p**e
    return out
