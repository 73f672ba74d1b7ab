"""Representations ``x^2 + n*y^2`` and the identities that move between them.

Coordinates are always stored nonnegative. The signed identities below
compute with signed intermediates and take absolute values at the end,
which is harmless because ``x`` and ``-x`` have the same square.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import NamedTuple

from .arith import is_prime
from .errors import DescentError, InvalidArgumentError

SUPPORTED_N = (1, 2, 3, 5)


@dataclass(frozen=True)
class QuadRep:
    """``value = x^2 + n*y^2`` with ``x, y >= 0``."""

    n: int
    x: int
    y: int
    value: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n not in SUPPORTED_N:
            raise InvalidArgumentError(f"n must be one of {SUPPORTED_N}, got {self.n}")
        if self.x < 0 or self.y < 0:
            raise InvalidArgumentError(f"coordinates must be nonnegative: ({self.x}, {self.y})")
        object.__setattr__(self, "value", self.x * self.x + self.n * self.y * self.y)

    @property
    def pair(self):
        return (self.x, self.y)

    @property
    def nontrivial(self):
        return self.x != 0 and self.y != 0

    @property
    def proper(self):
        return gcd(self.x, self.y) == 1

    def __str__(self):
        return f"{self.value} = {self.x}^2 + {self.n}*{self.y}^2"


class Branch(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    COMMON = "common-divisor"


class CancelOutcome(NamedTuple):
    result: QuadRep
    branch: Branch


def make_rep(n, x, y):
    return QuadRep(n, x, y)


def is_nontrivial(rep):
    return rep.nontrivial


def is_proper(rep):
    return rep.proper


def _sign(sign):
    if sign in ("+", 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise InvalidArgumentError(f"sign must be '+' or '-', got {sign!r}")


def _same_n(r1, r2):
    if r1.n != r2.n:
        raise InvalidArgumentError(f"mismatched forms: n={r1.n} and n={r2.n}")
    return r1.n


def compose(r1, r2, sign="+"):
    """Euler's identity with ``(a, b) = r1`` and ``(x, y) = r2``:
    ``(a^2 + nb^2)(x^2 + ny^2) = (ax +- nby)^2 + n(ay -+ bx)^2``.
    """
    n = _same_n(r1, r2)
    s = _sign(sign)
    a, b = r1.pair
    x, y = r2.pair
    return QuadRep(n, abs(a * x + s * n * b * y), abs(a * y - s * b * x))


def _quotient(key, big, d):
    # Plus branch is tried first so the choice is deterministic when both apply.
    n = key.n
    a, b = key.pair
    x, y = big.pair
    u, v = a * x + n * b * y, a * y - b * x
    if v % d == 0 and u % d == 0:
        return CancelOutcome(QuadRep(n, abs(u) // d, abs(v) // d), Branch.PLUS)
    u, v = a * x - n * b * y, a * y + b * x
    if v % d == 0 and u % d == 0:
        return CancelOutcome(QuadRep(n, abs(u) // d, abs(v) // d), Branch.MINUS)
    return None


def cancel_prime(key, big):
    """Remove the prime ``p = key.value`` from ``big.value = p*r``."""
    _same_n(key, big)
    p = key.value
    if not is_prime(p):
        raise InvalidArgumentError(f"key value {p} is not prime")
    if big.value % p:
        raise InvalidArgumentError(f"{p} does not divide {big.value}")
    out = _quotient(key, big, p)
    if out is None:
        raise DescentError(f"no cancelation branch for {key} against {big}")
    return out


def cancel_square(key, big):
    """Remove ``q^2 = key.value`` (q an odd prime, key nontrivial) from
    ``big.value = q^2 * r``.

    Falls back to dividing both coordinates by q when ``q^2`` divides
    neither ``ay - bx`` nor ``ay + bx``; that only happens when big is
    improper.
    """
    _same_n(key, big)
    q = isqrt(key.value)
    if q * q != key.value:
        raise InvalidArgumentError(f"key value {key.value} is not a square")
    if q % 2 == 0:
        raise InvalidArgumentError("even q: use halve")
    if not is_prime(q):
        raise InvalidArgumentError(f"{q} is not prime")
    if not key.nontrivial:
        raise InvalidArgumentError(f"key {key} is trivial")
    d = key.value
    if big.value % d:
        raise InvalidArgumentError(f"{d} does not divide {big.value}")
    out = _quotient(key, big, d)
    if out is not None:
        return out
    if big.x % q == 0 and big.y % q == 0:
        return CancelOutcome(QuadRep(big.n, big.x // q, big.y // q), Branch.COMMON)
    raise DescentError(f"no cancelation branch for {key} against {big}")


def halve(big):
    """``4r = x^2 + 5y^2`` forces x, y even; return ``(x/2, y/2)``."""
    if big.n != 5:
        raise InvalidArgumentError("halve applies to n = 5 only")
    if big.value % 4:
        raise InvalidArgumentError(f"4 does not divide {big.value}")
    if big.x % 2 or big.y % 2:
        raise DescentError(f"{big} has odd coordinates although 4 divides its value")
    return QuadRep(5, big.x // 2, big.y // 2)


def square_rep(s_rep):
    """``s^2 = (a^2 - 5b^2)^2 + 5(2ab)^2`` for odd s prime to 5 with a
    nontrivial proper representation; the result is again nontrivial and
    proper."""
    if s_rep.n != 5:
        raise InvalidArgumentError("square_rep applies to n = 5 only")
    s = s_rep.value
    if s % 2 == 0 or s % 5 == 0:
        raise InvalidArgumentError(f"{s} must be odd and prime to 5")
    if not (s_rep.nontrivial and s_rep.proper):
        raise InvalidArgumentError(f"{s_rep} must be nontrivial and proper")
    a, b = s_rep.pair
    return QuadRep(5, abs(a * a - 5 * b * b), 2 * a * b)
