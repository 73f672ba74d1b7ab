"""Exhaustive enumeration of ``x^2 + n*y^2 = m``: ground truth at desk scale.

Shares no code with the descent. The bound defaults to 10**8 and can be
raised or lowered with ``QUADREP_ORACLE_BOUND``.
"""

from __future__ import annotations

import os
from math import isqrt

from .errors import InvalidArgumentError, OracleBoundError
from .quadform import SUPPORTED_N, QuadRep

DEFAULT_ORACLE_BOUND = 10**8


def oracle_bound():
    raw = os.environ.get("QUADREP_ORACLE_BOUND")
    if raw is None or not raw.strip():
        return DEFAULT_ORACLE_BOUND
    try:
        return int(raw)
    except ValueError:
        raise InvalidArgumentError(f"QUADREP_ORACLE_BOUND={raw!r} is not an integer") from None


def brute_force_rep(m, n, require_nontrivial=False, bound=None):
    """All ``QuadRep(n, x, y)`` of value ``m``, sorted by x."""
    if n not in SUPPORTED_N:
        raise InvalidArgumentError(f"n must be one of {SUPPORTED_N}")
    if m < 0:
        raise InvalidArgumentError("m must be nonnegative")
    limit = oracle_bound() if bound is None else bound
    if m > limit:
        raise OracleBoundError(f"{m} exceeds the oracle bound {limit}")
    found = []
    for y in range(isqrt(m // n), -1, -1):
        rem = m - n * y * y
        x = isqrt(rem)
        if x * x == rem and not (require_nontrivial and (x == 0 or y == 0)):
            found.append(QuadRep(n, x, y))
    return found
