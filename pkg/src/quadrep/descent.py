"""Descent engines.

* :func:`represent_fermat`: the classical descent for ``x^2 + n*y^2``,
  ``n`` in {1, 2, 3}. Seed ``x^2 + n = p*r`` with ``r < p``, then cancel
  the prime factors of ``r`` one at a time against representations of
  smaller primes.
* :func:`represent_n5` / :func:`represent_pair`: the ``x^2 + 5y^2``
  induction. Factors of ``r`` congruent to 1, 9 mod 20 cancel one at a
  time; factors congruent to 3, 7 mod 20 (and 2) can only be removed in
  pairs, by composing with a representation of the pair and cancelling
  squares. What is left is 1 for the first class and a single prime ``q0``
  for the second, and products with ``q0`` are then rebuilt.

Every recursive call is on primes strictly below the current one, and
results are memoized. ``functools.lru_cache`` is thread-safe, and the
cached values are immutable.
"""

from __future__ import annotations

from functools import lru_cache

from . import quadform as qf
from .arith import _sqrt_mod, check_range, factorize, is_prime
from .certificate import Certificate, Step, StepKind, trivial_certificate
from .errors import DescentError, InvalidArgumentError, NotPrimeError, NotRepresentableError
from .forms import Form223Val, double_form
from .quadform import QuadRep

# n -> (modulus, residues of representable odd primes other than n)
REPRESENTABLE_CLASSES = {
    1: (4, (1,)),
    2: (8, (1, 3)),
    3: (3, (1,)),
    5: (20, (1, 9)),
}
PAIR_CLASSES = (3, 7)


def in_class(p, n):
    mod, residues = REPRESENTABLE_CLASSES[n]
    return p % mod in residues


def _check_prime(p):
    check_range(p)
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")


def _trivial_rep(p, n):
    """Representations that need no descent: ``n = 0^2 + n*1^2``, ``2 = 1 + 1``."""
    if p == n:
        return QuadRep(n, 0, 1)
    if n == 1 and p == 2:
        return QuadRep(1, 1, 1)
    return None


class DescentState:
    """A representation of ``pi * cofactor`` plus the steps that produced it.

    Each method applies one move to ``current`` and records it.
    """

    def __init__(self, n, pi):
        self.n = n
        self.pi = pi
        x = _sqrt_mod(-n, pi)
        # Keeping x^2 + n odd for n = 1, 3 keeps 2 out of the cofactor.
        if n in (1, 3) and x % 2:
            x = pi - x
        self.current = QuadRep(n, x, 1)
        self.steps = [Step(StepKind.SEED, out=(x, 1), p=pi, r=self.cofactor)]
        if n == 5:
            # 5 | r forces 5 | x; x^2 + 5y^2 = 5(y^2 + 5(x/5)^2).
            while self.cofactor % 5 == 0:
                x, y = self.current.pair
                if x % 5:
                    raise DescentError(f"5 divides the cofactor of {self.current} but not x")
                self._record(StepKind.STRIP_FIVE, QuadRep(5, y, x // 5))

    @property
    def cofactor(self):
        return self.current.value // self.pi

    def remaining(self):
        return factorize(self.cofactor)

    def _record(self, kind, new, key=None, branch=None):
        self.steps.append(
            Step(
                kind,
                out=new.pair,
                inp=self.current.pair,
                key=None if key is None else key.pair,
                branch=None if branch is None else branch.value,
            )
        )
        self.current = new

    def cancel_prime(self, key):
        res = qf.cancel_prime(key, self.current)
        self._record(StepKind.CANCEL_PRIME, res.result, key, res.branch)

    def cancel_square(self, key):
        res = qf.cancel_square(key, self.current)
        self._record(StepKind.CANCEL_SQUARE, res.result, key, res.branch)

    def halve(self):
        self._record(StepKind.HALVE, qf.halve(self.current))

    def compose(self, key, sign):
        branch = qf.Branch.PLUS if sign == "+" else qf.Branch.MINUS
        self._record(StepKind.COMPOSE, qf.compose(key, self.current, sign), key, branch)

    def square(self):
        self._record(StepKind.SQUARE, qf.square_rep(self.current))

    def cancel_square_of(self, q):
        """Remove ``q^2``: square cancelation for odd q, halving for q = 2."""
        if q == 2:
            self.halve()
        else:
            self.cancel_square(_pair(q, q)[0])

    def certificate(self, target):
        if self.current.value != target:
            raise DescentError(f"descent ended at {self.current.value}, expected {target}")
        return Certificate(target=target, n=self.n, steps=tuple(self.steps), final=self.current)


# --------------------------------------------------------------------------
# n = 1, 2, 3


def _fermat_factor_ok(q, n):
    return in_class(q, n) or q == n or (n == 2 and q == 2)


@lru_cache(maxsize=None)
def _fermat(p, n):
    trivial = _trivial_rep(p, n)
    if trivial is not None:
        return trivial, trivial_certificate(trivial)
    state = DescentState(n, p)
    for q, e in state.remaining():
        if not _fermat_factor_ok(q, n):
            raise DescentError(f"cofactor prime {q} outside the classes for n={n}")
        key = _fermat(q, n)[0]
        for _ in range(e):
            state.cancel_prime(key)
    return state.current, state.certificate(p)


def _check_fermat_args(p, n):
    if n not in (1, 2, 3):
        raise InvalidArgumentError(f"n must be 1, 2 or 3, got {n}")
    _check_prime(p)
    if _trivial_rep(p, n) is None and not in_class(p, n):
        mod, _ = REPRESENTABLE_CLASSES[n]
        raise NotRepresentableError(
            f"{p} = {p % mod} mod {mod} is not of the form x^2 + {n}*y^2",
            residue=p % mod,
            modulus=mod,
        )


def represent_fermat(p, n):
    """Representation ``p = x^2 + n*y^2`` for ``n`` in {1, 2, 3}."""
    _check_fermat_args(p, n)
    return _fermat(p, n)[0]


# --------------------------------------------------------------------------
# n = 5


def _minimize(state):
    """Cancel the cofactor down to 1 or a single prime in {3, 7 mod 20} or 2.

    Factors 1, 9 mod 20 go first, one at a time. The rest are paired
    largest first (so 2, which occurs at most once, is paired last):
    ``q^2`` by square cancelation, ``q != q'`` by composing with a
    representation of ``q*q'`` and removing ``q^2`` and ``q'^2``.
    """
    bad = []
    for q, e in state.remaining():
        if q % 20 in (1, 9):
            key = _n5(q)[0]
            for _ in range(e):
                state.cancel_prime(key)
        elif q % 20 in PAIR_CLASSES or q == 2:
            bad.extend([q] * e)
        else:
            raise DescentError(f"cofactor prime {q} = {q % 20} mod 20 cannot divide x^2 + 5")
    bad.sort(reverse=True)
    while len(bad) >= 2:
        q, q2 = bad[0], bad[1]
        del bad[:2]
        if q == q2:
            state.cancel_square_of(q)
        else:
            state.compose(_pair(q, q2)[0], "+")
            state.cancel_square_of(q)
            state.cancel_square_of(q2)
    left = bad[0] if bad else 1
    if state.cofactor != left:
        raise DescentError(f"cofactor {state.cofactor} after minimization, expected {left}")
    return left


@lru_cache(maxsize=None)
def _n5(p):
    if p == 5:
        rep = QuadRep(5, 0, 1)
        return rep, trivial_certificate(rep)
    state = DescentState(5, p)
    left = _minimize(state)
    if left != 1:
        # p*q0 = x^2 + 5y^2 would make x^2 = +-2 mod 5.
        raise DescentError(f"descent for {p} stopped at cofactor {left}")
    return state.current, state.certificate(p)


def represent_n5(p):
    """``p = x^2 + 5y^2`` for a prime ``p = 1, 9 mod 20`` (or ``p = 5``).

    Returns ``(rep, certificate)``.
    """
    _check_prime(p)
    if p != 5 and p % 20 not in (1, 9):
        raise NotRepresentableError(
            f"{p} = {p % 20} mod 20 is not of the form x^2 + 5*y^2",
            residue=p % 20,
            modulus=20,
        )
    return _n5(p)


@lru_cache(maxsize=None)
def _pair(q, q2):
    pi, t = max(q, q2), min(q, q2)
    state = DescentState(5, pi)
    q0 = _minimize(state)
    if q0 == 1:
        # pi = 3, 7 mod 20 is never x^2 + 5y^2.
        raise DescentError(f"descent for {pi} reached cofactor 1")
    if t == q0:
        pass
    elif t == pi:
        # (pi*q0)^2 has a proper representation; remove q0^2.
        if q0 == 2:
            state.compose(state.current, "-")
        else:
            state.square()
        state.cancel_square_of(q0)
    else:
        # pi*t*q0^2 = (pi*q0)(q0*t); remove q0^2.
        state.compose(_pair(q0, t)[0], "+")
        state.cancel_square_of(q0)
    rep = state.current
    if not rep.nontrivial:
        raise DescentError(f"representation {rep} of {pi}*{t} is trivial")
    return rep, state.certificate(pi * t)


def _pair_class_ok(q):
    return q == 2 or q % 20 in PAIR_CLASSES


def represent_pair(q, q2):
    """Nontrivial ``q*q2 = x^2 + 5y^2`` for primes in {3, 7 mod 20} or 2,
    not both 2. Returns ``(rep, certificate)``."""
    _check_prime(q)
    _check_prime(q2)
    if not (_pair_class_ok(q) and _pair_class_ok(q2)) or q == q2 == 2:
        raise NotRepresentableError(
            f"({q}, {q2}): both primes must be 3, 7 mod 20 or 2, and not both 2"
        )
    return _pair(q, q2)


def _check_form_class(p):
    _check_prime(p)
    if p % 20 not in PAIR_CLASSES:
        raise NotRepresentableError(
            f"{p} = {p % 20} mod 20; expected 3 or 7 mod 20", residue=p % 20, modulus=20
        )


def represent_2p(p):
    """``2p = x^2 + 5y^2`` with x, y odd, for a prime ``p = 3, 7 mod 20``."""
    _check_form_class(p)
    rep, cert = _pair(2, p)
    if rep.x % 2 == 0 or rep.y % 2 == 0:
        raise DescentError(f"{rep} has an even coordinate")
    return rep, cert


def represent_form_2_2_3(p):
    """``p = 2x'^2 + 2x'y + 3y^2`` for a prime ``p = 3, 7 mod 20``."""
    rep, _ = represent_2p(p)
    form = Form223Val((rep.x - rep.y) // 2, rep.y)
    if form.value != p or double_form(form) != rep:
        raise DescentError(f"form conversion of {rep} failed")
    return form


def certify_form_2_2_3(p):
    """Certificate for ``2p`` ending in the conversion to ``p = 2x'^2 + 2x'y + 3y^2``."""
    form = represent_form_2_2_3(p)
    rep, cert = _pair(2, p)
    step = Step(StepKind.FORM_CONVERT, out=(form.xp, form.y), inp=rep.pair)
    return form, Certificate(cert.target, cert.n, cert.steps + (step,), cert.final)


def represent(p, n=5):
    """Dispatch on ``n``; returns ``(rep, certificate)`` for a prime p."""
    if n == 5:
        return represent_n5(p)
    _check_fermat_args(p, n)
    return _fermat(p, n)


def clear_cache():
    _fermat.cache_clear()
    _n5.cache_clear()
    _pair.cache_clear()
