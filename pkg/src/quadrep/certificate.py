"""Replayable descent certificates.

A certificate is the sequence of moves a descent made, starting from a
seed ``x^2 + n = p*r``. :func:`verify` replays it using nothing but integer
arithmetic. It deliberately re-implements each identity check instead of
calling :mod:`quadrep.quadform`, so a bug in the prover cannot be masked
by the same bug in the checker.

Text format (UTF-8, LF line endings, single spaces, canonical decimals)::

    CERT n=5 target=29
    SEED p=29 r=6 out=(13,1)
    COMPOSE key=(1,1) in=(13,1) out=(18,12) branch=plus
    CANCELSQUARE key=(2,1) in=(18,12) out=(6,4) branch=common-divisor
    HALVE in=(6,4) out=(3,2)
    FINAL (3,2)

Field order per kind is fixed; see ``_LINE_FIELDS``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple, Optional, Tuple

from .arith import is_prime
from .errors import CertificateParseError, InvalidArgumentError
from .quadform import SUPPORTED_N, QuadRep

Pair = Tuple[int, int]


class StepKind(str, enum.Enum):
    SEED = "SEED"
    STRIP_FIVE = "STRIPFIVE"
    CANCEL_PRIME = "CANCELPRIME"
    CANCEL_SQUARE = "CANCELSQUARE"
    HALVE = "HALVE"
    COMPOSE = "COMPOSE"
    SQUARE = "SQUARE"
    FORM_CONVERT = "FORMCONVERT"


@dataclass(frozen=True)
class Step:
    kind: StepKind
    out: Pair
    inp: Optional[Pair] = None
    key: Optional[Pair] = None
    branch: Optional[str] = None
    p: Optional[int] = None
    r: Optional[int] = None


@dataclass(frozen=True)
class Certificate:
    target: int
    n: int
    steps: Tuple[Step, ...]
    final: QuadRep


class VerifyResult(NamedTuple):
    ok: bool
    step: Optional[int] = None  # 1-based step number, None for header/final checks
    reason: str = ""

    def __bool__(self):
        return self.ok

    def describe(self):
        if self.ok:
            return "ok"
        where = f"step {self.step}" if self.step is not None else "certificate"
        return f"{where}: {self.reason}"


# --------------------------------------------------------------------------
# verification


class _Reject(Exception):
    pass


def _need(cond, reason):
    if not cond:
        raise _Reject(reason)


def _nonneg(pair, what):
    _need(pair is not None and len(pair) == 2, f"missing {what}")
    _need(pair[0] >= 0 and pair[1] >= 0, f"negative coordinate in {what}")


def _val(n, pair):
    return pair[0] * pair[0] + n * pair[1] * pair[1]


def _check_quotient(n, key, inp, out, d, branch):
    a, b = key
    x, y = inp
    if branch == "plus":
        u, v = a * x + n * b * y, a * y - b * x
    elif branch == "minus":
        u, v = a * x - n * b * y, a * y + b * x
    else:
        raise _Reject(f"bad branch {branch!r}")
    _need(v % d == 0, f"{d} does not divide {v}")
    _need(u % d == 0, f"{d} does not divide {u}")
    _need(out == (abs(u) // d, abs(v) // d), "quotient mismatch")


def _check_step(cert, step, index):
    n = cert.n
    kind = step.kind
    if kind is not StepKind.SEED:
        _nonneg(step.inp, "in")
    if kind is not StepKind.FORM_CONVERT:
        _nonneg(step.out, "out")

    if kind is StepKind.SEED:
        _need(index == 0, "seed must be the first step")
        p, r = step.p, step.r
        _need(p is not None and r is not None, "seed needs p and r")
        x, y = step.out
        _need(y == 1, "seed must have y = 1")
        _need(is_prime(p), f"seed modulus {p} is not prime")
        _need(x * x + n == p * r, f"{x}^2 + {n} != {p}*{r}")
        _need(r < p, f"seed cofactor {r} is not below {p}")
        if n == 5:
            _need(2 * x <= p - 1, f"seed root {x} exceeds (p-1)/2")
        _need(cert.target % p == 0, f"seed prime {p} does not divide target")
    elif kind is StepKind.STRIP_FIVE:
        x, y = step.inp
        _need(n == 5, "strip-five needs n = 5")
        _need(x % 5 == 0, f"5 does not divide {x}")
        _need(step.out == (y, x // 5), "strip-five mismatch")
    elif kind is StepKind.CANCEL_PRIME:
        _nonneg(step.key, "key")
        d = _val(n, step.key)
        _need(d >= 2 and is_prime(d), f"key value {d} is not prime")
        _check_quotient(n, step.key, step.inp, step.out, d, step.branch)
    elif kind is StepKind.CANCEL_SQUARE:
        _nonneg(step.key, "key")
        a, b = step.key
        d = _val(n, step.key)
        q = isqrt(d)
        _need(q * q == d, f"key value {d} is not a square")
        _need(q % 2 == 1 and is_prime(q), f"{q} is not an odd prime")
        _need(a != 0 and b != 0, "key is trivial")
        _need(_val(n, step.inp) % d == 0, f"{d} does not divide the input")
        if step.branch == "common-divisor":
            x, y = step.inp
            _need(x % q == 0 and y % q == 0, f"{q} is not a common divisor")
            _need(step.out == (x // q, y // q), "common-divisor mismatch")
        else:
            _check_quotient(n, step.key, step.inp, step.out, d, step.branch)
    elif kind is StepKind.HALVE:
        x, y = step.inp
        _need(n == 5, "halve needs n = 5")
        _need(x % 2 == 0 and y % 2 == 0, "halve needs even coordinates")
        _need(step.out == (x // 2, y // 2), "halve mismatch")
    elif kind is StepKind.COMPOSE:
        _nonneg(step.key, "key")
        a, b = step.key
        x, y = step.inp
        s = {"plus": 1, "minus": -1}.get(step.branch)
        _need(s is not None, f"bad branch {step.branch!r}")
        _need(step.out == (abs(a * x + s * n * b * y), abs(a * y - s * b * x)), "compose mismatch")
    elif kind is StepKind.SQUARE:
        a, b = step.inp
        s = _val(5, step.inp)
        _need(n == 5, "square needs n = 5")
        _need(s % 2 == 1 and s % 5 != 0, f"{s} must be odd and prime to 5")
        _need(a != 0 and b != 0 and gcd(a, b) == 1, "square needs a nontrivial proper input")
        _need(step.out == (abs(a * a - 5 * b * b), 2 * a * b), "square mismatch")
    elif kind is StepKind.FORM_CONVERT:
        x, y = step.inp
        xp, y2 = step.out
        _need(n == 5, "form conversion needs n = 5")
        _need(x % 2 == 1 and y % 2 == 1, "form conversion needs odd coordinates")
        _need(y2 == y and x == 2 * xp + y, "form conversion mismatch")
        _need(index == len(cert.steps) - 1, "form conversion must be the last step")
    else:  # pragma: no cover
        raise _Reject(f"unknown kind {kind!r}")


def verify(cert):
    """Replay ``cert``; returns a truthy :class:`VerifyResult` on success."""
    try:
        _need(cert.n in SUPPORTED_N, f"unsupported n={cert.n}")
        _need(cert.target >= 1, "target must be positive")
    except _Reject as exc:
        return VerifyResult(False, None, str(exc))
    prev = None
    for i, step in enumerate(cert.steps):
        try:
            _check_step(cert, step, i)
            if step.kind is not StepKind.SEED:
                _need(prev is not None, "chain does not start with a seed")
                _need(step.inp == prev, f"input {step.inp} does not match previous output {prev}")
            if step.kind is not StepKind.FORM_CONVERT:
                prev = step.out
        except _Reject as exc:
            return VerifyResult(False, i + 1, f"{step.kind.value}: {exc}")
    final = cert.final
    if final.n != cert.n:
        return VerifyResult(False, None, "final rep uses a different n")
    if prev is not None and final.pair != prev:
        return VerifyResult(False, None, f"final {final.pair} does not match last output {prev}")
    if final.value != cert.target:
        return VerifyResult(False, None, f"final value {final.value} != target {cert.target}")
    return VerifyResult(True)


# --------------------------------------------------------------------------
# text format

_NUM = r"(0|[1-9][0-9]*)"
_SNUM = r"(0|-?[1-9][0-9]*)"
_PAIR = rf"\({_NUM},{_NUM}\)"
_SPAIR = rf"\({_SNUM},{_NUM}\)"
_BRANCH = r"(plus|minus|common-divisor)"

_LINE_FIELDS = {
    StepKind.SEED: ("p", "r", "out"),
    StepKind.STRIP_FIVE: ("in", "out"),
    StepKind.CANCEL_PRIME: ("key", "in", "out", "branch"),
    StepKind.CANCEL_SQUARE: ("key", "in", "out", "branch"),
    StepKind.HALVE: ("in", "out"),
    StepKind.COMPOSE: ("key", "in", "out", "branch"),
    StepKind.SQUARE: ("in", "out"),
    StepKind.FORM_CONVERT: ("in", "out"),
}

_FIELD_PATTERNS = {"p": _NUM, "r": _NUM, "key": _PAIR, "in": _PAIR, "out": _PAIR, "branch": _BRANCH}


def _line_regex(kind):
    parts = [re.escape(kind.value)]
    for name in _LINE_FIELDS[kind]:
        pat = _FIELD_PATTERNS[name]
        if kind is StepKind.FORM_CONVERT and name == "out":
            pat = _SPAIR
        parts.append(f"{name}={pat}")
    return re.compile(" ".join(parts))


_LINE_RE = {kind: _line_regex(kind) for kind in StepKind}
_HEADER_RE = re.compile(rf"CERT n={_NUM} target={_NUM}")
_FINAL_RE = re.compile(rf"FINAL {_PAIR}")


def _fmt_pair(pair):
    return f"({pair[0]},{pair[1]})"


def _format_step(step):
    fields = []
    for name in _LINE_FIELDS[step.kind]:
        if name == "p":
            fields.append(f"p={step.p}")
        elif name == "r":
            fields.append(f"r={step.r}")
        elif name == "key":
            fields.append(f"key={_fmt_pair(step.key)}")
        elif name == "in":
            fields.append(f"in={_fmt_pair(step.inp)}")
        elif name == "out":
            fields.append(f"out={_fmt_pair(step.out)}")
        elif name == "branch":
            fields.append(f"branch={step.branch}")
    return " ".join([step.kind.value, *fields])


def serialize(cert):
    lines = [f"CERT n={cert.n} target={cert.target}"]
    lines.extend(_format_step(s) for s in cert.steps)
    lines.append(f"FINAL {_fmt_pair(cert.final.pair)}")
    return "\n".join(lines) + "\n"


def _parse_step(line, lineno):
    kind_tag = line.split(" ", 1)[0]
    try:
        kind = StepKind(kind_tag)
    except ValueError:
        raise CertificateParseError(lineno, f"unknown step kind {kind_tag!r}") from None
    m = _LINE_RE[kind].fullmatch(line)
    if m is None:
        raise CertificateParseError(lineno, f"malformed {kind.value} line")
    groups = iter(m.groups())
    kw = {}
    for name in _LINE_FIELDS[kind]:
        if name in ("p", "r"):
            kw[name] = int(next(groups))
        elif name == "branch":
            kw["branch"] = next(groups)
        else:
            pair = (int(next(groups)), int(next(groups)))
            kw["inp" if name == "in" else name] = pair
    return Step(kind=kind, **kw)


def deserialize(text):
    """Parse certificate text; raises :class:`CertificateParseError`."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError:
            raise CertificateParseError(1, "not UTF-8") from None
    if "\r" in text:
        raise CertificateParseError(text[: text.index("\r")].count("\n") + 1, "CR line ending")
    if not text.endswith("\n"):
        raise CertificateParseError(text.count("\n") + 1, "missing final newline")
    lines = text[:-1].split("\n")
    m = _HEADER_RE.fullmatch(lines[0])
    if m is None:
        raise CertificateParseError(1, "expected 'CERT n=<n> target=<m>'")
    n, target = int(m.group(1)), int(m.group(2))
    if n not in SUPPORTED_N:
        raise CertificateParseError(1, f"unsupported n={n}")
    steps = []
    final = None
    for lineno, line in enumerate(lines[1:], start=2):
        if final is not None:
            raise CertificateParseError(lineno, "content after FINAL")
        if line.startswith("FINAL"):
            fm = _FINAL_RE.fullmatch(line)
            if fm is None:
                raise CertificateParseError(lineno, "malformed FINAL line")
            final = QuadRep(n, int(fm.group(1)), int(fm.group(2)))
            continue
        steps.append(_parse_step(line, lineno))
    if final is None:
        raise CertificateParseError(len(lines) + 1, "missing FINAL line")
    return Certificate(target=target, n=n, steps=tuple(steps), final=final)


def load(path):
    with open(path, "rb") as fh:
        return deserialize(fh.read())


def dump(cert, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(cert))


def trivial_certificate(rep):
    """Certificate for a value that needs no descent (e.g. ``5 = 0^2 + 5*1^2``)."""
    if not isinstance(rep, QuadRep):
        raise InvalidArgumentError("expected a QuadRep")
    return Certificate(target=rep.value, n=rep.n, steps=(), final=rep)
