"""Command-line front end.

Exit codes: 0 ok, 2 not prime, 3 wrong residue class, 4 out of range,
5 certificate parse error, 6 verification failure. Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from . import certificate
from .arith import MAX_VALUE
from .descent import REPRESENTABLE_CLASSES, represent, represent_form_2_2_3, represent_pair
from .errors import (
    CertificateParseError,
    NotPrimeError,
    NotRepresentableError,
    OutOfRangeError,
)
from .kernels import sieve_primes

EXIT_OK = 0
EXIT_NOT_PRIME = 2
EXIT_WRONG_CLASS = 3
EXIT_OUT_OF_RANGE = 4
EXIT_PARSE_ERROR = 5
EXIT_VERIFY_FAILED = 6

# The scan sieves every integer up to --max, so it is capped well below 2**64.
SCAN_LIMIT = 10**9

_SCAN_CHUNK = 512


def _err(msg):
    print(msg, file=sys.stderr)


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not positive")
    return value


def _class_list(text):
    try:
        residues = {int(t) % 20 for t in text.split(",") if t.strip()}
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list") from None
    if not residues:
        raise argparse.ArgumentTypeError("empty class list")
    return residues


def _run_descent(fn, *args):
    """Call a representation routine, mapping failures to (None, exit code)."""
    try:
        return fn(*args), EXIT_OK
    except OutOfRangeError as exc:
        _err(str(exc))
        return None, EXIT_OUT_OF_RANGE
    except NotPrimeError as exc:
        _err(str(exc))
        return None, EXIT_NOT_PRIME
    except NotRepresentableError as exc:
        _err(str(exc))
        return None, EXIT_WRONG_CLASS


def cmd_repr(args):
    res, code = _run_descent(represent, args.p, args.n)
    if res is None:
        return code
    rep, cert = res
    print(f"{args.p} = {rep.x}^2 + {rep.n}*{rep.y}^2")
    if args.cert:
        certificate.dump(cert, args.cert)
    return EXIT_OK


def cmd_pair(args):
    res, code = _run_descent(represent_pair, args.q, args.q2)
    if res is None:
        return code
    rep, cert = res
    print(f"{args.q * args.q2} = {rep.x}^2 + 5*{rep.y}^2")
    if args.cert:
        certificate.dump(cert, args.cert)
    return EXIT_OK


def cmd_form(args):
    form, code = _run_descent(represent_form_2_2_3, args.p)
    if form is None:
        return code
    print(f"{args.p} = 2*({form.xp})^2 + 2*({form.xp})*{form.y} + 3*{form.y}^2")
    return EXIT_OK


def _scan_chunk(primes, n, full_verify):
    rows = []
    for p in primes:
        rep, cert = represent(p, n)
        ok = rep.value == p
        if full_verify:
            ok = ok and bool(certificate.verify(cert))
        rows.append((p, p % 20, rep.x, rep.y, ok))
    return rows


def scan_primes(n, max_value, classes=None):
    mod, residues = REPRESENTABLE_CLASSES[n]
    return [
        int(p)
        for p in sieve_primes(max_value)
        if p % mod in residues and (classes is None or p % 20 in classes)
    ]


def cmd_scan(args):
    if args.max > SCAN_LIMIT:
        _err(f"--max {args.max} exceeds the scan limit {SCAN_LIMIT}")
        return EXIT_OUT_OF_RANGE
    primes = scan_primes(args.n, args.max, args.classes)
    chunks = [primes[i : i + _SCAN_CHUNK] for i in range(0, len(primes), _SCAN_CHUNK)]
    if args.jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            # map() yields in submission order, so rows stay sorted by p.
            results = pool.map(
                _scan_chunk, chunks, [args.n] * len(chunks), [args.verify] * len(chunks)
            )
            batches = list(results)
    else:
        batches = [_scan_chunk(c, args.n, args.verify) for c in chunks]
    verified = 0
    out = sys.stdout
    for batch in batches:
        for p, cls, x, y, ok in batch:
            verified += ok
            out.write(f"{p}\t{cls}\t{x}\t{y}\t{'ok' if ok else 'FAIL'}\n")
    out.write(f"{len(primes)} primes, {verified} verified\n")
    return EXIT_OK if verified == len(primes) else EXIT_VERIFY_FAILED


def cmd_verify(args):
    try:
        cert = certificate.load(args.file)
    except CertificateParseError as exc:
        _err(f"{args.file}: parse error at {exc}")
        return EXIT_PARSE_ERROR
    except OSError as exc:
        _err(f"{args.file}: {exc.strerror or exc}")
        return EXIT_PARSE_ERROR
    result = certificate.verify(cert)
    if not result:
        _err(f"{args.file}: verification failed at {result.describe()}")
        return EXIT_VERIFY_FAILED
    print(f"ok: {cert.target} = {cert.final.x}^2 + {cert.n}*{cert.final.y}^2")
    return EXIT_OK


@lru_cache(maxsize=1)
def build_parser():
    parser = argparse.ArgumentParser(
        prog="quadrep", description="Represent primes as x^2 + n*y^2 by descent."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("repr", help="represent a prime as x^2 + n*y^2")
    p.add_argument("p", type=_positive_int)
    p.add_argument("--n", type=int, choices=(1, 2, 3, 5), default=5)
    p.add_argument("--cert", metavar="FILE")
    p.set_defaults(func=cmd_repr)

    p = sub.add_parser("pair", help="represent q*q' (3, 7 mod 20 or 2) as x^2 + 5y^2")
    p.add_argument("q", type=_positive_int)
    p.add_argument("q2", type=_positive_int, metavar="q'")
    p.add_argument("--cert", metavar="FILE")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("scan", help="tabulate representations of all primes up to --max")
    p.add_argument("--n", type=int, choices=(1, 2, 3, 5), default=5)
    p.add_argument("--max", type=_positive_int, required=True)
    p.add_argument("--classes", type=_class_list, metavar="LIST",
                   help="comma-separated residues mod 20 to keep")
    p.add_argument("--verify", action="store_true", help="replay every certificate")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("form", help="write a prime 3, 7 mod 20 as 2x^2 + 2xy + 3y^2")
    p.add_argument("p", type=_positive_int)
    p.set_defaults(func=cmd_form)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


def run():
    sys.exit(main())
