import os
import subprocess
import sys
from math import isqrt

import numpy as np
import pytest

from quadrep import kernels
from quadrep.errors import InvalidArgumentError
from quadrep.forms import Form223Val, compose_form
from quadrep.oracle import brute_force_rep
from quadrep.quadform import QuadRep, cancel_prime, cancel_square, compose

BRANCH_CODES = {"plus": kernels.BRANCH_PLUS, "minus": kernels.BRANCH_MINUS,
                "common-divisor": kernels.BRANCH_COMMON}


def test_sieve_matches_trial_division(backend):
    primes = kernels.sieve_primes(10**4, backend=backend)
    expected = [m for m in range(2, 10**4 + 1) if all(m % d for d in range(2, isqrt(m) + 1))]
    assert primes.tolist() == expected


@pytest.mark.parametrize("limit, count", [(0, 0), (1, 0), (2, 1), (100, 25), (10**6, 78498)])
def test_sieve_counts(backend, limit, count):
    assert len(kernels.sieve_primes(limit, backend=backend)) == count


def test_smallest_factor_table(backend):
    spf = kernels.smallest_factor_table(5000, backend=backend)
    for m in range(2, 5001):
        d = next(d for d in range(2, m + 1) if m % d == 0)
        assert spf[m] == d


def test_backends_agree_on_tables():
    if len(kernels.available_backends()) < 2:
        pytest.skip("numba unavailable")
    a = kernels.smallest_factor_table(10**5, backend="numba")
    b = kernels.smallest_factor_table(10**5, backend="numpy")
    assert np.array_equal(a, b)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_oracle_batch_matches_scalar_oracle(backend, n):
    values = np.arange(0, 3000)
    counts, xs, ys = kernels.oracle_batch(values, n, backend=backend)
    for m in range(3000):
        reps = brute_force_rep(m, n)
        assert counts[m] == len(reps)
        if reps:
            smallest_y = min(reps, key=lambda r: r.y)
            assert (xs[m], ys[m]) == smallest_y.pair
        else:
            assert (xs[m], ys[m]) == (-1, -1)


def test_oracle_batch_unsorted_input(backend):
    values = np.array([89, 7, 41, 21, 29])
    counts, xs, ys = kernels.oracle_batch(values, 5, backend=backend)
    assert counts.tolist() == [1, 0, 1, 2, 1]
    assert list(zip(xs.tolist(), ys.tolist()))[2] == (6, 1)


def test_oracle_batch_validation(backend):
    with pytest.raises(InvalidArgumentError):
        kernels.oracle_batch([1 << 53], 5, backend=backend)
    with pytest.raises(InvalidArgumentError):
        kernels.oracle_batch([-1], 5, backend=backend)
    with pytest.raises(InvalidArgumentError):
        kernels.oracle_batch([5], 0, backend=backend)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("sign", [1, -1])
def test_compose_batch_matches_scalar(backend, n, sign):
    g = np.arange(0, 9)
    a, b, x, y = np.meshgrid(g, g, g, g, indexing="ij")
    X, Y = kernels.compose_batch(a, b, x, y, n, sign, backend=backend)
    assert X.shape == a.shape
    s = "+" if sign == 1 else "-"
    for idx in np.ndindex(a.shape):
        ref = compose(QuadRep(n, int(a[idx]), int(b[idx])), QuadRep(n, int(x[idx]), int(y[idx])), s)
        assert (X[idx], Y[idx]) == ref.pair


def test_compose_form_batch_matches_scalar(backend):
    g = np.arange(-5, 6)
    h = np.arange(0, 6)
    x, y, a, b = np.meshgrid(g, h, g, h, indexing="ij")
    X, Y = kernels.compose_form_batch(x, y, a, b, backend=backend)
    for idx in np.ndindex(x.shape):
        ref = compose_form(Form223Val(int(x[idx]), int(y[idx])), Form223Val(int(a[idx]), int(b[idx])))
        assert (X[idx], Y[idx]) == ref.pair


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_cancel_batch_prime_matches_scalar(backend, n):
    rng = np.random.default_rng(7)
    keys = [r for a in range(12) for b in range(1, 12) for r in [QuadRep(n, a, b)]
            if all(r.value % d for d in range(2, isqrt(r.value) + 1)) and r.value > 1]
    for key in keys[:25]:
        xs = rng.integers(0, 200, size=40)
        ys = rng.integers(0, 200, size=40)
        for s in ("+", "-"):
            bigs = [compose(key, QuadRep(n, int(u), int(v)), s) for u, v in zip(xs, ys)]
            X, Y, br = kernels.cancel_batch(
                [key.x] * len(bigs), [key.y] * len(bigs),
                [r.x for r in bigs], [r.y for r in bigs], n, backend=backend,
            )
            for big, gx, gy, gb in zip(bigs, X, Y, br):
                ref = cancel_prime(key, big)
                assert (gx, gy) == ref.result.pair
                assert gb == BRANCH_CODES[ref.branch.value]


def test_cancel_batch_square_matches_scalar(backend):
    key = QuadRep(5, 2, 1)  # 9
    pairs = [(x, y) for x in range(60) for y in range(60) if (x * x + 5 * y * y) % 9 == 0]
    X, Y, br = kernels.cancel_batch(2, 1, [p[0] for p in pairs], [p[1] for p in pairs], 5,
                                    square=True, backend=backend)
    codes = set()
    for (x, y), gx, gy, gb in zip(pairs, X, Y, br):
        ref = cancel_square(key, QuadRep(5, x, y))
        assert (gx, gy) == ref.result.pair
        assert gb == BRANCH_CODES[ref.branch.value]
        codes.add(int(gb))
    assert kernels.BRANCH_COMMON in codes


def test_cancel_batch_reports_failure(backend):
    X, Y, br = kernels.cancel_batch([2, 0], [1, 0], [1, 3], [2, 1], 5, square=True, backend=backend)
    assert br.tolist() == [kernels.BRANCH_FAIL, kernels.BRANCH_FAIL]
    assert X.tolist() == [-1, -1]


def test_coordinate_limits(backend):
    with pytest.raises(InvalidArgumentError):
        kernels.compose_batch(kernels.MAX_COORD + 1, 0, 0, 0, 5, backend=backend)
    with pytest.raises(InvalidArgumentError):
        kernels.compose_batch(1, 1, 1, 1, 5, sign=2, backend=backend)


def test_unknown_backend():
    with pytest.raises(InvalidArgumentError):
        kernels.sieve_primes(10, backend="cuda")


def test_env_flag_selects_numpy():
    env = dict(os.environ, QUADREP_DISABLE_JIT="1")
    out = subprocess.run(
        [sys.executable, "-c", "from quadrep import kernels; print(kernels.default_backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
