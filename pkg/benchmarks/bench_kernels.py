"""Time each batch kernel on the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]
"""

import argparse
import time

import numpy as np

from quadrep import kernels


def _cases(scale):
    rng = np.random.default_rng(0)
    limit = int(10**7 * scale)
    values = rng.integers(0, int(10**9 * scale), size=int(20000 * scale))
    size = int(2 * 10**6 * scale)
    a, b, x, y = (rng.integers(0, 1000, size=size) for _ in range(4))
    # keys of prime value 41 = 6^2 + 5, bigs that 41 divides
    big_x, big_y = kernels.compose_batch(6, 1, x, y, 5)
    return {
        "sieve_primes": lambda be: kernels.sieve_primes(limit, backend=be),
        "smallest_factor_table": lambda be: kernels.smallest_factor_table(limit, backend=be),
        "oracle_batch": lambda be: kernels.oracle_batch(values, 5, backend=be),
        "compose_batch": lambda be: kernels.compose_batch(a, b, x, y, 5, backend=be),
        "compose_form_batch": lambda be: kernels.compose_form_batch(a - 500, b, x - 500, y, backend=be),
        "cancel_batch": lambda be: kernels.cancel_batch(6, 1, big_x, big_y, 5, backend=be),
    }


def _best(fn, backend, repeat):
    fn(backend)  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--scale", type=float, default=1.0, help="multiply problem sizes")
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    print(f"{'kernel':<24}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in _cases(args.scale).items():
        times = {b: _best(fn, b, args.repeat) for b in backends}
        row = f"{name:<24}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
        if len(backends) == 2:
            row += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
