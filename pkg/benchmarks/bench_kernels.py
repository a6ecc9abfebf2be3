"""Time the set-function kernels under both backends.

    python benchmarks/bench_kernels.py [--n 12] [--repeat 5]

Builds a belief function on ``2**n`` events from random masses, scales it
to int64 and times Mobius inversion, the zeta transform and the
2-monotonicity scan. Both backends must agree exactly; the script exits
non-zero otherwise.
"""

import argparse
import random
import sys
import time
from fractions import Fraction

import numpy as np

from credalkit import _kernels


def belief_array(n, rng, focal=8, den=16):
    size = 1 << n
    masses = np.zeros(size, dtype=np.int64)
    left = den
    for k in range(focal):
        share = left if k == focal - 1 else rng.randint(0, left)
        masses[rng.randrange(1, size)] += share
        left -= share
    return _kernels.zeta(masses, n, backend="numpy")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _kernels.njit is None:
        print("numba unavailable (or CREDALKIT_PURE_NUMPY set): timing numpy only")
    backends = ["numpy"] + (["numba"] if _kernels.njit is not None else [])
    rng = random.Random(args.seed)
    n = args.n
    bel = belief_array(n, rng)
    # a 2-monotone input makes the scan visit every pair
    kernels = {
        "mobius": lambda b: _kernels.mobius(bel, n, backend=b),
        "zeta": lambda b: _kernels.zeta(bel, n, backend=b),
        "2-monotone scan": lambda b: _kernels.first_2mon_violation(bel, backend=b),
    }
    if "numba" in backends:
        small = belief_array(3, rng)
        _kernels.mobius(small, 3, backend="numba")
        _kernels.zeta(small, 3, backend="numba")
        _kernels.first_2mon_violation(small, backend="numba")

    print(f"n = {n} ({1 << n} events), best of {args.repeat}")
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    ok = True
    for name, fn in kernels.items():
        row, outs = [], []
        for b in backends:
            t, out = best_of(lambda: fn(b), args.repeat)
            row.append(t)
            outs.append(out)
        if len(outs) == 2:
            same = np.array_equal(outs[0], outs[1]) if isinstance(outs[0], np.ndarray) else outs[0] == outs[1]
            ok &= bool(same)
        line = f"{name:<18}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row)
        if len(row) == 2:
            line += f"{row[0] / row[1]:>11.1f}x"
        print(line)
    total = Fraction(int(bel[-1]), 16)
    print(f"belief of the full space: {total}")
    if not ok:
        print("backends disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
