"""Set-function kernels over the ``2**n`` event lattice.

Set functions are arrays indexed by event bitmask. Exact rationals are
scaled to a common denominator and processed as ``int64``; two backends
exist for each kernel:

* ``numba``  -- ``@njit`` loops (default when numba imports),
* ``numpy``  -- vectorised numpy, also used on ``object`` arrays of
  ``Fraction`` when scaling would overflow ``int64``.

Set ``CREDALKIT_PURE_NUMPY=1`` to force the numpy backend.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Sequence

import numpy as np


def _numba_wanted() -> bool:
    return os.environ.get("CREDALKIT_PURE_NUMPY", "").lower() not in ("1", "true", "yes")


try:
    if not _numba_wanted():
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised with the env flag
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


def scale(values: Sequence[Fraction], terms: int = 1):
    """``(int64 array, denominator)``, or ``(object array, None)`` when sums
    of ``terms`` scaled values could overflow ``int64``."""
    limit = (1 << 62) // max(terms, 1)
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
        if den > limit:
            break
    if den <= limit and all(abs(v.numerator) * (den // v.denominator) <= limit for v in values):
        return np.array([v.numerator * (den // v.denominator) for v in values], dtype=np.int64), den
    return np.array(list(values), dtype=object), None


def unscale(arr, den) -> list[Fraction]:
    if den is None:
        return [Fraction(v) for v in arr]
    return [Fraction(int(v), den) for v in arr]


# ---------------------------------------------------------------- numpy path

def _first_2mon_violation_numpy(f: np.ndarray) -> tuple[int, int]:
    idx = np.arange(len(f))
    for a in range(len(f)):
        bad = np.flatnonzero(f[a] + f > f[a | idx] + f[a & idx])
        if bad.size:
            return a, int(bad[0])
    return -1, -1


def _mobius_numpy(f: np.ndarray, n: int) -> np.ndarray:
    out = f.copy()
    for i in range(n):
        v = out.reshape(-1, 2, 1 << i)
        v[:, 1, :] -= v[:, 0, :]
    return out


def _zeta_numpy(m: np.ndarray, n: int) -> np.ndarray:
    out = m.copy()
    for i in range(n):
        v = out.reshape(-1, 2, 1 << i)
        v[:, 1, :] += v[:, 0, :]
    return out


# ---------------------------------------------------------------- numba path

if njit is not None:

    @njit(cache=True)
    def _first_2mon_violation_numba(f):
        size = f.shape[0]
        for a in range(size):
            fa = f[a]
            for b in range(size):
                if fa + f[b] > f[a | b] + f[a & b]:
                    return a, b
        return -1, -1

    @njit(cache=True)
    def _mobius_numba(f, n):
        out = f.copy()
        for i in range(n):
            bit = 1 << i
            for mask in range(out.shape[0]):
                if mask & bit:
                    out[mask] -= out[mask ^ bit]
        return out

    @njit(cache=True)
    def _zeta_numba(m, n):
        out = m.copy()
        for i in range(n):
            bit = 1 << i
            for mask in range(out.shape[0]):
                if mask & bit:
                    out[mask] += out[mask ^ bit]
        return out


def _use_numba(arr: np.ndarray, backend: str | None) -> bool:
    backend = backend or BACKEND
    if backend == "numba" and njit is None:
        raise RuntimeError("numba backend requested but numba is unavailable")
    return backend == "numba" and arr.dtype == np.int64


def first_2mon_violation(f: np.ndarray, backend: str | None = None) -> tuple[int, int]:
    """Lexicographically first ``(A, B)`` with ``f(A)+f(B) > f(A|B)+f(A&B)``; ``(-1, -1)`` if none."""
    if _use_numba(f, backend):
        a, b = _first_2mon_violation_numba(f)
        return int(a), int(b)
    return _first_2mon_violation_numpy(f)


def mobius(f: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    if _use_numba(f, backend):
        return _mobius_numba(f, n)
    return _mobius_numpy(f, n)


def zeta(m: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    if _use_numba(m, backend):
        return _zeta_numba(m, n)
    return _zeta_numpy(m, n)
