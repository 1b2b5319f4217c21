"""Word-size modular kernels for the characteristic polynomial.

The exact characteristic polynomial is assembled by CRT from residues modulo
31-bit primes.  Each residue is a Hessenberg reduction over F_p followed by the
usual Hessenberg recurrence.  Products of two residues stay below 2^62, so
everything fits in int64.

Two interchangeable implementations exist: a numba ``@njit`` kernel and a
pure-numpy one.  Set ``BIRDEG_DISABLE_NUMBA=1`` to force the numpy path; it is
also used automatically when numba cannot be imported.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("BIRDEG_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:  # pragma: no cover - exercised implicitly depending on the environment
    if _DISABLED:
        raise ImportError("numba disabled by BIRDEG_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def charpoly_mod_numpy(a: np.ndarray, p: int) -> np.ndarray:
    """Coefficients (low to high) of det(xI - a) over F_p; ``a`` holds residues."""
    h = a.astype(np.int64) % p
    n = h.shape[0]
    for m in range(1, n - 1):
        nz = np.nonzero(h[m:, m - 1])[0]
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            h[[i, m], :] = h[[m, i], :]
            h[:, [i, m]] = h[:, [m, i]]
        inv = _inv_mod(h[m, m - 1], p)
        for r in range(m + 1, n):
            u = (int(h[r, m - 1]) * inv) % p
            if u:
                h[r, :] = (h[r, :] - u * h[m, :]) % p
                h[:, m] = (h[:, m] + u * h[:, r]) % p
    return _hessenberg_charpoly_numpy(h, p)


def _hessenberg_charpoly_numpy(h: np.ndarray, p: int) -> np.ndarray:
    n = h.shape[0]
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur - (int(h[m - 1, m - 1]) * prev) % p) % p
        t = 1
        for i in range(m - 1, 0, -1):
            t = (t * int(h[i, i - 1])) % p
            coef = (int(h[i - 1, m - 1]) * t) % p
            if coef:
                cur = (cur - (coef * polys[i - 1]) % p) % p
        polys[m] = cur
    return polys[n]


@njit(cache=True)
def _powmod(a, e, p):
    result = 1
    a = a % p
    while e > 0:
        if e & 1:
            result = (result * a) % p
        a = (a * a) % p
        e >>= 1
    return result


@njit(cache=True)
def charpoly_mod_numba(a, p):
    n = a.shape[0]
    h = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            h[i, j] = a[i, j] % p
    for m in range(1, n - 1):
        piv = -1
        for i in range(m, n):
            if h[i, m - 1] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != m:
            for j in range(n):
                tmp = h[piv, j]
                h[piv, j] = h[m, j]
                h[m, j] = tmp
            for i in range(n):
                tmp = h[i, piv]
                h[i, piv] = h[i, m]
                h[i, m] = tmp
        inv = _powmod(h[m, m - 1], p - 2, p)
        for r in range(m + 1, n):
            u = (h[r, m - 1] * inv) % p
            if u != 0:
                for j in range(n):
                    h[r, j] = (h[r, j] - u * h[m, j]) % p
                for i in range(n):
                    h[i, m] = (h[i, m] + u * h[i, r]) % p
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            polys[m, k] = polys[m - 1, k - 1]
        hm = h[m - 1, m - 1]
        for k in range(m):
            polys[m, k] = (polys[m, k] - hm * polys[m - 1, k]) % p
        t = 1
        for i in range(m - 1, 0, -1):
            t = (t * h[i, i - 1]) % p
            coef = (h[i - 1, m - 1] * t) % p
            if coef != 0:
                for k in range(i):
                    polys[m, k] = (polys[m, k] - coef * polys[i - 1, k]) % p
    return polys[n].copy()


def charpoly_mod(a: np.ndarray, p: int, backend: str | None = None) -> np.ndarray:
    """Dispatch to the numba kernel unless disabled or ``backend='numpy'``."""
    use = backend or ("numba" if HAVE_NUMBA else "numpy")
    if use == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        return charpoly_mod_numba(np.ascontiguousarray(a, dtype=np.int64), np.int64(p))
    if use == "numpy":
        return charpoly_mod_numpy(a, p)
    raise ValueError(f"unknown backend {backend!r}")


def default_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
