"""Exact rational matrices and their characteristic polynomials."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt, lcm
from typing import Iterable, Sequence, Union

import numpy as np

from . import _kernels
from .poly import UniPoly, rat_str, to_rat


class RatMatrix:
    """Immutable row-major matrix over Q."""

    __slots__ = ("rows", "cols", "_e", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[Union[int, str, Fraction]]):
        e = tuple(to_rat(v) for v in entries)
        if rows < 0 or cols < 0 or rows * cols != len(e):
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(e)}")
        self.rows = rows
        self.cols = cols
        self._e = e
        self._hash = None

    # construction --------------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Union[int, str, Fraction]]]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "RatMatrix":
        return cls(r, c, [0] * (r * c))

    # views -----------------------------------------------------------------------
    @property
    def entries(self) -> tuple[Fraction, ...]:
        return self._e

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._e[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._e[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self._e[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._e)

    def to_int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return [[v.numerator for v in self.row(i)] for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._e) == (other.rows, other.cols, other._e)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._e))
        return self._hash

    def __repr__(self) -> str:
        return f"RatMatrix({self.to_json()})"

    # arithmetic ------------------------------------------------------------------
    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols, (a + b for a, b in zip(self._e, other._e)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols, (a - b for a, b in zip(self._e, other._e)))

    def scale(self, s) -> "RatMatrix":
        s = to_rat(s)
        return RatMatrix(self.rows, self.cols, (v * s for v in self._e))

    def _same_shape(self, other: "RatMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in cols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
        return RatMatrix(self.rows, other.cols, out)

    def matvec(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(self.row(i), v) if a and b), Fraction(0)) for i in range(self.rows)]

    def __pow__(self, n: int) -> "RatMatrix":
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if n < 0:
            raise ValueError("negative matrix power")
        result = RatMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign = 1
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            for i in range(k + 1, n):
                if a[i][k]:
                    f = a[i][k] / a[k][k]
                    for j in range(k, n):
                        a[i][j] -= f * a[k][j]
        out = Fraction(sign)
        for k in range(n):
            out *= a[k][k]
        return out

    def rank(self) -> int:
        a = self.to_rows()
        rank = 0
        for c in range(self.cols):
            piv = next((i for i in range(rank, self.rows) if a[i][c] != 0), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            for i in range(self.rows):
                if i != rank and a[i][c]:
                    f = a[i][c] / a[rank][c]
                    for j in range(c, self.cols):
                        a[i][j] -= f * a[rank][j]
            rank += 1
        return rank

    # serialisation ----------------------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[rat_str(v) for v in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]]) -> "RatMatrix":
        return cls.from_rows([[to_rat(v) for v in row] for row in rows])

    def to_text(self) -> str:
        cells = [[rat_str(v) for v in self.row(i)] for i in range(self.rows)]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


# ---------------------------------------------------------------------------
# characteristic polynomial


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _prime(k: int) -> int:
    """The k-th prime below 2^31, counting downwards."""
    start = (1 << 31) - 1 if k == 0 else _prime(k - 1) - 2
    if start % 2 == 0:
        start -= 1
    while not _is_prime(start):
        start -= 2
    return start


def _coefficient_bound(a: list[list[int]]) -> int:
    """Upper bound for |coefficients| of det(xI - a): 2^n * prod max(1, row norm)."""
    bound = 1 << len(a)
    for row in a:
        norm = isqrt(sum(v * v for v in row)) + 1
        bound *= max(1, norm)
    return bound


def int_charpoly(a: list[list[int]], backend: str | None = None) -> list[int]:
    """Exact integer coefficients (low to high) of det(xI - a) by multi-modular CRT."""
    n = len(a)
    if n == 0:
        return [1]
    bound = _coefficient_bound(a)
    modulus = 1
    coeffs = [0] * (n + 1)
    k = 0
    while modulus <= 2 * bound:
        p = _prime(k)
        k += 1
        arr = np.array([[v % p for v in row] for row in a], dtype=np.int64)
        res = _kernels.charpoly_mod(arr, p, backend)
        # Garner-style incremental CRT
        inv = pow(modulus % p, p - 2, p)
        for i in range(n + 1):
            r = int(res[i])
            t = ((r - coeffs[i]) % p) * inv % p
            coeffs[i] += modulus * t
        modulus *= p
    half = modulus // 2
    return [c - modulus if c > half else c for c in coeffs]


def charpoly(m: RatMatrix, backend: str | None = None) -> UniPoly:
    """Monic characteristic polynomial det(xI - M), computed exactly."""
    if not m.is_square:
        raise ValueError("charpoly of a non-square matrix")
    n = m.rows
    den = 1
    for v in m.entries:
        den = lcm(den, v.denominator)
    a = [[int(v * den) for v in m.row(i)] for i in range(n)]
    c = int_charpoly(a, backend)
    # det(xI - A/den) = den^{-n} det(den x I - A)
    return UniPoly(Fraction(c[k], den ** (n - k)) for k in range(n + 1))


def charpoly_cofactor(m: RatMatrix) -> UniPoly:
    """Reference characteristic polynomial by Laplace expansion (small sizes only)."""
    if not m.is_square:
        raise ValueError("charpoly of a non-square matrix")
    n = m.rows
    x = UniPoly.x()
    mat = [[(x if i == j else UniPoly()) - m[i, j] for j in range(n)] for i in range(n)]

    def det(rows: list[int], cols: tuple[int, ...]) -> UniPoly:
        if not rows:
            return UniPoly.const(1)
        r = rows[0]
        total = UniPoly()
        for idx, c in enumerate(cols):
            entry = mat[r][c]
            if entry.is_zero():
                continue
            minor = det(rows[1:], cols[:idx] + cols[idx + 1:])
            term = entry * minor
            total = total + term if idx % 2 == 0 else total - term
        return total

    return det(list(range(n)), tuple(range(n)))


def poly_of_matrix(p: UniPoly, m: RatMatrix) -> RatMatrix:
    """Evaluate p(M) by Horner's rule."""
    if not m.is_square:
        raise ValueError("square matrix required")
    acc = RatMatrix.zeros(m.rows, m.cols)
    ident = RatMatrix.identity(m.rows)
    for c in reversed(p.coeffs):
        acc = acc @ m + ident.scale(c)
    return acc
