"""Dense univariate polynomials over Q, plus integer-coefficient helpers."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Rat = Fraction
Scalar = Union[int, Fraction]


def to_rat(value: Union[int, str, Fraction]) -> Fraction:
    """Parse an int, a Fraction or a string like ``"-3/4"`` into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError as exc:
            raise ValueError(f"zero denominator in {value!r}") from exc
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# integer polynomial helpers (lists of ints, index = power)


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def int_content(c: Sequence[int]) -> int:
    g = 0
    for v in c:
        g = gcd(g, v)
    return g


def int_primitive(c: Sequence[int]) -> list[int]:
    """Divide by the content and make the leading coefficient positive."""
    c = _trim(list(c))
    if not c:
        return []
    g = int_content(c)
    if c[-1] < 0:
        g = -g
    return [v // g for v in c]


def int_derivative(c: Sequence[int]) -> list[int]:
    return [i * c[i] for i in range(1, len(c))]


def int_prem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, exactly over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    k = len(a) - len(b) + 1
    if k <= 0:
        return _trim(r)
    for _ in range(k):
        if len(r) - 1 < db:
            # keep the multiplier exponent fixed so the sign rule stays simple
            r = [lb * v for v in r]
            continue
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * v for v in r]
        for i, bv in enumerate(b):
            r[i + shift] -= lr * bv
        r.pop()
        _trim(r)
        if not r:
            return []
    return _trim(r)


def int_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Primitive-PRS gcd of two integer polynomials; result primitive with lc > 0."""
    a = int_primitive(a)
    b = int_primitive(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = int_prem(a, b)
        a, b = b, int_primitive(r)
    return int_primitive(a)


def int_exact_quo(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact division a / b over Z; raises when b does not divide a."""
    r = list(a)
    _trim(r)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("division by the zero polynomial")
    lb = b[-1]
    if len(r) - 1 < db:
        if r:
            raise ArithmeticError("inexact polynomial division")
        return []
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        coef, rem = divmod(r[k], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[k - db] = coef
        if coef:
            for i, bv in enumerate(b):
                r[k - db + i] -= coef * bv
    if any(r[:db]):
        raise ArithmeticError("inexact polynomial division")
    return q


def int_eval_sign(c: Sequence[int], x: Fraction) -> int:
    """Sign of c(x) for rational x, using the homogenised integer form."""
    num, den = x.numerator, x.denominator
    acc = 0
    n = len(c) - 1
    dpow = 1
    for i in range(n, -1, -1):
        acc = acc * num + c[i] * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


# ---------------------------------------------------------------------------


class UniPoly:
    """Immutable dense polynomial over Q; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable[Union[int, str, Fraction]] = ()):
        c = [to_rat(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c: tuple[Fraction, ...] = tuple(c)
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, v: Scalar) -> "UniPoly":
        return cls((v,))

    @classmethod
    def monomial(cls, n: int, coef: Scalar = 1) -> "UniPoly":
        if n < 0:
            raise ValueError("negative exponent")
        return cls([0] * n + [coef])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "UniPoly":
        p = cls.const(1)
        for r in roots:
            p = p * cls((-to_rat(r), 1))
        return p

    # basic views ------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def lc(self) -> Fraction:
        if not self._c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def coeff(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    # arithmetic -------------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly.const(to_rat(other))

    def __add__(self, other) -> "UniPoly":
        o = self._coerce(other)
        n = max(len(self._c), len(o._c))
        return UniPoly(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-v for v in self._c)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        o = self._coerce(other)
        if not self._c or not o._c:
            return UniPoly()
        out = [Fraction(0)] * (len(self._c) + len(o._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(o._c):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple["UniPoly", "UniPoly"]:
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        dq = len(r) - len(o._c)
        if dq < 0:
            return UniPoly(), self
        q = [Fraction(0)] * (dq + 1)
        lc = o._c[-1]
        for k in range(dq, -1, -1):
            coef = r[k + len(o._c) - 1] / lc
            q[k] = coef
            if coef:
                for i, b in enumerate(o._c):
                    r[k + i] -= coef * b
        return UniPoly(q), UniPoly(r[: len(o._c) - 1])

    def __floordiv__(self, other) -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "UniPoly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    # evaluation and calculus -------------------------------------------------
    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, UniPoly) else UniPoly()
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(i * self._c[i] for i in range(1, len(self._c)))

    def monic(self) -> "UniPoly":
        if self.is_zero():
            raise ValueError("zero polynomial cannot be made monic")
        lc = self._c[-1]
        return UniPoly(v / lc for v in self._c)

    def scale(self, s: Scalar) -> "UniPoly":
        s = to_rat(s)
        return UniPoly(v * s for v in self._c)

    def shift_up(self, k: int) -> "UniPoly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return UniPoly([0] * k + list(self._c))

    def reversed(self, n: int | None = None) -> "UniPoly":
        """x^n p(1/x), with n defaulting to the degree."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal length shorter than the degree")
        c = list(self._c) + [Fraction(0)] * (n + 1 - len(self._c))
        return UniPoly(reversed(c))

    def x_adic_valuation(self) -> int:
        """Largest k with x^k dividing p (0 for constants, raises on zero)."""
        if self.is_zero():
            raise ValueError("valuation of the zero polynomial")
        k = 0
        while self._c[k] == 0:
            k += 1
        return k

    # integer views -----------------------------------------------------------
    def to_int_primitive(self) -> list[int]:
        """Integer primitive multiple with positive leading coefficient."""
        if self.is_zero():
            return []
        den = 1
        for v in self._c:
            den = lcm(den, v.denominator)
        return int_primitive([int(v * den) for v in self._c])

    @classmethod
    def from_ints(cls, c: Sequence[int]) -> "UniPoly":
        return cls(c)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c)

    # gcd family ---------------------------------------------------------------
    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd (zero if both are zero)."""
        a = self.to_int_primitive()
        b = other.to_int_primitive()
        g = int_gcd(a, b)
        if not g:
            return UniPoly()
        return UniPoly(g).monic()

    def squarefree_part(self) -> "UniPoly":
        if self.degree <= 0:
            return self
        g = self.gcd(self.derivative())
        return (self // g).monic()

    # rendering ---------------------------------------------------------------
    def to_text(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        parts: list[str] = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if i == 0:
                body = rat_str(mag)
            else:
                mon = var if i == 1 else f"{var}^{i}"
                body = mon if mag == 1 else f"{rat_str(mag)}*{mon}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def to_json(self) -> list[str]:
        return [rat_str(v) for v in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "UniPoly":
        return cls(to_rat(v) for v in data)

    def __repr__(self) -> str:
        return f"UniPoly({self.to_text()})"

    def __str__(self) -> str:
        return self.to_text()


X = UniPoly.x()
