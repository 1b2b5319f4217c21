"""Real-root isolation by Sturm sequences, with exact bisection on rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .poly import (
    UniPoly,
    int_derivative,
    int_eval_sign,
    int_gcd,
    int_exact_quo,
    int_prem,
    int_primitive,
    rat_str,
)

DEFAULT_PRECISION = 64


class RootError(ValueError):
    """Raised for invalid root-finding requests (zero polynomial, root at an endpoint)."""


def _squarefree_int(p: UniPoly) -> tuple[int, ...]:
    if p.is_zero():
        raise RootError("zero polynomial")
    c = p.to_int_primitive()
    if len(c) <= 2:
        return tuple(c)
    g = int_gcd(c, int_derivative(c))
    if len(g) > 1:
        c = int_primitive(int_exact_quo(c, g))
    return tuple(c)


@lru_cache(maxsize=2048)
def _sturm_chain(sqf: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Sturm chain of a square-free integer polynomial, each member primitive."""
    chain = [list(sqf)]
    if len(sqf) <= 1:
        return (tuple(sqf),)
    chain.append(int_primitive(int_derivative(sqf)))
    while len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        r = int_prem(a, b)
        if not r:
            break
        # prem multiplies by lc(b)^k; undo a negative multiplier's sign
        k = len(a) - len(b) + 1
        if b[-1] < 0 and k % 2 == 1:
            r = [-v for v in r]
        # primitive part keeps the sign of r's leading coefficient only up to
        # normalisation, so restore it explicitly before negating
        prim = int_primitive(r)
        if r[-1] < 0:
            prim = [-v for v in prim]
        chain.append([-v for v in prim])
    return tuple(tuple(c) for c in chain)


def _variations(chain, x: Fraction) -> int:
    count = 0
    last = 0
    for c in chain:
        s = int_eval_sign(c, x)
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _variations_inf(chain, sign: int) -> int:
    count = 0
    last = 0
    for c in chain:
        deg = len(c) - 1
        s = (1 if c[-1] > 0 else -1) * (sign ** deg if sign < 0 else 1)
        if last and s != last:
            count += 1
        last = s
    return count


def _cauchy_power(sqf: tuple[int, ...]) -> int:
    """k with every real root strictly inside (-2^k, 2^k)."""
    lead = abs(sqf[-1])
    top = max((abs(v) for v in sqf[:-1]), default=0)
    bound = 1 + Fraction(top, lead)
    k = 0
    while (1 << k) <= bound:
        k += 1
    return k


def count_real_roots_in(p: UniPoly, a, b) -> int:
    """Number of distinct real roots of ``p`` in (a, b]; endpoints must not be roots."""
    a = Fraction(a)
    b = Fraction(b)
    if not a < b:
        raise RootError("need a < b")
    if p.is_zero():
        raise RootError("zero polynomial")
    if p(a) == 0 or p(b) == 0:
        raise RootError("an endpoint is a root; perturb the interval")
    chain = _sturm_chain(_squarefree_int(p))
    return _variations(chain, a) - _variations(chain, b)


def _count_between(chain, a: Fraction, b: Fraction) -> int:
    """Roots in (a, b]; zeros in the chain are skipped so root endpoints are fine."""
    return _variations(chain, a) - _variations(chain, b)


def count_all_real_roots(p: UniPoly) -> int:
    chain = _sturm_chain(_squarefree_int(p))
    return _variations_inf(chain, -1) - _variations_inf(chain, 1)


@dataclass(frozen=True)
class RootInterval:
    """An isolating interval (lo, hi] for one real root of ``poly``.

    ``exact`` holds the root when bisection happened to land on it.
    ``refined`` is a decimal rendering certified to ``digits`` places.
    """

    lo: Fraction
    hi: Fraction
    poly: tuple[int, ...] = field(repr=False)
    exact: Optional[Fraction] = None
    digits: int = 12
    refined: str = ""

    @property
    def value(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = Fraction(x)
        if self.exact is not None:
            return x == self.exact
        return self.lo < x <= self.hi

    def refine(self, bits: int) -> "RootInterval":
        """Shrink to width < 2^-bits."""
        if self.exact is not None:
            return self
        lo, hi, exact = _shrink(self.poly, self.lo, self.hi, Fraction(1, 1 << bits))
        return RootInterval(lo, hi, self.poly, exact, self.digits, _render(self.poly, lo, hi, exact, self.digits))

    def decimal(self, digits: int) -> str:
        return _render(self.poly, self.lo, self.hi, self.exact, digits)

    def to_json(self) -> dict:
        out = {"lo": rat_str(self.lo), "hi": rat_str(self.hi), "decimal": self.refined}
        if self.exact is not None:
            out["exact"] = rat_str(self.exact)
        return out


def _sign_at(poly, x: Fraction) -> int:
    return int_eval_sign(poly, x)


def _shrink(poly, lo: Fraction, hi: Fraction, width: Fraction):
    """Bisection on an isolating interval (lo, hi] with a simple root inside."""
    chain = _sturm_chain(poly)
    slo = _sign_at(poly, lo)
    shi = _sign_at(poly, hi)
    while hi - lo >= width:
        mid = (lo + hi) / 2
        sm = _sign_at(poly, mid)
        if sm == 0:
            return mid, mid, mid
        if slo != 0 and shi != 0:
            if sm == slo:
                lo, slo = mid, sm
            else:
                hi, shi = mid, sm
            continue
        if _count_between(chain, mid, hi) >= 1:
            lo, slo = mid, sm
        else:
            hi, shi = mid, sm
    if shi == 0:
        return hi, hi, hi
    return lo, hi, None


def _round_decimal(x: Fraction, digits: int) -> str:
    scaled = x * 10 ** digits
    n = scaled.numerator // scaled.denominator
    if scaled - n >= Fraction(1, 2):
        n += 1
    sign = "-" if n < 0 else ""
    n = abs(n)
    s = str(n).rjust(digits + 1, "0")
    if digits == 0:
        return sign + s
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _render(poly, lo: Fraction, hi: Fraction, exact: Optional[Fraction], digits: int) -> str:
    if exact is not None:
        return _round_decimal(exact, digits)
    for _ in range(8):
        a = _round_decimal(lo, digits)
        b = _round_decimal(hi, digits)
        if a == b:
            return a
        lo, hi, exact = _shrink(poly, lo, hi, (hi - lo) / (1 << 32))
        if exact is not None:
            return _round_decimal(exact, digits)
    return _round_decimal((lo + hi) / 2, digits)


def largest_real_root(p: UniPoly, precision: int = DEFAULT_PRECISION, digits: int = 12) -> Optional[RootInterval]:
    """Isolate the greatest real root of ``p`` to width < 2^-precision, or None."""
    sqf = _squarefree_int(p)
    if len(sqf) == 1:
        return None
    chain = _sturm_chain(sqf)
    total = _variations_inf(chain, -1) - _variations_inf(chain, 1)
    if total == 0:
        return None
    k = _cauchy_power(sqf)
    lo, hi = Fraction(-(1 << k)), Fraction(1 << k)
    width = Fraction(1, 1 << precision)
    # Sturm bisection until (lo, hi] holds exactly one root and no root lies above hi
    while True:
        n_in = _count_between(chain, lo, hi)
        if n_in == 1:
            break
        mid = (lo + hi) / 2
        if _count_between(chain, mid, hi) >= 1:
            lo = mid
        else:
            if _sign_at(sqf, mid) == 0:
                return _make(sqf, mid, mid, mid, digits)
            hi = mid
    if _sign_at(sqf, hi) == 0:
        return _make(sqf, hi, hi, hi, digits)
    lo, hi, exact = _shrink(sqf, lo, hi, width)
    return _make(sqf, lo, hi, exact, digits)


def _make(sqf, lo, hi, exact, digits) -> RootInterval:
    return RootInterval(lo, hi, sqf, exact, digits, _render(sqf, lo, hi, exact, digits))


def isolate_real_roots(p: UniPoly, precision: int = 32) -> list[RootInterval]:
    """All real roots, ascending, each isolated to width < 2^-precision."""
    sqf = _squarefree_int(p)
    if len(sqf) == 1:
        return []
    chain = _sturm_chain(sqf)
    k = _cauchy_power(sqf)
    out: list[RootInterval] = []
    stack = [(Fraction(-(1 << k)), Fraction(1 << k))]
    width = Fraction(1, 1 << precision)
    while stack:
        lo, hi = stack.pop()
        n = _count_between(chain, lo, hi)
        if n == 0:
            continue
        if n == 1:
            if _sign_at(sqf, hi) == 0:
                out.append(_make(sqf, hi, hi, hi, 12))
            else:
                a, b, ex = _shrink(sqf, lo, hi, width)
                out.append(_make(sqf, a, b, ex, 12))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort(key=lambda r: r.lo)
    return out


def compare_roots(r1: RootInterval, r2: RootInterval) -> int:
    """Exact comparison of two isolated roots: -1, 0 or 1."""
    g = int_gcd(list(r1.poly), list(r2.poly))
    gchain = _sturm_chain(_squarefree_int(UniPoly(g))) if len(g) > 1 else None
    while True:
        if r1.exact is not None and r2.exact is not None:
            return (r1.exact > r2.exact) - (r1.exact < r2.exact)
        if r1.hi < r2.lo or (r1.exact is not None and r1.exact <= r2.lo):
            return -1
        if r2.hi < r1.lo or (r2.exact is not None and r2.exact <= r1.lo):
            return 1
        if gchain is not None:
            if r1.exact is not None:
                if r2.contains(r1.exact) and int_eval_sign(g, r1.exact) == 0:
                    return 0
            elif r2.exact is not None:
                if r1.contains(r2.exact) and int_eval_sign(g, r2.exact) == 0:
                    return 0
            else:
                a, b = max(r1.lo, r2.lo), min(r1.hi, r2.hi)
                if a < b and _count_between(gchain, a, b) >= 1:
                    return 0
        r1 = r1.refine(_bits(r1) + 8)
        r2 = r2.refine(_bits(r2) + 8)


def _bits(r: RootInterval) -> int:
    w = r.width
    if w == 0:
        return 0
    b = 0
    while Fraction(1, 1 << b) > w:
        b += 1
    return b
