"""Degree sequences as linear recurrences and their rational generating functions."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .matrix import RatMatrix
from .poly import UniPoly


def power_entry_sequence(m: RatMatrix, n_max: int) -> list[Fraction]:
    """[(M^0)_{11}, ..., (M^n_max)_{11}] by repeated matrix-vector products."""
    if not m.is_square:
        raise ValueError("power_entry_sequence needs a square matrix")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    n = m.rows
    if m.is_integral():
        rows = m.to_int_rows()
        sparse = [[(j, v) for j, v in enumerate(r) if v] for r in rows]
        vec = [1] + [0] * (n - 1)
        out = [Fraction(1)]
        for _ in range(n_max):
            vec = [sum(v * vec[j] for j, v in row) for row in sparse]
            out.append(Fraction(vec[0]))
        return out
    vec = [Fraction(1)] + [Fraction(0)] * (n - 1)
    out = [Fraction(1)]
    for _ in range(n_max):
        vec = m.matvec(vec)
        out.append(vec[0])
    return out


def check_recursion(seq: Sequence, chi: UniPoly) -> bool:
    """True iff seq obeys d_{n+N} = -chi_{N-1} d_{n+N-1} - ... - chi_0 d_n throughout."""
    n = chi.degree
    if n < 0:
        raise ValueError("zero characteristic polynomial")
    if len(seq) < 2 * n:
        raise ValueError(f"sequence of length {len(seq)} is shorter than 2*deg = {2 * n}")
    chi = chi.monic()
    c = chi.coeffs
    vals = [Fraction(v) for v in seq]
    for start in range(len(vals) - n):
        acc = sum((c[k] * vals[start + k] for k in range(n + 1)), Fraction(0))
        if acc != 0:
            return False
    return True


def zero_eigenvalue_order(chi: UniPoly) -> int:
    """Multiplicity k of the root 0, i.e. the largest k with x^k | chi."""
    return chi.x_adic_valuation()


def generating_denominator(chi: UniPoly, strip_zero: bool = False) -> UniPoly:
    """Denominator q(x) = x^N chi(1/x) of sum d_n x^n, normalised so q(0) = 1.

    The monic denominator prod (x - 1/lambda_j) differs from this one by the
    constant factor chi(0); see :func:`monic_generating_denominator`.  A zero
    eigenvalue makes chi(0) = 0.  Pass ``strip_zero=True`` to factor out x^k
    first and apply the formula to the cofactor; the order k itself is
    available from :func:`zero_eigenvalue_order`.
    """
    chi = _prepare(chi, strip_zero)
    return chi.reversed().scale(1 / chi.lc)


def monic_generating_denominator(chi: UniPoly, strip_zero: bool = False) -> UniPoly:
    """The monic q with q(x) chi(0) = x^N chi(1/x), i.e. prod (x - 1/lambda_j)."""
    chi = _prepare(chi, strip_zero).monic()
    return chi.reversed().scale(1 / chi.coeff(0))


def _prepare(chi: UniPoly, strip_zero: bool) -> UniPoly:
    if chi.is_zero():
        raise ValueError("zero polynomial")
    if chi.coeff(0) == 0:
        if not strip_zero:
            raise ValueError("chi(0) = 0: zero eigenvalue; factor out x^k first (strip_zero=True)")
        k = chi.x_adic_valuation()
        chi = UniPoly(chi.coeffs[k:])
    return chi


def generating_numerator(seq: Sequence, q: UniPoly, zero_order: int = 0) -> UniPoly:
    """p(x) = q(x) * sum d_n x^n, truncated below deg q + zero_order.

    ``zero_order`` is the multiplicity of the eigenvalue 0 that was stripped
    from chi before building q; those eigenvalues only affect the first terms.
    """
    n = q.degree + zero_order
    if len(seq) < n:
        raise ValueError("sequence too short for the denominator degree")
    prod = q * UniPoly(seq[:n])
    return UniPoly(prod.coeffs[:n])


def series_coefficients(p: UniPoly, q: UniPoly, count: int) -> list[Fraction]:
    """First ``count`` Taylor coefficients of p/q at 0 (requires q(0) != 0)."""
    q0 = q.coeff(0)
    if q0 == 0:
        raise ValueError("q(0) must be nonzero")
    out: list[Fraction] = []
    for n in range(count):
        acc = p.coeff(n)
        for k in range(1, min(n, q.degree) + 1):
            acc -= q.coeff(k) * out[n - k]
        out.append(acc / q0)
    return out


def second_differences(seq: Sequence) -> list[Fraction]:
    vals = [Fraction(v) for v in seq]
    return [vals[i + 2] - 2 * vals[i + 1] + vals[i] for i in range(len(vals) - 2)]


def minimal_period(seq: Sequence, start: int = 0) -> int | None:
    """Smallest t with seq[n+t] = seq[n] for all n >= start within the data, if any t <= len/2."""
    vals = list(seq)[start:]
    for t in range(1, len(vals) // 2 + 1):
        if all(vals[i + t] == vals[i] for i in range(len(vals) - t)):
            return t
    return None
