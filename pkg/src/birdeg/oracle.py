"""Independent degree oracle: iterate a map along a random line and cancel common factors.

Each component is a univariate integer polynomial in the line parameter t.
After every application of the map the components are divided by their gcd
in Z[t] (which also removes the integer content), so the surviving degree is
deg(f^n) for a generic line.  Polynomial arithmetic is FLINT's fmpz_poly,
which keeps this module independent of the package's own polynomial code.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Optional

from flint import fmpz_poly

DEGREE_CAP = 5000
MAX_RESEEDS = 5
COORD_RANGE = 100

Step = Callable[[list[fmpz_poly]], list[fmpz_poly]]


class OracleError(RuntimeError):
    pass


class DegenerateLine(OracleError):
    """A component vanished identically along the chosen line."""


class DegreeCapExceeded(OracleError):
    pass


class OracleDisagreement(OracleError):
    def __init__(self, first: list[int], second: list[int]):
        self.first = first
        self.second = second
        super().__init__(f"seeds disagree: {first} vs {second}")


def _to_int_rows(L) -> list[list[int]]:
    """Scale a matrix of rationals (RatMatrix or nested sequences) to integers."""
    rows = L.to_rows() if hasattr(L, "to_rows") else [list(r) for r in L]
    rows = [[Fraction(v) for v in r] for r in rows]
    den = 1
    for r in rows:
        for v in r:
            den = lcm(den, v.denominator)
    return [[int(v * den) for v in r] for r in rows]


def j_step(comps: list[fmpz_poly]) -> list[fmpz_poly]:
    """comp_j <- product of all the other components."""
    n = len(comps)
    one = fmpz_poly([1])
    prefix = [one]
    for c in comps:
        prefix.append(prefix[-1] * c)
    suffix = [one] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] * comps[i]
    return [prefix[i] * suffix[i + 1] for i in range(n)]


def make_lj_map(L) -> Step:
    """Evaluator for f = L o J acting on polynomial components, gcd left in place."""
    rows = _to_int_rows(L)

    def step(comps: list[fmpz_poly]) -> list[fmpz_poly]:
        return _combine(rows, j_step(comps))

    return step


def _combine(rows: list[list[int]], vec: list[fmpz_poly]) -> list[fmpz_poly]:
    out = []
    for r in rows:
        acc = fmpz_poly([])
        for a, c in zip(r, vec):
            if a:
                acc += a * c
        out.append(acc)
    return out


def _product(polys) -> fmpz_poly:
    out = fmpz_poly([1])
    for p in polys:
        out *= p
    return out


def reduced_lj_step(L) -> Step:
    """f = L o J followed by removal of the common factor, without forming it.

    Because L is invertible, the common factor of L J(c) is that of J(c),
    namely prod(c) / lcm(c), and J(c)_j divided by it is lcm(c) / c_j.  The
    lcm is kept as factors F_0 = c_0 and F_j = c_j / g_j with
    g_j = gcd(F_0 ... F_{j-1}, c_j) split over the earlier factors, so every
    division is of one component by a small gcd part.  The output is the
    reduced step up to an integer scalar, which content removal then fixes.
    """
    rows = _to_int_rows(L)

    def step(comps: list[fmpz_poly]) -> list[fmpz_poly]:
        n = len(comps)
        factors: list[fmpz_poly] = [comps[0]]
        # parts[j][k] = the piece of g_j taken out of F_k (k < j)
        parts: list[dict[int, fmpz_poly]] = [{}]
        for j in range(1, n):
            rest = comps[j]
            split: dict[int, fmpz_poly] = {}
            for k in range(j):
                if rest.degree() == 0:
                    break
                h = factors[k].gcd(rest)
                if h.degree() > 0:
                    split[k] = h
                    rest = rest // h
            factors.append(rest)
            parts.append(split)
        suffix = [fmpz_poly([1])] * (n + 1)
        for k in range(n - 1, -1, -1):
            suffix[k] = suffix[k + 1] * factors[k]
        prefix = [fmpz_poly([1])]
        for k in range(n):
            prefix.append(prefix[-1] * factors[k])
        quotients = []
        for j in range(n):
            if parts[j]:
                head = _product(factors[k] // parts[j][k] if k in parts[j] else factors[k] for k in range(j))
            else:
                head = prefix[j]
            quotients.append(head * suffix[j + 1])
        return _combine(rows, quotients)

    step.reduced = True  # type: ignore[attr-defined]
    return step


def _strip_content(comps: list[fmpz_poly]) -> list[fmpz_poly]:
    g = 0
    for c in comps:
        g = gcd(g, int(c.content()))
        if g == 1:
            return comps
    if g == 0:
        raise DegenerateLine("all components vanished")
    return [c / g for c in comps]


def _normalise(comps: list[fmpz_poly]) -> list[fmpz_poly]:
    g = fmpz_poly([])
    for c in comps:
        g = g.gcd(c)
        if g.degree() == 0 and abs(g[0]) == 1:
            return comps
    if g == 0:
        raise DegenerateLine("all components vanished")
    return [c // g for c in comps]


def _random_line(dim: int, rng: random.Random) -> list[fmpz_poly]:
    # component k is u_k + t v_k
    return [
        fmpz_poly([rng.randint(-COORD_RANGE, COORD_RANGE), rng.randint(-COORD_RANGE, COORD_RANGE)])
        for _ in range(dim + 1)
    ]


def _run(step: Step, dim: int, n: int, rng: random.Random, cap: int) -> list[int]:
    normalise = _strip_content if getattr(step, "reduced", False) else _normalise
    comps = _random_line(dim, rng)
    if any(c == 0 for c in comps):
        raise DegenerateLine("initial component is zero")
    comps = _normalise(comps)
    degrees = [max(c.degree() for c in comps)]
    for _ in range(n):
        comps = step(comps)
        if any(c == 0 for c in comps):
            raise DegenerateLine("a component vanished along the line")
        comps = normalise(comps)
        deg = max(c.degree() for c in comps)
        if deg > cap:
            raise DegreeCapExceeded(f"degree {deg} exceeds the cap {cap}")
        degrees.append(deg)
    return degrees


def _one_seed(step: Step, dim: int, n: int, seed: int, cap: int) -> list[int]:
    rng = random.Random(seed)
    last: Optional[Exception] = None
    for _ in range(MAX_RESEEDS + 1):
        try:
            return _run(step, dim, n, rng, cap)
        except DegenerateLine as exc:
            last = exc
    raise DegenerateLine(f"no generic line after {MAX_RESEEDS} reseeds: {last}")


def generic_line_degree(
    map_or_step,
    n: int,
    seed: int = 0,
    dim: Optional[int] = None,
    cap: int = DEGREE_CAP,
    second_seed: Optional[int] = None,
) -> list[int]:
    """d_0, ..., d_n for f = L o J (or any step callable) along two random lines.

    ``map_or_step`` is a matrix (RatMatrix, BirationalMapSpec or nested rows)
    or a callable acting on lists of ``fmpz_poly``, in which case ``dim`` is
    required.  The runs for the two seeds must give identical sequences.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if callable(map_or_step):
        if dim is None:
            raise ValueError("dim is required for a step callable")
        step = map_or_step
    else:
        L = getattr(map_or_step, "L", map_or_step)
        rows = _to_int_rows(L)
        dim = len(rows) - 1
        step = reduced_lj_step(rows)
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    other = second_seed if second_seed is not None else seed + 7919
    first = _one_seed(step, dim, n, seed, cap)
    second = _one_seed(step, dim, n, other, cap)
    if first != second:
        raise OracleDisagreement(first, second)
    return first
