"""Points of P^d in canonical integer coordinates and the named loci of J."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .exactmath.poly import to_rat


class PointError(ValueError):
    pass


@dataclass(frozen=True)
class ProjPoint:
    """[x_0 : ... : x_d] with coprime integer coordinates, first nonzero one positive."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) < 3:
            raise PointError("projective dimension must be at least 2")
        if not any(self.coords):
            raise PointError("all-zero coordinates")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def zero_set(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.coords) if v == 0)

    def __str__(self) -> str:
        return "[" + ":".join(str(v) for v in self.coords) + "]"

    def to_json(self) -> dict:
        return {"coords": [str(v) for v in self.coords]}

    @classmethod
    def from_json(cls, data) -> "ProjPoint":
        coords = data["coords"] if isinstance(data, dict) else data
        return canonicalize(coords)


def canonicalize(raw: Sequence) -> ProjPoint:
    """Clear denominators, divide by the gcd and make the first nonzero entry positive."""
    vals = [to_rat(v) if not isinstance(v, int) else Fraction(v) for v in raw]
    if not any(vals):
        raise PointError("all-zero coordinates")
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    return canonical_ints(ints)


def canonical_ints(ints: Sequence[int]) -> ProjPoint:
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        raise PointError("all-zero coordinates")
    first = next(v for v in ints if v)
    if first < 0:
        g = -g
    return ProjPoint(tuple(v // g for v in ints))


class PointTag(str, Enum):
    INDETERMINATE = "Indeterminate"
    ON_EXCEPTIONAL = "OnExceptional"
    GENERIC = "Generic"


@dataclass(frozen=True)
class PointClass:
    tag: PointTag
    zero_set: frozenset[int]

    @property
    def exceptional_index(self) -> Optional[int]:
        if self.tag is PointTag.ON_EXCEPTIONAL:
            return next(iter(self.zero_set))
        return None


def classify(p: ProjPoint) -> PointClass:
    """Indeterminate if two or more coordinates vanish, on Sigma_j if exactly x_j does."""
    z = p.zero_set()
    if len(z) >= 2:
        return PointClass(PointTag.INDETERMINATE, z)
    if len(z) == 1:
        return PointClass(PointTag.ON_EXCEPTIONAL, z)
    return PointClass(PointTag.GENERIC, z)


def _check_index(j: int, d: int) -> None:
    if d < 2:
        raise PointError("projective dimension must be at least 2")
    if not 0 <= j <= d:
        raise PointError(f"index {j} out of range 0..{d}")


def e_point(j: int, d: int) -> ProjPoint:
    _check_index(j, d)
    return ProjPoint(tuple(1 if i == j else 0 for i in range(d + 1)))


def eta_point(j: int, c, d: int) -> ProjPoint:
    """eta_j(c): c - 1 in slot j and c elsewhere."""
    _check_index(j, d)
    c = to_rat(c)
    return canonicalize([c - 1 if i == j else c for i in range(d + 1)])


def sigma_point(j: int, d: int) -> ProjPoint:
    return eta_point(j, 1, d)


def special_point(kind: str, j: int, d: int, c=None) -> ProjPoint:
    """Named points: ``e`` (coordinate point), ``sigma`` (= eta_j(1)) or ``eta`` (needs c)."""
    if kind == "eta":
        if c is None:
            raise PointError("eta needs the parameter c")
        return eta_point(j, c, d)
    if c is not None:
        raise PointError(f"{kind} takes no parameter c")
    if kind == "e":
        return e_point(j, d)
    if kind == "sigma":
        return sigma_point(j, d)
    raise PointError(f"unknown point kind {kind!r}")


def diagonal_index(p: ProjPoint) -> Optional[int]:
    """The j with p on D_j (all coordinates other than x_j equal), else None.

    Points on several diagonals (only [1:...:1] in dimension >= 2) report the
    smallest index.
    """
    n = len(p.coords)
    for j in range(n):
        rest = [p.coords[i] for i in range(n) if i != j]
        if all(v == rest[0] for v in rest):
            return j
    return None


def eta_parameter(p: ProjPoint, j: int) -> Optional[Fraction]:
    """c with p = eta_j(c), or None when p is not on D_j (or is the point at c = infinity)."""
    n = len(p.coords)
    others = [p.coords[i] for i in range(n) if i != j]
    if any(v != others[0] for v in others):
        return None
    common, xj = others[0], p.coords[j]
    # (c - 1, c) proportional to (xj, common)  =>  c * (common - xj) = common
    if common == xj:
        return None
    return Fraction(common, common - xj)


def points_from_rows(rows: Iterable[Sequence]) -> list[ProjPoint]:
    return [canonicalize(r) for r in rows]
