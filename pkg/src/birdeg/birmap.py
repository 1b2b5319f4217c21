"""Maps f = L o J, their exceptional orbits, and orbit-list structures.

Orbits are followed exactly while the coordinates stay small.  Past a size
threshold the iteration continues modulo several 61-bit primes: a coordinate
that is nonzero modulo any prime is certainly nonzero, so genericity stays
certified; only a coordinate that vanishes modulo every prime is reported as a
probable zero (``Orbit.certified`` is then False).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .exactmath import RatMatrix, to_rat
from .projgeom import PointTag, ProjPoint, canonical_ints, classify, e_point

DEFAULT_CAP = 4096
EXACT_BITS_LIMIT = 4096
_PRIMES = (
    2305843009213693951,
    2305843009213693921,
    2305843009213693907,
    2305843009213693669,
)


class MapError(ValueError):
    """Invalid map specification (shape, singular L, bad dimension)."""


class IndeterminateError(ValueError):
    """J or f applied at a point of the indeterminacy locus."""


class OrbitResourceError(RuntimeError):
    """An orbit could not be followed within the configured resources."""


class NotElementary(Exception):
    """Some exceptional orbit ends on Sigma_k* or at an indeterminate point other than e_k."""

    def __init__(self, orbit: "Orbit"):
        self.orbit = orbit
        super().__init__(f"orbit of alpha_{orbit.start_index} ends with {orbit.verdict.describe()}")


@dataclass(frozen=True)
class BirationalMapSpec:
    dim: int
    L: RatMatrix
    name: str = ""

    def __post_init__(self):
        if self.dim < 2:
            raise MapError("dimension must be at least 2")
        if (self.L.rows, self.L.cols) != (self.dim + 1, self.dim + 1):
            raise MapError(f"L must be {self.dim + 1}x{self.dim + 1}")
        if self.L.det() == 0:
            raise MapError("L not invertible")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], name: str = "") -> "BirationalMapSpec":
        m = RatMatrix.from_rows([[to_rat(v) for v in r] for r in rows])
        return cls(m.rows - 1, m, name)

    @property
    def int_rows(self) -> list[list[int]]:
        """L scaled by a positive integer so all entries are integers."""
        den = 1
        for v in self.L.entries:
            den = lcm(den, v.denominator)
        return [[int(v * den) for v in self.L.row(i)] for i in range(self.L.rows)]

    def to_json(self) -> dict:
        out = {"d": self.dim, "L": self.L.to_json()}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BirationalMapSpec":
        try:
            rows = data["L"]
            d = int(data.get("d", len(rows) - 1))
        except (KeyError, TypeError) as exc:
            raise MapError(f"malformed map JSON: {exc}") from exc
        m = RatMatrix.from_rows([[to_rat(v) for v in r] for r in rows])
        return cls(d, m, str(data.get("name", "")))


# ---------------------------------------------------------------------------
# J and f


def _j_ints(x: Sequence[int]) -> list[int]:
    n = len(x)
    prefix = [1] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] * x[i]
    suffix = [1] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] * x[i]
    return [prefix[i] * suffix[i + 1] for i in range(n)]


def apply_J(p: ProjPoint) -> ProjPoint:
    """[x_0 : ... : x_d] -> [prod_{i != j} x_i]_j; Sigma_j* goes to e_j."""
    if classify(p).tag is PointTag.INDETERMINATE:
        raise IndeterminateError(f"J is indeterminate at {p}")
    return canonical_ints(_j_ints(p.coords))


def _lin(rows: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(r, x) if a and b) for r in rows]


def apply_L(spec: BirationalMapSpec, p: ProjPoint) -> ProjPoint:
    return canonical_ints(_lin(spec.int_rows, p.coords))


def apply_f(spec: BirationalMapSpec, p: ProjPoint) -> ProjPoint:
    if p.dim != spec.dim:
        raise MapError("point and map dimensions differ")
    return canonical_ints(_lin(spec.int_rows, apply_J(p).coords))


def alpha_point(spec: BirationalMapSpec, j: int) -> ProjPoint:
    """alpha_j = L e_j, the j-th column of L."""
    return canonical_ints([r[j] for r in spec.int_rows])


# ---------------------------------------------------------------------------
# orbits


class VerdictKind(str, Enum):
    ENDS_AT_E = "EndsAtE"
    ENDS_AT_SIGMA_STAR = "EndsAtSigmaStar"
    ENDS_AT_INDETERMINACY_OTHER = "EndsAtIndeterminacyOther"
    NONSINGULAR_WITHIN_BOUND = "NonsingularWithinBound"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    index: Optional[int] = None
    cap: Optional[int] = None
    note: str = ""

    @property
    def singular(self) -> bool:
        return self.kind is not VerdictKind.NONSINGULAR_WITHIN_BOUND

    def describe(self) -> str:
        if self.kind in (VerdictKind.ENDS_AT_E, VerdictKind.ENDS_AT_SIGMA_STAR):
            return f"{self.kind.value}({self.index})"
        if self.kind is VerdictKind.NONSINGULAR_WITHIN_BOUND:
            extra = f", {self.note}" if self.note else ""
            return f"{self.kind.value}(cap={self.cap}{extra})"
        return self.kind.value

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.index is not None:
            out["index"] = self.index
        if self.cap is not None:
            out["cap"] = self.cap
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Orbit:
    """The orbit of alpha_j.

    ``points`` holds the exactly known prefix (all points when the iteration
    stayed exact).  ``length`` counts points from alpha_j through the landing
    point inclusive, or the number of generic points examined when nonsingular.
    """

    start_index: int
    points: tuple[ProjPoint, ...]
    verdict: Verdict
    length: int
    certified: bool = True
    exact_steps: int = 0

    @property
    def singular(self) -> bool:
        return self.verdict.singular

    def to_json(self) -> dict:
        out = {
            "start": self.start_index,
            "verdict": self.verdict.to_json(),
            "length": self.length,
            "certified": self.certified,
        }
        if self.length <= 64 and len(self.points) == self.length:
            out["points"] = [str(p) for p in self.points]
        return out


def _landing_verdict(zero_set: frozenset[int], n: int) -> Optional[Verdict]:
    if not zero_set:
        return None
    if len(zero_set) == 1:
        return Verdict(VerdictKind.ENDS_AT_SIGMA_STAR, next(iter(zero_set)))
    if len(zero_set) == n - 1:
        k = next(i for i in range(n) if i not in zero_set)
        return Verdict(VerdictKind.ENDS_AT_E, k)
    return Verdict(VerdictKind.ENDS_AT_INDETERMINACY_OTHER)


def compute_orbit(
    spec: BirationalMapSpec,
    j: int,
    cap: int = DEFAULT_CAP,
    exact_bits: int = EXACT_BITS_LIMIT,
) -> Orbit:
    """Follow alpha_j under f until it lands in E or I, repeats, or ``cap`` points pass."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if not 0 <= j <= spec.dim:
        raise ValueError(f"index {j} out of range")
    n = spec.dim + 1
    rows = spec.int_rows
    x = alpha_point(spec, j)
    points: list[ProjPoint] = []
    seen: dict[ProjPoint, int] = {}
    while True:
        points.append(x)
        verdict = _landing_verdict(x.zero_set(), n)
        if verdict is not None:
            return Orbit(j, tuple(points), verdict, len(points), True, len(points))
        if len(points) >= cap:
            v = Verdict(VerdictKind.NONSINGULAR_WITHIN_BOUND, cap=cap)
            return Orbit(j, tuple(points), v, len(points), True, len(points))
        if x in seen:
            v = Verdict(VerdictKind.NONSINGULAR_WITHIN_BOUND, cap=cap, note=f"periodic with period {len(points) - 1 - seen[x]}")
            points.pop()
            return Orbit(j, tuple(points), v, len(points), True, len(points))
        seen[x] = len(points) - 1
        if max(abs(c) for c in x.coords).bit_length() > exact_bits:
            return _continue_modular(spec, j, rows, points, cap)
        x = canonical_ints(_lin(rows, _j_ints(x.coords)))


def _continue_modular(spec, j, rows, points, cap) -> Orbit:
    n = spec.dim + 1
    last = points[-1].coords
    state = {p: [c % p for c in last] for p in _PRIMES}
    rows_mod = {p: [[a % p for a in r] for r in rows] for p in _PRIMES}
    count = len(points)
    while count < cap:
        new_state = {}
        for p, v in state.items():
            jv = [c % p for c in _j_ints(v)]
            w = [sum(a * b for a, b in zip(r, jv)) % p for r in rows_mod[p]]
            if any(w):
                new_state[p] = w
        if not new_state:
            raise OrbitResourceError(f"orbit of alpha_{j}: every tracking prime degenerated")
        state = new_state
        count += 1
        probable_zero = frozenset(i for i in range(n) if all(v[i] == 0 for v in state.values()))
        verdict = _landing_verdict(probable_zero, n)
        if verdict is not None:
            tail = points
            if verdict.kind is VerdictKind.ENDS_AT_E:
                tail = points + [e_point(verdict.index, spec.dim)]
            return Orbit(j, tuple(tail), verdict, count, False, len(points))
    v = Verdict(VerdictKind.NONSINGULAR_WITHIN_BOUND, cap=cap, note="generic points certified modulo primes")
    return Orbit(j, tuple(points), v, count, True, len(points))


# ---------------------------------------------------------------------------
# orbit-list structures


def _min_rotation(seq: tuple[int, ...]) -> tuple[int, ...]:
    if not seq:
        return seq
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


@dataclass(frozen=True, eq=False)
class OrbitListStructure:
    """Closed and open lists of orbit lengths, each list in chaining order."""

    closed: tuple[tuple[int, ...], ...] = ()
    open: tuple[tuple[int, ...], ...] = ()
    dim: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "closed", tuple(tuple(int(v) for v in lst) for lst in self.closed))
        object.__setattr__(self, "open", tuple(tuple(int(v) for v in lst) for lst in self.open))
        for lst in self.closed + self.open:
            if not lst:
                raise ValueError("orbit lists must be nonempty")
            if any(v < 1 for v in lst):
                raise ValueError("orbit lengths must be positive")

    def canonical(self) -> tuple:
        return (
            tuple(sorted(_min_rotation(lst) for lst in self.closed)),
            tuple(sorted(self.open)),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrbitListStructure):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    @property
    def is_empty(self) -> bool:
        return not self.closed and not self.open

    @property
    def orbit_count(self) -> int:
        return sum(len(lst) for lst in self.closed + self.open)

    @property
    def total_length(self) -> int:
        return sum(sum(lst) for lst in self.closed + self.open)

    def with_dim(self, d: int) -> "OrbitListStructure":
        return OrbitListStructure(self.closed, self.open, d)

    def to_json(self) -> dict:
        out = {"closed": [list(lst) for lst in self.closed], "open": [list(lst) for lst in self.open]}
        if self.dim is not None:
            out["d"] = self.dim
        return out

    @classmethod
    def from_json(cls, data: dict) -> "OrbitListStructure":
        d = data.get("d")
        return cls(
            tuple(tuple(lst) for lst in data.get("closed", [])),
            tuple(tuple(lst) for lst in data.get("open", [])),
            int(d) if d is not None else None,
        )

    def __str__(self) -> str:
        def fmt(lists):
            return "{" + ",".join("{" + ",".join(map(str, lst)) + "}" for lst in lists) + "}"

        return f"Lc={fmt(self.closed)} Lo={fmt(self.open)}"


@dataclass(frozen=True)
class ElementaryResult:
    structure: OrbitListStructure
    orbits: tuple[Orbit, ...]
    closed_indices: tuple[tuple[int, ...], ...]
    open_indices: tuple[tuple[int, ...], ...]
    first_open: frozenset[int]
    omega: frozenset[int]
    certified: bool = True

    def to_json(self) -> dict:
        return {
            "structure": self.structure.to_json(),
            "closed_indices": [list(x) for x in self.closed_indices],
            "open_indices": [list(x) for x in self.open_indices],
            "A": sorted(self.first_open),
            "Omega": sorted(self.omega),
            "certified": self.certified,
            "orbits": [o.to_json() for o in self.orbits],
        }


def group_orbit_lists(d: int, endpoints: dict[int, int], lengths: dict[int, int]):
    """Chain singular orbits i -> k(i) into maximal closed and open lists.

    ``endpoints`` maps each singular orbit index to the index of its endpoint e_k.
    """
    targets = list(endpoints.values())
    if len(set(targets)) != len(targets):
        raise ValueError("two singular orbits end at the same point")
    singular = set(endpoints)
    omega = frozenset(targets)
    first_open = frozenset(i for i in singular if i not in omega)
    open_lists = []
    used: set[int] = set()
    for start in sorted(first_open):
        lst = [start]
        cur = start
        while endpoints[cur] in singular:
            cur = endpoints[cur]
            lst.append(cur)
        used.update(lst)
        open_lists.append(tuple(lst))
    closed_lists = []
    for start in sorted(singular - used):
        if start in used:
            continue
        lst = [start]
        cur = endpoints[start]
        while cur != start:
            lst.append(cur)
            cur = endpoints[cur]
        used.update(lst)
        closed_lists.append(tuple(lst))
    structure = OrbitListStructure(
        tuple(tuple(lengths[i] for i in lst) for lst in closed_lists),
        tuple(tuple(lengths[i] for i in lst) for lst in open_lists),
        d,
    )
    return structure, tuple(closed_lists), tuple(open_lists), first_open, omega


def build_orbit_structure(spec: BirationalMapSpec, cap: int = DEFAULT_CAP) -> ElementaryResult:
    """Compute every O_j and, for an elementary map, its orbit-list structure.

    Raises :class:`NotElementary` when an orbit lands on Sigma_k* or on an
    indeterminate point other than a coordinate point.
    """
    orbits = tuple(compute_orbit(spec, j, cap) for j in range(spec.dim + 1))
    for o in orbits:
        if o.singular and o.verdict.kind is not VerdictKind.ENDS_AT_E:
            raise NotElementary(o)
    endpoints = {o.start_index: o.verdict.index for o in orbits if o.singular}
    lengths = {o.start_index: o.length for o in orbits if o.singular}
    structure, closed, opened, first_open, omega = group_orbit_lists(spec.dim, endpoints, lengths)
    return ElementaryResult(
        structure,
        orbits,
        closed,
        opened,
        first_open,
        omega,
        all(o.certified for o in orbits),
    )
