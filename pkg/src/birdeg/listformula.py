"""Closed-form characteristic polynomials from orbit-list structures.

Also holds the Noetherian specialisations, the special cases with linear
degree growth, and the structural comparisons (longer orbits, limits as one
orbit grows, adding or moving lists) used to reason about how the dynamical
degree depends on the structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Optional, Sequence

from .birmap import OrbitListStructure
from .exactmath import RootInterval, UniPoly, X, compare_roots, largest_real_root

MAX_LISTS_FOR_MATCHING = 8


class ListKind(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class ListPolys:
    T: UniPoly
    S: UniPoly
    kind: ListKind


def _proper_intervals(n: int, cyclic: bool) -> list[frozenset[int]]:
    out = []
    if cyclic:
        for length in range(1, n):
            for start in range(n):
                out.append(frozenset((start + k) % n for k in range(length)))
    else:
        for start in range(n):
            for stop in range(start + 1, n + 1):
                if stop - start < n:
                    out.append(frozenset(range(start, stop)))
    return out


def t_s_polys(lengths: Sequence[int], kind: ListKind | str) -> ListPolys:
    kind = ListKind(kind)
    lengths = [int(v) for v in lengths]
    if not lengths:
        raise ValueError("orbit list must be nonempty")
    if any(v < 1 for v in lengths):
        raise ValueError("orbit lengths must be positive")
    n = len(lengths)
    total = sum(lengths)
    closed = kind is ListKind.CLOSED
    coeffs = [0] * (total + 1)
    for interval in _proper_intervals(n, closed):
        coeffs[sum(v for k, v in enumerate(lengths) if k not in interval)] += 1
    coeffs[0] += n if closed else 1
    T = UniPoly.monomial(total) - 1 if closed else UniPoly.monomial(total)
    return ListPolys(T, UniPoly(coeffs), kind)


def charpoly_formula(s: OrbitListStructure, d: Optional[int] = None) -> UniPoly:
    """(x - d) prod T + (x - 1) sum_i S_i prod_{k != i} T_k over every list, made monic."""
    d = _dim(s, d)
    polys = [t_s_polys(lst, ListKind.CLOSED) for lst in s.closed]
    polys += [t_s_polys(lst, ListKind.OPEN) for lst in s.open]
    prod_all = UniPoly.const(1)
    for lp in polys:
        prod_all = prod_all * lp.T
    chi = (X - d) * prod_all
    for i, lp in enumerate(polys):
        term = lp.S
        for k, other in enumerate(polys):
            if k != i:
                term = term * other.T
        chi = chi + (X - 1) * term
    return chi.monic()


def _dim(s: OrbitListStructure, d: Optional[int]) -> int:
    dim = d if d is not None else s.dim
    if dim is None:
        raise ValueError("the dimension d is needed")
    if dim < 2:
        raise ValueError("d must be at least 2")
    return int(dim)


def noetherian_structure(d: int, lengths: Sequence[int]) -> OrbitListStructure:
    return OrbitListStructure(tuple((int(n),) for n in lengths), (), d)


def noetherian_charpoly(d: int, lengths: Sequence[int]) -> UniPoly:
    """(x - d) prod (x^N_j - 1) + (x - 1) sum_j prod_{i != j} (x^N_i - 1)."""
    if len(lengths) > d + 1:
        raise ValueError("at most d + 1 orbit lengths")
    factors = [UniPoly.monomial(int(n)) - 1 for n in lengths]
    if any(int(n) < 1 for n in lengths):
        raise ValueError("orbit lengths must be positive")
    prod_all = UniPoly.const(1)
    for f in factors:
        prod_all = prod_all * f
    chi = (X - d) * prod_all
    for j in range(len(factors)):
        term = UniPoly.const(1)
        for i, f in enumerate(factors):
            if i != j:
                term = term * f
        chi = chi + (X - 1) * term
    return chi.monic()


def unit_count(lengths: Sequence[int]) -> int:
    return sum(1 for n in lengths if int(n) == 1)


def reduced_dimension(d: int, lengths: Sequence[int]) -> int:
    """d minus the number of orbits of length 1."""
    return d - unit_count(lengths)


class SpecialCase(str, Enum):
    A = "Case611a"
    B = "Case611b"
    C = "Case611c"


def detect_special_case(d: int, lengths: Sequence[int]) -> Optional[SpecialCase]:
    """Recognise the Noetherian configurations whose degrees grow at most linearly."""
    ns = sorted(int(n) for n in lengths)
    if not ns:
        return None
    k = len(ns) - 1
    if k == d - 2 and all(n == 1 for n in ns):
        return SpecialCase.A
    if k == d - 1:
        if all(n == 1 for n in ns[:-1]):
            return SpecialCase.B
        if k >= 1 and all(n == 1 for n in ns[:-2]) and ns[-2] == ns[-1] == 2:
            return SpecialCase.C
    return None


# ---------------------------------------------------------------------------
# dynamical degree of a structure


def delta_of_structure(s: OrbitListStructure, d: Optional[int] = None, precision: int = 64) -> RootInterval:
    chi = charpoly_formula(s, d)
    root = largest_real_root(chi, precision)
    if root is None:
        raise ValueError(f"characteristic polynomial {chi.to_text()} has no real root")
    return root


def compare_deltas(s1: OrbitListStructure, s2: OrbitListStructure, d: Optional[int] = None) -> int:
    """Sign of delta(s2) - delta(s1), decided exactly."""
    return compare_roots(delta_of_structure(s2, d), delta_of_structure(s1, d))


# ---------------------------------------------------------------------------
# structural comparisons


def _rotations(lst: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [lst[i:] + lst[:i] for i in range(len(lst))] or [lst]


def _dominates(small: tuple[int, ...], big: tuple[int, ...], cyclic: bool) -> bool:
    if len(small) != len(big):
        return False
    candidates = _rotations(big) if cyclic else [big]
    return any(all(b >= a for a, b in zip(small, c)) for c in candidates)


def _lists_dominated(small, big, cyclic: bool) -> bool:
    if len(small) != len(big):
        return False
    if len(small) > MAX_LISTS_FOR_MATCHING:
        raise ValueError(f"more than {MAX_LISTS_FOR_MATCHING} lists")
    return any(all(_dominates(a, b, cyclic) for a, b in zip(small, perm)) for perm in permutations(big))


def has_longer_orbits(s1: OrbitListStructure, s2: OrbitListStructure) -> bool:
    """True iff s2 has the same list pattern as s1 and every orbit of s2 is at least as long."""
    return _lists_dominated(s1.closed, s2.closed, True) and _lists_dominated(s1.open, s2.open, False)


def limit_structure(s: OrbitListStructure, kind: ListKind | str, list_no: int, position: int) -> OrbitListStructure:
    """Structure whose dynamical degree is the limit as orbit ``position`` (1-based) of a list grows."""
    kind = ListKind(kind)
    lists = s.closed if kind is ListKind.CLOSED else s.open
    if not 0 <= list_no < len(lists):
        raise ValueError(f"no {kind.value} list number {list_no}")
    lst = lists[list_no]
    ell = len(lst)
    if not 1 <= position <= ell:
        raise ValueError(f"position {position} outside 1..{ell}")
    i = position - 1
    if kind is ListKind.CLOSED:
        rest = lst[i + 1:] + lst[:i]
        closed = s.closed[:list_no] + s.closed[list_no + 1:]
        opened = s.open + ((rest,) if rest else ())
        return OrbitListStructure(closed, opened, s.dim)
    pieces = tuple(p for p in (lst[:i], lst[i + 1:]) if p)
    opened = s.open[:list_no] + pieces + s.open[list_no + 1:]
    return OrbitListStructure(s.closed, opened, s.dim)


def with_orbit_length(s: OrbitListStructure, kind: ListKind | str, list_no: int, position: int, length: int) -> OrbitListStructure:
    kind = ListKind(kind)
    lists = list(s.closed if kind is ListKind.CLOSED else s.open)
    lst = list(lists[list_no])
    lst[position - 1] = length
    lists[list_no] = tuple(lst)
    if kind is ListKind.CLOSED:
        return OrbitListStructure(tuple(lists), s.open, s.dim)
    return OrbitListStructure(s.closed, tuple(lists), s.dim)


def with_inserted_orbit(s: OrbitListStructure, kind: ListKind | str, list_no: int, j: int, length: int) -> OrbitListStructure:
    """Insert an orbit of the given length after the j-th orbit of a list."""
    kind = ListKind(kind)
    lists = list(s.closed if kind is ListKind.CLOSED else s.open)
    lst = list(lists[list_no])
    lst.insert(j, length)
    lists[list_no] = tuple(lst)
    if kind is ListKind.CLOSED:
        return OrbitListStructure(tuple(lists), s.open, s.dim)
    return OrbitListStructure(s.closed, tuple(lists), s.dim)


def insertion_threshold(
    s: OrbitListStructure,
    kind: ListKind | str,
    list_no: int,
    j: int,
    d: Optional[int] = None,
    m_max: int = 256,
) -> Optional[int]:
    """Smallest M for which inserting an orbit of length M after orbit j raises delta.

    Found by bisection over M, using that delta of the enlarged structure is
    monotone in M.  Returns None when no M up to ``m_max`` raises delta.
    """
    base = delta_of_structure(s, d)

    def raises(m: int) -> bool:
        return compare_roots(delta_of_structure(with_inserted_orbit(s, kind, list_no, j, m), d), base) > 0

    if not raises(m_max):
        return None
    lo, hi = 0, m_max
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if raises(mid):
            hi = mid
        else:
            lo = mid
    return hi


def add_list(s: OrbitListStructure, lst: Sequence[int], kind: ListKind | str) -> OrbitListStructure:
    lst = tuple(int(v) for v in lst)
    if ListKind(kind) is ListKind.CLOSED:
        return OrbitListStructure(s.closed + (lst,), s.open, s.dim)
    return OrbitListStructure(s.closed, s.open + (lst,), s.dim)


def move_open_to_closed(s: OrbitListStructure, list_no: int) -> OrbitListStructure:
    lst = s.open[list_no]
    return OrbitListStructure(s.closed + (lst,), s.open[:list_no] + s.open[list_no + 1:], s.dim)


def split_unit_list(s: OrbitListStructure, list_no: int) -> OrbitListStructure:
    """Replace a closed list {1,...,1} of n ones by n closed singletons {1}."""
    lst = s.closed[list_no]
    if any(v != 1 for v in lst):
        raise ValueError("only a closed list of ones can be split")
    closed = s.closed[:list_no] + s.closed[list_no + 1:] + tuple((1,) for _ in lst)
    return OrbitListStructure(closed, s.open, s.dim)


def unit_cycle_bound(s: OrbitListStructure) -> OrbitListStructure:
    """One closed list of ones with as many orbits as ``s``: its delta is a lower bound."""
    k = s.orbit_count
    if k == 0:
        return OrbitListStructure((), (), s.dim)
    return OrbitListStructure(((1,) * k,), (), s.dim)


class Relation(str, Enum):
    EQUAL = "equal"
    LONGER_ORBITS = "longer-orbits"
    SHORTER_ORBITS = "shorter-orbits"
    ADDED_LIST = "added-list"
    REMOVED_LIST = "removed-list"
    OPEN_TO_CLOSED = "open-to-closed"
    CLOSED_TO_OPEN = "closed-to-open"
    SPLIT_UNITS = "split-unit-list"
    MERGED_UNITS = "merged-unit-list"
    UNRELATED = "unrelated"


def _remove_one(lists, target, cyclic):
    key = (lambda l: min(_rotations(l))) if cyclic else (lambda l: l)
    t = key(target)
    for k, l in enumerate(lists):
        if key(l) == t:
            return lists[:k] + lists[k + 1:]
    return None


def _is_extension(s1: OrbitListStructure, s2: OrbitListStructure) -> bool:
    """s2 = s1 plus exactly one extra list."""
    if len(s2.closed) == len(s1.closed) + 1 and len(s2.open) == len(s1.open):
        for extra in s2.closed:
            rest = _remove_one(s2.closed, extra, True)
            if OrbitListStructure(rest, s2.open) == OrbitListStructure(s1.closed, s1.open):
                return True
    if len(s2.open) == len(s1.open) + 1 and len(s2.closed) == len(s1.closed):
        for extra in s2.open:
            rest = _remove_one(s2.open, extra, False)
            if OrbitListStructure(s2.closed, rest) == OrbitListStructure(s1.closed, s1.open):
                return True
    return False


def _is_open_to_closed(s1: OrbitListStructure, s2: OrbitListStructure) -> bool:
    if len(s2.open) + 1 != len(s1.open) or len(s2.closed) != len(s1.closed) + 1:
        return False
    for k in range(len(s1.open)):
        if move_open_to_closed(s1, k) == s2:
            return True
    return False


def _is_unit_split(s1: OrbitListStructure, s2: OrbitListStructure) -> bool:
    for k, lst in enumerate(s1.closed):
        if len(lst) >= 2 and all(v == 1 for v in lst) and split_unit_list(s1, k) == s2:
            return True
    return False


def structure_relations(s1: OrbitListStructure, s2: OrbitListStructure) -> list[Relation]:
    """Every comparison relation that holds between s1 and s2 (read as s1 -> s2)."""
    if s1 == s2:
        return [Relation.EQUAL]
    out = []
    if has_longer_orbits(s1, s2):
        out.append(Relation.LONGER_ORBITS)
    if has_longer_orbits(s2, s1):
        out.append(Relation.SHORTER_ORBITS)
    if _is_extension(s1, s2):
        out.append(Relation.ADDED_LIST)
    if _is_extension(s2, s1):
        out.append(Relation.REMOVED_LIST)
    if _is_open_to_closed(s1, s2):
        out.append(Relation.OPEN_TO_CLOSED)
    if _is_open_to_closed(s2, s1):
        out.append(Relation.CLOSED_TO_OPEN)
    if _is_unit_split(s1, s2):
        out.append(Relation.SPLIT_UNITS)
    if _is_unit_split(s2, s1):
        out.append(Relation.MERGED_UNITS)
    return out or [Relation.UNRELATED]


def predicted_order(rel: Relation, s1: OrbitListStructure, d: int) -> Optional[str]:
    """What the comparison theorems say about delta(s2) versus delta(s1).

    Returns ">=", ">", "<=", "<", "==" or None when nothing is predicted.
    """
    if rel is Relation.EQUAL:
        return "=="
    if rel in (Relation.LONGER_ORBITS, Relation.SHORTER_ORBITS):
        base = delta_of_structure(s1, d)
        strict = compare_roots(base, _one()) > 0
        if rel is Relation.LONGER_ORBITS:
            return ">" if strict else ">="
        return "<" if strict else "<="
    if rel is Relation.ADDED_LIST:
        return "<="
    if rel is Relation.REMOVED_LIST:
        return ">="
    if rel is Relation.OPEN_TO_CLOSED:
        strict = compare_roots(delta_of_structure(s1, d), _one()) > 0
        return "<" if strict else "<="
    if rel is Relation.CLOSED_TO_OPEN:
        return ">="
    if rel is Relation.SPLIT_UNITS:
        # never strict: splitting multiplies chi by (x - 1)^n / (x^n - 1)
        return ">="
    if rel is Relation.MERGED_UNITS:
        return "<="
    return None


def _one() -> RootInterval:
    return largest_real_root(X - 1)


def order_holds(sign: int, predicted: str) -> bool:
    return {
        "==": sign == 0,
        ">=": sign >= 0,
        ">": sign > 0,
        "<=": sign <= 0,
        "<": sign < 0,
    }[predicted]
