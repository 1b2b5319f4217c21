"""Pullback matrices on H^{1,1} of the blow-up and the degree data derived from them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .birmap import ElementaryResult, OrbitListStructure
from .exactmath import RatMatrix, RootInterval, UniPoly, charpoly, largest_real_root, power_entry_sequence


class StructureError(ValueError):
    """Index data that does not describe a valid set of orbit lists."""


@dataclass(frozen=True)
class FiberLabel:
    """Fiber over f^step(alpha_orbit) for the orbit with start index ``orbit``.

    ``step`` runs from 0 (the point alpha) to length - 1 (the endpoint e).
    """

    kind: str
    list_no: int
    orbit: int
    step: int
    length: int

    @property
    def is_endpoint(self) -> bool:
        return self.step == self.length - 1

    @property
    def is_alpha(self) -> bool:
        return self.step == 0

    def __str__(self) -> str:
        point = f"alpha_{self.orbit}" if self.step == 0 else f"f^{self.step}(alpha_{self.orbit})"
        if self.is_endpoint:
            point += "=e"
        return f"F[{point}]"


@dataclass(frozen=True)
class BlowupBasis:
    labels: tuple[Union[str, FiberLabel], ...]

    def __len__(self) -> int:
        return len(self.labels)

    def index_of(self, label) -> int:
        return self.labels.index(label)

    def names(self) -> list[str]:
        return [str(x) for x in self.labels]


@dataclass(frozen=True)
class PullbackMatrix:
    basis: BlowupBasis
    M: RatMatrix
    dim: int

    def charpoly(self) -> UniPoly:
        return charpoly(self.M)

    def to_json(self) -> dict:
        return {"d": self.dim, "basis": self.basis.names(), "M": self.M.to_json()}


def j_star_matrix(d: int) -> PullbackMatrix:
    """J^* on the basis H, E_0, ..., E_d of the blow-up of the coordinate points."""
    if d < 2:
        raise ValueError("d must be at least 2")
    n = d + 2
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = d
    for i in range(1, n):
        rows[0][i] = 1
        rows[i][0] = 1 - d
        for j in range(1, n):
            if i != j:
                rows[i][j] = -1
    basis = BlowupBasis(("H",) + tuple(f"E_{j}" for j in range(d + 1)))
    return PullbackMatrix(basis, RatMatrix.from_rows(rows), d)


@dataclass(frozen=True)
class ListIndexData:
    """Orbit lists with start indices, in chaining order, plus their lengths."""

    closed: tuple[tuple[int, ...], ...]
    open: tuple[tuple[int, ...], ...]
    lengths: dict
    dim: int

    @classmethod
    def from_structure(cls, s: OrbitListStructure, d: Optional[int] = None) -> "ListIndexData":
        dim = d if d is not None else s.dim
        if dim is None:
            raise StructureError("the dimension d is needed")
        lengths: dict[int, int] = {}
        closed, opened = [], []
        nxt = 0
        for lst in s.closed:
            idx = tuple(range(nxt, nxt + len(lst)))
            nxt += len(lst)
            lengths.update(zip(idx, lst))
            closed.append(idx)
        for lst in s.open:
            idx = tuple(range(nxt, nxt + len(lst)))
            nxt += len(lst)
            lengths.update(zip(idx, lst))
            opened.append(idx)
        return cls(tuple(closed), tuple(opened), lengths, dim)

    @classmethod
    def from_result(cls, r: ElementaryResult) -> "ListIndexData":
        lengths = {o.start_index: o.length for o in r.orbits if o.singular}
        return cls(r.closed_indices, r.open_indices, lengths, r.structure.dim)


def _predecessors(data: ListIndexData) -> dict[int, Optional[int]]:
    """Map each orbit index to the orbit whose endpoint is e_index (None for open-list starts)."""
    pred: dict[int, Optional[int]] = {}
    for lst in data.closed:
        for pos, i in enumerate(lst):
            pred[i] = lst[pos - 1]
    for lst in data.open:
        pred[lst[0]] = None
        for pos in range(1, len(lst)):
            pred[lst[pos]] = lst[pos - 1]
    return pred


def _validate(data: ListIndexData, first_open: Optional[frozenset], omega: Optional[frozenset]) -> None:
    seen: set[int] = set()
    for lst in data.closed + data.open:
        if not lst:
            raise StructureError("empty orbit list")
        for i in lst:
            if i in seen:
                raise StructureError(f"orbit {i} appears in two lists")
            if i not in data.lengths or data.lengths[i] < 1:
                raise StructureError(f"orbit {i} has no positive length")
            seen.add(i)
    starts = {lst[0] for lst in data.open}
    if first_open is not None and set(first_open) != starts:
        raise StructureError("the set A must be exactly the first orbits of the open lists")
    if omega is not None:
        expected = {i for lst in data.closed for i in lst} | {i for lst in data.open for i in lst[1:]}
        # open lists also end at an e_k outside every list; those k belong to Omega too
        if not expected <= set(omega):
            raise StructureError("Omega must contain the start index of every orbit not in A")
        if set(omega) & starts:
            raise StructureError("an open-list start cannot be an endpoint index")


def f_star_matrix(
    source: Union[OrbitListStructure, ElementaryResult, ListIndexData],
    d: Optional[int] = None,
) -> PullbackMatrix:
    """f_X^* on the ordered basis H, closed lists, then open lists.

    Within a list the orbits appear in reverse chaining order and within an
    orbit the fibers run from the endpoint back to alpha, so the action along
    an orbit sits on the subdiagonal.
    """
    first_open = omega = None
    if isinstance(source, ElementaryResult):
        data = ListIndexData.from_result(source)
        first_open, omega = source.first_open, source.omega
        if d is not None:
            data = ListIndexData(data.closed, data.open, data.lengths, d)
    elif isinstance(source, OrbitListStructure):
        data = ListIndexData.from_structure(source, d)
    else:
        data = source
    if data.dim is None or data.dim < 2:
        raise StructureError("d must be at least 2")
    _validate(data, first_open, omega)
    dim = data.dim

    labels: list = ["H"]
    for kind, lists in (("closed", data.closed), ("open", data.open)):
        for list_no, lst in enumerate(lists):
            for i in reversed(lst):
                n = data.lengths[i]
                for step in range(n - 1, -1, -1):
                    labels.append(FiberLabel(kind, list_no, i, step, n))
    pos = {(lab.orbit, lab.step): k for k, lab in enumerate(labels) if isinstance(lab, FiberLabel)}
    endpoint = {i: pos[(i, data.lengths[i] - 1)] for i in data.lengths}
    size = len(labels)
    rows = [[0] * size for _ in range(size)]

    rows[0][0] = dim
    for e in endpoint.values():
        rows[e][0] += 1 - dim
    pred = _predecessors(data)
    for i, n in data.lengths.items():
        for step in range(1, n):
            rows[pos[(i, step - 1)]][pos[(i, step)]] += 1
        col = pos[(i, 0)]
        rows[0][col] += 1
        for e in endpoint.values():
            rows[e][col] -= 1
        if pred[i] is not None:
            rows[endpoint[pred[i]]][col] += 1
    return PullbackMatrix(BlowupBasis(tuple(labels)), RatMatrix.from_rows(rows), dim)


def degree_sequence(pm: PullbackMatrix, n_max: int) -> list[int]:
    seq = power_entry_sequence(pm.M, n_max)
    out = []
    for v in seq:
        if v.denominator != 1 or v < 1:
            raise ValueError(f"degree entry {v} is not a positive integer")
        out.append(int(v))
    return out


def dynamical_degree(pm: PullbackMatrix, precision: int = 64) -> Optional[RootInterval]:
    """Largest real root of the characteristic polynomial of ``pm``."""
    return largest_real_root(pm.charpoly(), precision)
