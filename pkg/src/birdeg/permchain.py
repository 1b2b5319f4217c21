"""Permutation mappings and the regularisation of orbit collisions by singular chains.

A permutation mapping is f = L o J with L = 1 a^T - P for a permutation
matrix P and weights a summing to 2.  Such an f sends the diagonal point
eta_j(c) to eta_{p(j)}(c + a_j - 1), so every orbit that starts on a diagonal
is described by a single rational parameter and its singularity can be
decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .birmap import BirationalMapSpec, MapError, OrbitListStructure
from .cohomology import BlowupBasis, PullbackMatrix
from .exactmath import RatMatrix, rat_str, to_rat
from .projgeom import ProjPoint, e_point, eta_point, sigma_point


class PermutationSpecError(ValueError):
    """Invalid permutation-map data (not a bijection, weights not summing to 2, singular L)."""


class NotRegularizable(Exception):
    """The singular orbits do not fit the admissible-chain construction."""


@dataclass(frozen=True)
class PermutationMapSpec:
    dim: int
    perm: tuple[int, ...]
    a: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(v) for v in self.perm))
        object.__setattr__(self, "a", tuple(to_rat(v) for v in self.a))
        n = self.dim + 1
        if self.dim < 2:
            raise PermutationSpecError("d must be at least 2")
        if len(self.perm) != n or sorted(self.perm) != list(range(n)):
            raise PermutationSpecError(f"p must be a permutation of 0..{self.dim}")
        if len(self.a) != n:
            raise PermutationSpecError(f"need {n} weights a_j")
        if sum(self.a) != 2:
            raise PermutationSpecError(f"the weights a_j must sum to 2, got {rat_str(sum(self.a))}")

    @classmethod
    def from_json(cls, data: dict) -> "PermutationMapSpec":
        try:
            return cls(int(data["d"]), tuple(data["p"]), tuple(data["a"]))
        except (KeyError, TypeError) as exc:
            raise PermutationSpecError(f"malformed permutation JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"d": self.dim, "p": list(self.perm), "a": [rat_str(v) for v in self.a]}

    def cycle_length(self, j: int) -> int:
        t, k = 1, self.perm[j]
        while k != j:
            k = self.perm[k]
            t += 1
        return t

    def order(self) -> int:
        from math import lcm

        out = 1
        for j in range(self.dim + 1):
            out = lcm(out, self.cycle_length(j))
        return out

    def image(self, p: ProjPoint) -> ProjPoint:
        from .birmap import apply_f

        return apply_f(build_L(self), p)


def build_L(spec: PermutationMapSpec) -> BirationalMapSpec:
    """Column j is eta_{p(j)}(a_j): a_j in every row except a_j - 1 in row p(j)."""
    n = spec.dim + 1
    rows = [[spec.a[j] - (1 if i == spec.perm[j] else 0) for j in range(n)] for i in range(n)]
    try:
        return BirationalMapSpec(spec.dim, RatMatrix.from_rows(rows))
    except MapError as exc:
        raise PermutationSpecError(f"L not invertible for these weights ({exc})") from exc


def identity_permutation(d: int) -> tuple[int, ...]:
    return tuple(range(d + 1))


# ---------------------------------------------------------------------------
# analytic orbits


class StartKind(str, Enum):
    ALPHA = "alpha"
    BETA = "beta"


class OrbitType(str, Enum):
    AE = "alpha-e"
    AS = "alpha-sigma"
    BE = "beta-e"
    BS = "beta-sigma"


@dataclass(frozen=True)
class SingularOrbitRecord:
    """A singular orbit starting at alpha_j = eta_{p(j)}(a_j) or beta_j = eta_{p(j)}(a_j - 1)."""

    start_kind: StartKind
    start: int
    length: int
    end_diag: int
    ends_at_e: bool
    c_values: tuple[Fraction, ...] = field(repr=False, compare=False)
    diags: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def kind(self) -> OrbitType:
        if self.start_kind is StartKind.ALPHA:
            return OrbitType.AE if self.ends_at_e else OrbitType.AS
        return OrbitType.BE if self.ends_at_e else OrbitType.BS

    @property
    def start_diag(self) -> int:
        return self.diags[0]

    def points(self, d: int) -> tuple[ProjPoint, ...]:
        return tuple(eta_point(k, c, d) for k, c in zip(self.diags, self.c_values))

    def label(self) -> str:
        s = "alpha" if self.start_kind is StartKind.ALPHA else "beta"
        t = "e" if self.ends_at_e else "sigma"
        return f"{{{s}@D{self.start_diag},{t}_{self.end_diag}}}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "start_index": self.start,
            "start_diagonal": self.start_diag,
            "length": self.length,
            "end": ("e" if self.ends_at_e else "sigma") + f"_{self.end_diag}",
            "c": [rat_str(c) for c in self.c_values],
        }


@dataclass(frozen=True)
class AnalyticNonsingular:
    start_kind: StartKind
    start: int
    proven: bool
    bound: int

    def to_json(self) -> dict:
        return {
            "start": f"{self.start_kind.value}_{self.start}",
            "verdict": "ProvenNonsingular" if self.proven else f"NonsingularWithinBound({self.bound})",
        }


AnalyticVerdict = Union[SingularOrbitRecord, AnalyticNonsingular]


def start_parameter(spec: PermutationMapSpec, j: int, kind: StartKind | str) -> Fraction:
    kind = StartKind(kind)
    return spec.a[j] if kind is StartKind.ALPHA else spec.a[j] - 1


def analytic_orbit(spec: PermutationMapSpec, j: int, kind: StartKind | str = StartKind.ALPHA, n_max: Optional[int] = None) -> AnalyticVerdict:
    """Decide exactly whether the alpha- or beta-orbit of index j is singular.

    Point m of the orbit is eta_{p^{m+1}(j)}(c_m) with c_{m+1} = c_m + a_{p^{m+1}(j)} - 1;
    it is e when c_m = 0 and sigma when c_m = 1.  Over one cycle of p the
    parameter changes by a fixed increment, so the first hit is found in
    closed form.
    """
    kind = StartKind(kind)
    if not 0 <= j <= spec.dim:
        raise ValueError(f"index {j} out of range")
    period = spec.cycle_length(j)
    if n_max is None:
        n_max = 64 * period
    c = start_parameter(spec, j, kind)
    diag = spec.perm[j]
    cs, ds = [], []
    for _ in range(period):
        cs.append(c)
        ds.append(diag)
        c = c + spec.a[diag] - 1
        diag = spec.perm[diag]
    delta = c - cs[0]
    best: Optional[tuple[int, bool]] = None
    for m, cm in enumerate(cs):
        for target, is_e in ((Fraction(0), True), (Fraction(1), False)):
            if delta == 0:
                if cm != target:
                    continue
                step = m
            else:
                k = (target - cm) / delta
                if k.denominator != 1 or k < 0:
                    continue
                step = m + int(k) * period
            if best is None or step < best[0]:
                best = (step, is_e)
    if best is None:
        return AnalyticNonsingular(kind, j, True, n_max)
    step, is_e = best
    if step + 1 > n_max:
        return AnalyticNonsingular(kind, j, False, n_max)
    c_vals, d_vals = [], []
    c = start_parameter(spec, j, kind)
    diag = spec.perm[j]
    for _ in range(step + 1):
        c_vals.append(c)
        d_vals.append(diag)
        c = c + spec.a[diag] - 1
        diag = spec.perm[diag]
    return SingularOrbitRecord(kind, j, step + 1, d_vals[-1], is_e, tuple(c_vals), tuple(d_vals))


def singular_orbits(spec: PermutationMapSpec, n_max: Optional[int] = None) -> list[SingularOrbitRecord]:
    out = []
    for kind in (StartKind.ALPHA, StartKind.BETA):
        for j in range(spec.dim + 1):
            v = analytic_orbit(spec, j, kind, n_max)
            if isinstance(v, SingularOrbitRecord):
                out.append(v)
    return out


def diagonal_identity_holds(spec: PermutationMapSpec, j: int, c) -> bool:
    """f(eta_j(c)) == eta_{p(j)}(c + a_j - 1), checked by evaluating f."""
    from .birmap import apply_f

    c = to_rat(c)
    if c == 0:
        raise ValueError("eta_j(0) = e_j is indeterminate")
    lhs = apply_f(build_L(spec), eta_point(j, c, spec.dim))
    return lhs == eta_point(spec.perm[j], c + spec.a[j] - 1, spec.dim)


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class Chain:
    """An admissible chain: orbits interleaved with lower-generation chains.

    ``items`` holds SingularOrbitRecord entries and integer ids of nested chains.
    ``sequence`` is the flattened (point, level) path from the starting alpha
    to the final e, where level counts this chain plus the nested chains that
    contain the point.
    """

    cid: int
    generation: int
    items: tuple
    sequence: tuple[tuple[ProjPoint, int], ...]
    start_index: int
    end_diag: int

    def to_json(self, d: int, chains: Sequence["Chain"]) -> dict:
        parts = []
        for it in self.items:
            if isinstance(it, SingularOrbitRecord):
                parts.append(it.label())
            else:
                parts.append(f"chain#{it}")
        return {
            "id": self.cid,
            "generation": self.generation,
            "parts": parts,
            "start": f"Sigma_{self.start_index}",
            "end": f"e_{self.end_diag}",
            "points": [f"{p}^{lvl}" for p, lvl in self.sequence],
        }


@dataclass(frozen=True)
class ChainSet:
    spec: PermutationMapSpec
    chains: tuple[Chain, ...]
    heights: dict
    orbits: tuple[SingularOrbitRecord, ...]
    excluded: tuple[SingularOrbitRecord, ...]

    @property
    def partial(self) -> bool:
        return bool(self.excluded)

    @property
    def max_generation(self) -> int:
        return max((c.generation for c in self.chains), default=0)

    def generation(self, g: int) -> tuple[Chain, ...]:
        return tuple(c for c in self.chains if c.generation == g)

    def membership_count(self, p: ProjPoint) -> int:
        return sum(1 for c in self.chains if any(q == p for q, _ in c.sequence))

    def to_json(self) -> dict:
        d = self.spec.dim
        return {
            "generations": {
                str(g): [c.to_json(d, self.chains) for c in self.generation(g)]
                for g in range(1, self.max_generation + 1)
            },
            "orbits": [o.to_json() for o in self.orbits],
            "heights": {str(p): h for p, h in sorted(self.heights.items(), key=lambda kv: str(kv[0]))},
            "excluded": [o.label() for o in self.excluded],
            "partial": self.partial,
        }


def build_chains(spec: PermutationMapSpec, n_max: Optional[int] = None) -> ChainSet:
    """Assemble every admissible chain together with point heights.

    A chain starts with the alpha-orbit of some index.  If that orbit ends at
    e, it is a first-generation chain.  If it ends at sigma_i, it must be
    followed by the chain starting at the alpha on D_{p(i)}; after a chain
    ending at e_k comes the beta-orbit on D_{p(k)}, and so on until a
    beta-orbit ends at e.  Orbits are deterministic, so each start index
    yields at most one chain.
    """
    d = spec.dim
    n = d + 1
    alpha = {j: analytic_orbit(spec, j, StartKind.ALPHA, n_max) for j in range(n)}
    beta = {j: analytic_orbit(spec, j, StartKind.BETA, n_max) for j in range(n)}
    singular = [v for v in list(alpha.values()) + list(beta.values()) if isinstance(v, SingularOrbitRecord)]

    # memo[j]: None when no chain starts with the alpha-orbit of j, else (items, generation, end)
    memo: dict[int, Optional[tuple]] = {}
    visiting: set[int] = set()

    def chain_at(j: int) -> Optional[tuple]:
        """(items, generation) for the chain starting with the alpha-orbit of j."""
        if j in memo:
            return memo[j]
        if j in visiting:
            raise NotRegularizable(f"orbit collisions starting at alpha_{j} loop back on themselves")
        visiting.add(j)
        result = _assemble(j)
        visiting.discard(j)
        memo[j] = result
        return result

    def _assemble(j: int) -> Optional[tuple]:
        first = alpha[j]
        if not isinstance(first, SingularOrbitRecord):
            return None
        items: list = [first]
        gen = 1
        current = first
        while not current.ends_at_e:
            # f(sigma_i) = L e_i = alpha_i, the alpha on D_{p(i)}
            nxt_index = current.end_diag
            sub = chain_at(nxt_index)
            if sub is None:
                return None
            items.append(("chain", nxt_index))
            gen = max(gen, sub[1] + 1)
            # the nested chain ends at e_k; its fiber direction along D_k maps to beta_k on D_{p(k)}
            k = sub[2]
            b = beta[k]
            if not isinstance(b, SingularOrbitRecord):
                return None
            items.append(b)
            current = b
        return (tuple(items), gen, current.end_diag)

    starts = [j for j in range(n) if chain_at(j) is not None]
    ids = {j: cid for cid, j in enumerate(sorted(starts, key=lambda j: (memo[j][1], j)))}

    seq_memo: dict[int, tuple] = {}

    def sequence(j: int) -> tuple:
        if j in seq_memo:
            return seq_memo[j]
        out = []
        for it in memo[j][0]:
            if isinstance(it, SingularOrbitRecord):
                out.extend((p, 1) for p in it.points(d))
            else:
                out.extend((p, lvl + 1) for p, lvl in sequence(it[1]))
        seq_memo[j] = tuple(out)
        return seq_memo[j]

    chains = []
    for j in sorted(starts, key=lambda j: ids[j]):
        items, gen, end = memo[j]
        items = tuple(it if isinstance(it, SingularOrbitRecord) else ids[it[1]] for it in items)
        chains.append(Chain(ids[j], gen, items, sequence(j), j, end))

    heights: dict[ProjPoint, int] = {}
    levels: dict[ProjPoint, list[int]] = {}
    for ch in chains:
        seen_here = set()
        for p, lvl in ch.sequence:
            if p in seen_here:
                raise NotRegularizable(f"chain {ch.cid} passes through {p} twice")
            seen_here.add(p)
            heights[p] = heights.get(p, 0) + 1
            levels.setdefault(p, []).append(lvl)
    for p, lv in levels.items():
        if sorted(lv) != list(range(1, heights[p] + 1)):
            raise NotRegularizable(f"fibers over {p} are not stacked consistently (levels {sorted(lv)})")
    ends = [c.end_diag for c in chains]
    if len(set(ends)) != len(ends):
        raise NotRegularizable("two chains end at the same point e_k")

    used = set()
    for ch in chains:
        for it in ch.items:
            if isinstance(it, SingularOrbitRecord):
                used.add((it.start_kind, it.start))
    excluded = tuple(o for o in singular if (o.start_kind, o.start) not in used)
    return ChainSet(spec, tuple(chains), heights, tuple(singular), excluded)


@dataclass(frozen=True)
class ChainFiber:
    point: ProjPoint
    level: int

    def __str__(self) -> str:
        return f"F^{self.level}{self.point}"


def chain_pullback_matrix(chains: ChainSet) -> PullbackMatrix:
    """f_X^* on H plus the fibers F^j(p), 1 <= j <= h(p), of every chain point.

    Along a chain the fibers pull back one step toward its start; the first
    fiber pulls back to the class of Sigma_s, where alpha_s starts the chain.
    """
    spec = chains.spec
    d = spec.dim
    labels: list = ["H"]
    for ch in chains.chains:
        for p, lvl in reversed(ch.sequence):
            labels.append(ChainFiber(p, lvl))
    pos = {lab: k for k, lab in enumerate(labels) if isinstance(lab, ChainFiber)}
    if len(pos) != len(labels) - 1:
        raise NotRegularizable("a fiber belongs to two chains")
    size = len(labels)
    rows = [[0] * size for _ in range(size)]

    def hat(p: ProjPoint) -> list[int]:
        return [pos[ChainFiber(p, lvl)] for lvl in range(1, chains.heights.get(p, 0) + 1)]

    e_points = {k: e_point(k, d) for k in range(d + 1)}
    e_fibers = {k: hat(p) for k, p in e_points.items()}

    rows[0][0] = d
    for k, fibers in e_fibers.items():
        for r in fibers:
            rows[r][0] += 1 - d
    for ch in chains.chains:
        seq = ch.sequence
        for t in range(1, len(seq)):
            rows[pos[ChainFiber(*seq[t - 1])]][pos[ChainFiber(*seq[t])]] += 1
        col = pos[ChainFiber(*seq[0])]
        s = ch.start_index
        rows[0][col] += 1
        for k, fibers in e_fibers.items():
            if k == s:
                continue
            for r in fibers:
                rows[r][col] -= 1
        for r in hat(sigma_point(s, d)):
            rows[r][col] -= 1
    return PullbackMatrix(BlowupBasis(tuple(labels)), RatMatrix.from_rows(rows), d)


def elementary_structure_of(chains: ChainSet) -> Optional[OrbitListStructure]:
    """When every chain is a single alpha-e orbit, the equivalent orbit-list structure."""
    if any(c.generation != 1 for c in chains.chains) or chains.partial:
        return None
    from .birmap import group_orbit_lists

    endpoints = {}
    lengths = {}
    for c in chains.chains:
        rec = c.items[0]
        endpoints[rec.start] = rec.end_diag
        lengths[rec.start] = rec.length
    structure, *_ = group_orbit_lists(chains.spec.dim, endpoints, lengths)
    return structure
