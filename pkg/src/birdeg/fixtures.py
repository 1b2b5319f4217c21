"""Worked-example maps and random structure generators shared by the tests and the CLI.

The printed example matrices are reproduced verbatim.  Where a printed matrix
does not behave as its surrounding text describes, the behaviour the code
actually finds is recorded next to the fixture; the tests assert on that.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .birmap import BirationalMapSpec, OrbitListStructure
from .permchain import (
    AnalyticNonsingular,
    PermutationMapSpec,
    StartKind,
    analytic_orbit,
    build_L,
    identity_permutation,
)


def _spec(rows, name: str, scale: Fraction = Fraction(1)) -> BirationalMapSpec:
    scaled = [[Fraction(v) * scale for v in r] for r in rows]
    s = BirationalMapSpec.from_rows(scaled)
    return BirationalMapSpec(s.dim, s.L, name)


def A1() -> BirationalMapSpec:
    return _spec([[1, 2, 1], [1, 0, -1], [1, -2, 1]], "A1")


def A2(q) -> BirationalMapSpec:
    q = Fraction(q)
    t = -1 + q * q
    return _spec([[2, t, t], [2, -1 + q, -1 - q], [2, -1 - q, -1 + q]], f"A2(q={q})")


def A3(ell) -> BirationalMapSpec:
    l = Fraction(ell)
    if l in (0, -1) or 1 + 2 * l == 0:
        raise ValueError("ell must avoid 0, -1 and -1/2")
    rows = [
        [1 - (1 + l) * (-1 + 2 * l) / (l * (1 + 2 * l)), -1 / l, (3 + 2 * l) / (1 + 2 * l)],
        [(1 - 2 * l) / (l * (1 + 2 * l)), 1 - 1 / (l * (1 + l)), (3 + 2 * l) / ((1 + l) * (1 + 2 * l))],
        [(-1 + 2 * l) / (1 + 2 * l), 1 / (1 + l), 1 - l * (3 + 2 * l) / ((1 + l) * (1 + 2 * l))],
    ]
    return _spec(rows, f"A3(ell={l})")


def B1() -> BirationalMapSpec:
    return _spec([[1, -8, 16], [-2, 7, 4], [4, 4, 1]], "B1", Fraction(1, 9))


def B2() -> BirationalMapSpec:
    return _spec([[1, 22, 77], [1, -8, 7], [1, 2, -3]], "B2", Fraction(1, 10))


def C(q) -> BirationalMapSpec:
    """The family with first-row entries -1 - q^2, as printed."""
    q = Fraction(q)
    t = -1 - q * q
    return _spec([[2, t, t], [2, -1 + q, -1 - q], [2, -1 - q, -1 + q]], f"C(q={q})")


def C_sym(q) -> BirationalMapSpec:
    """The same family with first-row entries -1 + q^2.

    This variant realises the singular cases q = 1 and q = -1 described for
    the family (orbit lists {{2},{1,1}} and {{2},{1},{1}}); it coincides with A2.
    """
    q = Fraction(q)
    t = -1 + q * q
    return _spec([[2, t, t], [2, -1 + q, -1 - q], [2, -1 - q, -1 + q]], f"Csym(q={q})")


# Observed orbit-list structures of the fixtures above (checked against the oracle).
OBSERVED = {
    "A1": None,  # alpha_1 lands on Sigma_1 away from every e_k: not elementary
    "A2(q=2)": "{{2},{4},{4}}",
    "A3(ell=1)": "{{2}}",
    "B1": "{{3}}",
    "B2": "{{2}}",
    "Csym(q=1)": "{{2},{1,1}}",
    "Csym(q=-1)": "{{2},{1},{1}}",
}


THREE_GEN_A = ("2/3", "4/3", "-5", "7", "1/2", "1/2", "11", "-9", "-3/2", "9/2", "4", "-3", "7/2", "-3/2", "-11")


def three_generation_map() -> PermutationMapSpec:
    """Cyclic permutation map on P^14 whose chains reproduce the three-generation picture.

    p(j) = j + 1 mod 15.  The weights make the seven length-2 orbits
    alpha on D1, D3, D5, D11 and beta on D7, D9, D13 land where the
    chain diagram needs them, with L invertible.
    """
    d = 14
    perm = tuple((j + 1) % (d + 1) for j in range(d + 1))
    return PermutationMapSpec(d, perm, THREE_GEN_A)


def noetherian_weights(lengths: dict[int, int], d: int, rng: random.Random) -> tuple[Fraction, ...]:
    """Weights for an identity-permutation map with singular orbit lengths ``lengths``.

    Index j with length N gets a_j = (N - 1)/N.  The remaining weights are
    drawn at random from small halves (small coefficients keep the oracle
    cheap) so that their orbits are nonsingular and the total is 2.
    """
    n = d + 1
    free = [j for j in range(n) if j not in lengths]
    if not free:
        raise ValueError("at least one index must stay nonsingular to balance the weights")
    fixed = {j: Fraction(N - 1, N) for j, N in lengths.items()}
    spec_ok = False
    a: list[Fraction] = []
    for _ in range(1000):
        a = [Fraction(0)] * n
        for j, v in fixed.items():
            a[j] = v
        for j in free[:-1]:
            a[j] = Fraction(rng.randint(-6, 6), rng.choice([1, 2]))
        a[free[-1]] = 2 - sum(a[j] for j in range(n) if j != free[-1])
        spec = PermutationMapSpec(d, identity_permutation(d), a)
        if all(isinstance(analytic_orbit(spec, j, StartKind.ALPHA), AnalyticNonsingular) for j in free):
            try:
                build_L(spec)
            except ValueError:
                continue
            spec_ok = True
            break
    if not spec_ok:
        raise RuntimeError("could not balance the Noetherian weights")
    return tuple(a)


def noetherian_map(lengths: dict[int, int], d: int, seed: int = 0) -> PermutationMapSpec:
    rng = random.Random(seed)
    return PermutationMapSpec(d, identity_permutation(d), noetherian_weights(lengths, d, rng))


def random_structure(
    rng: random.Random,
    max_lists: int = 4,
    max_len: int = 9,
    max_list_size: int = 3,
    allow_open: bool = True,
    d: Optional[int] = None,
) -> OrbitListStructure:
    n_lists = rng.randint(0, max_lists)
    closed, opened = [], []
    for _ in range(n_lists):
        lst = tuple(rng.randint(1, max_len) for _ in range(rng.randint(1, max_list_size)))
        if allow_open and rng.random() < 0.4:
            opened.append(lst)
        else:
            closed.append(lst)
    return OrbitListStructure(tuple(closed), tuple(opened), d)


def random_noetherian_lengths(rng: random.Random, d: int, max_len: int = 9) -> list[int]:
    """Lengths of closed singleton lists, at most d of them."""
    k = rng.randint(1, d)
    return [rng.randint(1, max_len) for _ in range(k)]
