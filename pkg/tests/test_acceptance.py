"""One test group per acceptance criterion; each prints a PASS or FAIL line.

The lines are collected by ``conftest.record`` and repeated in the terminal
summary.  Parts that cannot be met with the printed fixtures are marked
xfail(strict=True): they run, fail, and report FAIL with what was observed.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from birdeg.birmap import NotElementary, OrbitListStructure, build_orbit_structure
from birdeg.cohomology import degree_sequence, f_star_matrix, j_star_matrix
from birdeg.exactmath import (
    RatMatrix,
    UniPoly,
    X,
    charpoly,
    check_recursion,
    compare_roots,
    count_real_roots_in,
    generating_denominator,
    generating_numerator,
    largest_real_root,
    minimal_period,
    monic_generating_denominator,
    second_differences,
    series_coefficients,
    zero_eigenvalue_order,
)
from birdeg.fixtures import (
    A1,
    A2,
    A3,
    B1,
    B2,
    C_sym,
    three_generation_map,
    noetherian_map,
    random_noetherian_lengths,
    random_structure,
)
from birdeg.listformula import (
    ListKind,
    Relation,
    add_list,
    charpoly_formula,
    compare_deltas,
    delta_of_structure,
    detect_special_case,
    limit_structure,
    move_open_to_closed,
    noetherian_charpoly,
    noetherian_structure,
    order_holds,
    predicted_order,
    reduced_dimension,
    split_unit_list,
    structure_relations,
    t_s_polys,
    unit_cycle_bound,
)
from birdeg.oracle import DEGREE_CAP, generic_line_degree
from birdeg.permchain import build_chains, build_L, chain_pullback_matrix, diagonal_identity_holds
from conftest import record

GOLDEN = (1 + math.sqrt(5)) / 2
TOL = 1e-9


def _structure(closed=(), opened=(), d=2) -> OrbitListStructure:
    return OrbitListStructure(tuple(closed), tuple(opened), d)


def _matrix_period(M: RatMatrix, k_max: int = 24):
    """Smallest k with M^k = I, or None."""
    ident = RatMatrix.identity(M.rows)
    P = ident
    for k in range(1, k_max + 1):
        P = P @ M
        if P == ident:
            return k
    return None


def _near(root, value: float, tol: float = TOL) -> bool:
    r = root.refine(60)
    return abs(float(r.lo) - value) < tol and abs(float(r.hi) - value) < tol


def _analyze(spec):
    res = build_orbit_structure(spec)
    return res, f_star_matrix(res)


# ---------------------------------------------------------------------------
# 1. period-6 example


def test_c01_abstract_structure_has_period_six():
    s = _structure([(2,), (2,), (2,)])
    pm = f_star_matrix(s, 2)
    seq = degree_sequence(pm, 36)
    ok = pm.M.rows == 7 and _matrix_period(pm.M) == 6 and minimal_period(seq) == 6
    record(1, ok, f"abstract {{{{2}},{{2}},{{2}}}}: 7x7 M, M^6 = I, degrees {seq[:8]} period {minimal_period(seq)}")
    assert ok


@pytest.mark.xfail(strict=True, reason="printed A1/A2/A3 matrices do not give {{2},{2},{2}}; see notes")
def test_c01_printed_fixtures():
    target = _structure([(2,), (2,), (2,)])
    observed = {}
    ok = True
    for spec in (A1(), A2(2), A3(1)):
        try:
            found = build_orbit_structure(spec).structure
            observed[spec.name] = str(found)
            ok &= found == target
        except NotElementary as exc:
            observed[spec.name] = f"not elementary ({exc})"
            ok = False
    record(1, ok, f"printed fixtures give {observed}")
    assert ok


# ---------------------------------------------------------------------------
# 2. golden mean examples


def _strip_trivial(chi: UniPoly) -> UniPoly:
    """Remove factors x and every cyclotomic factor x^m - 1 (m <= 12) divides."""
    p = UniPoly(chi.coeffs[chi.x_adic_valuation():])
    for m in range(12, 0, -1):
        cyc = UniPoly.monomial(m) - 1
        while True:
            g = p.gcd(cyc)
            if g.degree < 1:
                break
            p = p.exact_div(g)
    return p.monic()


def _golden_check(spec):
    res, pm = _analyze(spec)
    chi = pm.charpoly()
    delta = largest_real_root(chi)
    ok = (
        res.structure == _structure([(2,)])
        and _near(delta, GOLDEN)
        and _strip_trivial(chi) == X * X - X - 1
    )
    return ok, f"{spec.name}: {res.structure}, chi = {chi.to_text()}, delta = {delta.decimal(12)}"


def test_c02_b2_golden():
    ok, detail = _golden_check(B2())
    record(2, ok, detail)
    assert ok


@pytest.mark.xfail(strict=True, reason="printed B1 has a length-3 orbit, structure {{3}}; see notes")
def test_c02_b1_golden():
    ok, detail = _golden_check(B1())
    record(2, ok, detail)
    assert ok


# ---------------------------------------------------------------------------
# 3. q = -1 and q = 1


@pytest.mark.parametrize(
    "q, expected, mat_period",
    [(-1, _structure([(2,), (1,), (1,)]), 3), (1, _structure([(2,), (1, 1)]), 6)],
)
def test_c03_elementary_cases(q, expected, mat_period):
    res, pm = _analyze(C_sym(q))
    seq = degree_sequence(pm, 40)
    k = _matrix_period(pm.M)
    ok = res.structure == expected and k == mat_period
    record(
        3,
        ok,
        f"q={q}: {res.structure}, M^{k} = I (minimal), degrees {seq[:7]} (sequence period {minimal_period(seq)})",
    )
    assert ok


# ---------------------------------------------------------------------------
# 4. worked open list


def test_c04_open_list_polys():
    polys = t_s_polys((7, 10, 8), ListKind.OPEN)
    S = UniPoly.from_ints([1] + [0] * 6 + [1, 1] + [0] * 6 + [1, 0, 1, 1])
    ok = polys.T == UniPoly.monomial(25) and polys.S == S
    record(4, ok, f"T = {polys.T.to_text()}, S = {polys.S.to_text()}")
    assert ok


# ---------------------------------------------------------------------------
# 5. {{2},{n},{n}} family


@pytest.mark.parametrize("n", [6, 8, 10])
def test_c05_family(n):
    chi = charpoly_formula(_structure([(2,), (n,), (n,)]), 2)
    ref = UniPoly.monomial(n + 2) - UniPoly.monomial(n + 1) - UniPoly.monomial(n) + X * X + X - 1
    r1, r2 = largest_real_root(chi), largest_real_root(ref)
    ok = compare_roots(r1, r2) == 0 and abs(r1.refine(60).value - r2.refine(60).value) < TOL
    record(5, ok, f"n={n}: delta = {r1.decimal(12)}, reference root {r2.decimal(12)}")
    assert ok


# ---------------------------------------------------------------------------
# 6. formula against matrix


def test_c06_formula_matches_matrix():
    rng = random.Random(6)
    bad = []
    count = 0
    while count < 200:
        d = rng.randint(2, 6)
        s = random_structure(rng, max_lists=4, max_len=9, d=d)
        count += 1
        if charpoly(f_star_matrix(s, d).M) != charpoly_formula(s, d):
            bad.append((str(s), d))
    ok = not bad
    record(6, ok, f"{count} seeded structures, mismatches: {bad[:3]}")
    assert ok


# ---------------------------------------------------------------------------
# 7. oracle


def _oracle_vs_cohomology(L, pm, n, label):
    coh = degree_sequence(pm, n)
    # generic_line_degree runs two seeds and raises if they differ
    orc = generic_line_degree(L, n, seed=7)
    return orc == coh, f"{label}: oracle {orc} (two seeds) vs cohomology {coh}"


@pytest.mark.parametrize("name", ["B1", "Csym(1)"])
def test_c07_fixtures(name):
    spec = {"B1": B1, "Csym(1)": lambda: C_sym(1)}[name]()
    _, pm = _analyze(spec)
    ok, detail = _oracle_vs_cohomology(spec, pm, 8, name)
    record(7, ok, detail)
    assert ok


def test_c07_noetherian_d3():
    spec = noetherian_map({0: 2}, 3, seed=0)
    assert spec.a[0] == Fraction(1, 2)
    pm = chain_pullback_matrix(build_chains(spec))
    a = ",".join(str(v) for v in spec.a)
    ok, detail = _oracle_vs_cohomology(build_L(spec), pm, 8, f"Noetherian d=3 a=({a})")
    record(7, ok, detail)
    assert ok


def test_c07_three_generation_within_cap():
    spec = three_generation_map()
    pm = chain_pullback_matrix(build_chains(spec))
    ok, detail = _oracle_vs_cohomology(build_L(spec), pm, 3, "three-generation map n<=3")
    record(7, ok, detail)
    assert ok


@pytest.mark.xfail(strict=True, reason="three-generation map degrees pass the oracle degree cap at n=4; see notes")
def test_c07_three_generation_to_six():
    coh = degree_sequence(chain_pullback_matrix(build_chains(three_generation_map())), 6)
    ok = max(coh) <= DEGREE_CAP
    record(7, ok, f"three-generation map n<=6: cohomology degrees {coh} exceed the oracle cap {DEGREE_CAP}")
    assert ok


@pytest.mark.xfail(strict=True, reason="printed A1 is not elementary, so there is no cohomology sequence")
def test_c07_a1():
    orc = generic_line_degree(A1(), 8, seed=7)
    try:
        _, pm = _analyze(A1())
        coh = degree_sequence(pm, 8)
    except NotElementary as exc:
        coh = None
        why = str(exc)
    ok = coh is not None and coh == orc
    record(7, ok, f"A1: oracle {orc}, cohomology unavailable ({why})" if coh is None else f"A1: {orc} vs {coh}")
    assert ok


# ---------------------------------------------------------------------------
# 8. J* involution


def test_c08_j_star_involution():
    ok = all((lambda M: M @ M == RatMatrix.identity(M.rows))(j_star_matrix(d).M) for d in range(2, 9))
    record(8, ok, "J*^2 = I for d = 2..8")
    assert ok


# ---------------------------------------------------------------------------
# 9. linear growth cases


def test_c09_case_a():
    ok = True
    for d in range(3, 8):
        lengths = [1] * (d - 1)
        seq = degree_sequence(f_star_matrix(noetherian_structure(d, lengths), d), 30)
        ok &= seq == [(d - 1) * n + 1 for n in range(31)]
    record(9, ok, "case a: d_n = (d-1)n + 1 for n <= 30, d = 3..7")
    assert ok


def test_c09_case_b():
    ok = True
    for d in range(2, 7):
        for nk in (1, 2, 3, 5, 8):
            M = f_star_matrix(noetherian_structure(d, [1] * (d - 1) + [nk]), d).M
            P = M**nk
            Q = P
            for _ in range(nk, nk + 8):
                Q = Q @ M
                ok &= Q == P
    record(9, ok, "case b: M^n = M^{N_k} for N_k <= n <= N_k + 8, d = 2..6, N_k in {1,2,3,5,8}")
    assert ok


def test_c09_case_c():
    ok = True
    for d in range(2, 7):
        pm = f_star_matrix(noetherian_structure(d, [1] * (d - 2) + [2, 2]), d)
        seq = degree_sequence(pm, 40)
        even, odd = seq[0::2], seq[1::2]
        # the zero eigenvalue only touches d_0, so the even terms are affine from d_2 on
        ok &= all(v == 0 for v in second_differences(even[1:])) and all(v == 0 for v in second_differences(odd))
        ok &= pm.charpoly() == X * (X + 1) * (X - 1) ** (d + 1)
    record(9, ok, "case c: even (from n=2) and odd subsequences have zero second differences, d = 2..6")
    assert ok


# ---------------------------------------------------------------------------
# 10 and 11. Noetherian bounds


def _noetherian_samples(seed: int, count: int, min_dbar: int = 0):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(2, 7)
        lengths = random_noetherian_lengths(rng, d)
        if detect_special_case(d, lengths) or reduced_dimension(d, lengths) < min_dbar:
            continue
        out.append((d, lengths))
    return out


def test_c10_bounds():
    bad = []
    samples = _noetherian_samples(10, 150)
    for d, lengths in samples:
        chi = noetherian_charpoly(d, lengths)
        r = largest_real_root(chi)
        dbar = reduced_dimension(d, lengths)
        if not (1 < r.lo and r.hi < d and dbar - 1 <= r.lo and r.hi <= dbar and chi(Fraction(d)) > 0):
            bad.append((d, lengths))
    ok = not bad
    record(10, ok, f"{len(samples)} structures with 1..d orbits outside the linear cases, violations {bad[:3]}")
    assert ok


def test_c11_unique_simple_root():
    bad = []
    samples = _noetherian_samples(11, 120, min_dbar=3)
    for d, lengths in samples:
        chi = noetherian_charpoly(d, lengths)
        g = chi.gcd(chi.derivative())
        multiple = g.degree > 0 and count_real_roots_in(g, 2, d) > 0
        if count_real_roots_in(chi, 2, d) != 1 or multiple:
            bad.append((d, lengths))
    ok = not bad
    record(11, ok, f"{len(samples)} structures with d-bar >= 3: one simple root in (2, d], violations {bad[:3]}")
    assert ok


# ---------------------------------------------------------------------------
# 12. comparison theorems


def _dim_for(rng, *structures) -> int:
    need = max(s.orbit_count for s in structures) - 1
    base = max(2, need)
    return rng.randint(base, base + 3)


def _is_one(s, d) -> bool:
    return compare_roots(delta_of_structure(s, d), largest_real_root(X - 1)) == 0


def _lengthen(rng, s):
    def grow(lst):
        return tuple(v + rng.choice((0, 0, 1, 2, 5)) for v in lst)

    t = OrbitListStructure(tuple(grow(l) for l in s.closed), tuple(grow(l) for l in s.open))
    if t == s:
        lst = list(s.closed[0])
        lst[0] += 1
        t = OrbitListStructure((tuple(lst),) + s.closed[1:], s.open)
    return t


def _nonempty(rng, **kw):
    while True:
        s = random_structure(rng, max_lists=3, max_len=7, **kw)
        if not s.is_empty:
            return s


def test_c12_longer_orbits():
    rng = random.Random(121)
    bad = []
    for _ in range(200):
        s1 = _nonempty(rng, allow_open=False) if rng.random() < 0.5 else _nonempty(rng)
        if not s1.closed:
            s1 = add_list(s1, (1,), ListKind.CLOSED)
        s2 = _lengthen(rng, s1)
        d = _dim_for(rng, s1, s2)
        sign = compare_deltas(s1, s2, d)
        strict = not _is_one(s1, d)
        ok = sign > 0 if strict else sign >= 0
        ok &= Relation.LONGER_ORBITS in structure_relations(s1, s2)
        ok &= order_holds(sign, predicted_order(Relation.LONGER_ORBITS, s1, d))
        if not ok:
            bad.append((str(s1), str(s2), d))
    record(12, not bad, f"longer orbits: 200 pairs, delta non-decreasing and strict when delta > 1, violations {bad[:2]}")
    assert not bad


def test_c12_added_list():
    rng = random.Random(123)
    bad = []
    for _ in range(200):
        s1 = _nonempty(rng)
        kind = rng.choice([ListKind.CLOSED, ListKind.OPEN])
        s2 = add_list(s1, [rng.randint(1, 7) for _ in range(rng.randint(1, 3))], kind)
        d = _dim_for(rng, s1, s2)
        sign = compare_deltas(s1, s2, d)
        ok = sign <= 0 and Relation.ADDED_LIST in structure_relations(s1, s2)
        if not ok:
            bad.append((str(s1), str(s2), d))
    record(12, not bad, f"added list: 200 pairs, delta non-increasing, violations {bad[:2]}")
    assert not bad


def test_c12_open_to_closed():
    rng = random.Random(125)
    bad = []
    for _ in range(200):
        s1 = _nonempty(rng)
        if not s1.open:
            s1 = add_list(s1, [rng.randint(1, 7) for _ in range(rng.randint(1, 3))], ListKind.OPEN)
        s2 = move_open_to_closed(s1, rng.randrange(len(s1.open)))
        d = _dim_for(rng, s1, s2)
        sign = compare_deltas(s1, s2, d)
        strict = not _is_one(s1, d)
        ok = sign < 0 if strict else sign <= 0
        ok &= Relation.OPEN_TO_CLOSED in structure_relations(s1, s2)
        if not ok:
            bad.append((str(s1), str(s2), d))
    record(12, not bad, f"open list closed up: 200 pairs, delta non-increasing and strict unless delta = 1, violations {bad[:2]}")
    assert not bad


def _unit_split_pairs(seed: int, count: int = 200):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 6)
        s1 = add_list(random_structure(rng, max_lists=2, max_len=7), (1,) * n, ListKind.CLOSED)
        s2 = split_unit_list(s1, len(s1.closed) - 1)
        out.append((n, s1, s2, _dim_for(rng, s1, s2)))
    return out


def test_c12_split_unit_list():
    bad = []
    for n, s1, s2, d in _unit_split_pairs(126):
        sign = compare_deltas(s1, s2, d)
        ok = sign >= 0 and Relation.SPLIT_UNITS in structure_relations(s1, s2)
        ok &= order_holds(sign, predicted_order(Relation.SPLIT_UNITS, s1, d))
        if not ok:
            bad.append((str(s1), str(s2), d))
    record(12, not bad, f"unit list split: 200 pairs, delta non-decreasing, violations {bad[:2]}")
    assert not bad


@pytest.mark.xfail(strict=True, reason="splitting a unit list leaves delta unchanged; see notes")
def test_c12_split_unit_list_strict():
    pairs = [(n, s1, s2, d) for n, s1, s2, d in _unit_split_pairs(126) if n >= 4]
    equal = [(str(s1), d) for n, s1, s2, d in pairs if compare_deltas(s1, s2, d) == 0]
    ok = not equal
    record(12, ok, f"unit list split with n >= 4 strict: {len(equal)} of {len(pairs)} pairs have equal delta, e.g. {equal[:2]}")
    assert ok


def test_c12_unit_cycle_lower_bound():
    rng = random.Random(127)
    bad = []
    for _ in range(200):
        s = _nonempty(rng)
        low = unit_cycle_bound(s)
        d = _dim_for(rng, s)
        if compare_deltas(low, s, d) < 0:
            bad.append((str(s), d))
    record(12, not bad, f"unit-cycle lower bound: 200 structures, violations {bad[:2]}")
    assert not bad


def test_c12_limit_convergence():
    rng = random.Random(122)
    bad = []
    done = 0
    while done < 10:
        s = _nonempty(rng, max_list_size=3)
        d = _dim_for(rng, s) + 1
        if _is_one(s, d):
            continue
        kind = ListKind.CLOSED if s.closed and (not s.open or rng.random() < 0.5) else ListKind.OPEN
        lists = s.closed if kind is ListKind.CLOSED else s.open
        list_no = rng.randrange(len(lists))
        pos = rng.randint(1, len(lists[list_no]))
        target = delta_of_structure(limit_structure(s, kind, list_no, pos), d).refine(80).value
        errors = []
        for N in (10, 20, 40, 80):
            lst = list(lists[list_no])
            lst[pos - 1] = N
            new = tuple(lists[:list_no]) + (tuple(lst),) + tuple(lists[list_no + 1:])
            t = OrbitListStructure(new, s.open) if kind is ListKind.CLOSED else OrbitListStructure(s.closed, new)
            errors.append(abs(delta_of_structure(t, d).refine(80).value - target))
        # errors shrink and the last one is small
        if not (all(b <= a for a, b in zip(errors, errors[1:])) and errors[-1] < 1e-6):
            bad.append((str(s), kind.value, list_no, pos, errors))
        done += 1
    record(12, not bad, f"limit as one orbit grows: N = 10, 20, 40, 80 on 10 structures, violations {bad[:1]}")
    assert not bad


# ---------------------------------------------------------------------------
# 13. chains of the three-generation map and the diagonal identity


def test_c13_three_generation_chains():
    chains = build_chains(three_generation_map())
    counts = {g: len(chains.generation(g)) for g in range(1, chains.max_generation + 1)}
    heights_ok = all(chains.membership_count(p) == h for p, h in chains.heights.items())
    ok = counts == {1: 2, 2: 1, 3: 1} and heights_ok
    record(13, ok, f"three-generation chain counts by generation {counts}, heights = membership counts: {heights_ok}")
    assert ok


def test_c13_diagonal_identity():
    rng = random.Random(13)
    specs = [three_generation_map(), noetherian_map({0: 2}, 3, seed=0), noetherian_map({1: 3, 2: 1}, 4, seed=1)]
    bad = 0
    for spec in specs:
        for _ in range(100):
            j = rng.randrange(spec.dim + 1)
            c = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
            if c == 0:
                c = Fraction(1, 3)
            bad += not diagonal_identity_holds(spec, j, c)
    record(13, bad == 0, f"diagonal identity on 100 random (j, c) per map for {len(specs)} maps, failures {bad}")
    assert bad == 0


# ---------------------------------------------------------------------------
# 14. recursion and generating function


def _produced_matrices():
    out = {"B2": _analyze(B2())[1], "B1": _analyze(B1())[1], "Csym(1)": _analyze(C_sym(1))[1]}
    out["Csym(-1)"] = _analyze(C_sym(-1))[1]
    out["three-generation"] = chain_pullback_matrix(build_chains(three_generation_map()))
    out["Noetherian d=3"] = chain_pullback_matrix(build_chains(noetherian_map({0: 2}, 3, seed=0)))
    rng = random.Random(14)
    for k in range(20):
        s = random_structure(rng)
        # a map of P^d has at most d + 1 singular orbits
        d = max(rng.randint(2, 6), s.orbit_count - 1)
        out[f"random#{k}"] = f_star_matrix(s, d)
    return out


def test_c14_recursion_and_generating_function():
    bad = []
    produced = _produced_matrices()
    for name, pm in produced.items():
        chi = pm.charpoly()
        n = chi.degree
        seq = degree_sequence(pm, 2 * n + 10)
        k = zero_eigenvalue_order(chi)
        q = generating_denominator(chi, strip_zero=k > 0)
        core = UniPoly(chi.coeffs[k:])
        reversed_core = core.reversed()
        p = generating_numerator(seq, q, k)
        ok = (
            check_recursion(seq, chi)
            and q.coeff(0) == 1
            and q == reversed_core
            and monic_generating_denominator(chi, strip_zero=k > 0) * core.coeff(0) == reversed_core
            and series_coefficients(p, q, len(seq))[k:] == [Fraction(v) for v in seq][k:]
        )
        if not ok:
            bad.append(name)
    count = len(produced)
    record(14, not bad, f"{count} degree sequences: recursion, q(0) = 1, q chi(0) identity, p/q series; failures {bad}")
    assert not bad
