from __future__ import annotations

import random

import pytest

from birdeg.birmap import OrbitListStructure, build_orbit_structure
from birdeg.cohomology import (
    ListIndexData,
    StructureError,
    degree_sequence,
    dynamical_degree,
    f_star_matrix,
    j_star_matrix,
)
from birdeg.exactmath import RatMatrix
from birdeg.fixtures import B2, C_sym, random_structure
from birdeg.listformula import charpoly_formula


def test_empty_structure_gives_pure_powers():
    pm = f_star_matrix(OrbitListStructure((), (), 3))
    assert degree_sequence(pm, 5) == [1, 3, 9, 27, 81, 243]


def test_j_star_is_an_involution():
    for d in (2, 5):
        M = j_star_matrix(d).M
        assert M @ M == RatMatrix.identity(d + 2)


def test_map_and_structure_give_same_matrix_spectrum():
    res = build_orbit_structure(C_sym(1))
    a = f_star_matrix(res)
    b = f_star_matrix(res.structure, 2)
    assert a.charpoly() == b.charpoly() == charpoly_formula(res.structure, 2)
    assert degree_sequence(a, 12) == degree_sequence(b, 12)


def test_golden_sequence_and_basis():
    pm = f_star_matrix(build_orbit_structure(B2()))
    assert degree_sequence(pm, 7) == [1, 2, 4, 7, 12, 20, 33, 54]
    assert pm.basis.names()[0] == "H" and len(pm.basis) == 3
    assert dynamical_degree(pm).decimal(6) == "1.618034"


def test_basis_order_closed_then_open_fibers_backward():
    pm = f_star_matrix(OrbitListStructure(((2,),), ((1,),), 2))
    labels = pm.basis.labels
    assert [lab.kind for lab in labels[1:]] == ["closed", "closed", "open"]
    assert [lab.step for lab in labels[1:3]] == [1, 0]


def test_invalid_index_data():
    with pytest.raises(StructureError):
        f_star_matrix(ListIndexData(((0, 1),), ((1,),), {0: 1, 1: 2}, 3))
    with pytest.raises(StructureError):
        f_star_matrix(OrbitListStructure(((1,),)))
    with pytest.raises(StructureError):
        f_star_matrix(OrbitListStructure(((1,),)), 1)
    with pytest.raises(ValueError):
        j_star_matrix(1)


def test_random_structures_have_integer_column_sums_of_h_row():
    rng = random.Random(3)
    for _ in range(30):
        s = random_structure(rng)
        d = max(2, s.orbit_count - 1)
        pm = f_star_matrix(s, d)
        # H pulls back to d H minus the exceptional classes: first column top entry is d
        assert pm.M[0, 0] == d
        assert all(v >= 1 for v in degree_sequence(pm, 6))
