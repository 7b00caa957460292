import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import catalog, simple_upto
from polytope_rigidity.errors import InvalidInput, NonCubic, NonSpherical, ValidationError
from polytope_rigidity.polytope import (canonical_code, dual_complex, f_vector, from_face_cycles,
                                        from_json, h_vector, is_isomorphic, medial,
                                        cut_4_valent_vertices, n2_pairs, bits)

CUBE_CYCLES = [[1, 2, 3, 4], [0, 4, 5, 2], [0, 1, 5, 3], [0, 2, 5, 4], [0, 3, 5, 1], [1, 4, 3, 2]]


def random_perm(m, seed):
    perm = list(range(m))
    random.Random(seed).shuffle(perm)
    return perm


def test_cube_from_cycles():
    P = from_face_cycles(CUBE_CYCLES)
    assert f_vector(P) == (8, 12, 6)
    assert P.face_sizes == (4,) * 6
    assert is_isomorphic(P, catalog("cube"))


def test_mixed_orientations_are_reoriented():
    cycles = [list(c) for c in CUBE_CYCLES]
    cycles[3].reverse()
    cycles[5].reverse()
    assert is_isomorphic(from_face_cycles(cycles), catalog("cube"))


@pytest.mark.parametrize("cycles, error", [
    ([[1, 2], [0, 2], [0, 1]], NonSpherical),
    ([[1, 2], [0, 2, 3], [0, 1, 3], [1, 2]], NonCubic),
    ([[1, 2, 9], [0, 2, 3], [0, 1, 3], [0, 1, 2]], InvalidInput),
    ([["a", 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]], InvalidInput),
])
def test_invalid_rotation_systems(cycles, error):
    with pytest.raises(error):
        from_face_cycles(cycles)


def test_inconsistent_rotation_rejected():
    cycles = [list(c) for c in CUBE_CYCLES]
    cycles[1] = [0, 5, 4, 2]
    with pytest.raises(ValidationError):
        from_face_cycles(cycles)


def test_json_round_trip_and_m_check():
    P = catalog("as3")
    Q = from_json(P.to_json())
    assert Q == P
    bad = json.loads(P.to_json())
    bad["m"] = 3
    with pytest.raises(InvalidInput):
        from_json(bad)
    with pytest.raises(InvalidInput):
        from_json({"nofaces": []})


@pytest.mark.parametrize("name", ["simplex", "cube", "as3", "p8", "pe3", "prism:7", "barrel:5"])
def test_euler_and_dual_sphere(name):
    P = catalog(name)
    f0, f1, f2 = f_vector(P)
    assert f0 - f1 + f2 == 2
    assert 2 * f1 == 3 * f0
    D = dual_complex(P)
    assert D.euler_characteristic() == 2
    assert D.is_2_sphere()


def test_h_vector_symmetric():
    for P in simple_upto(8):
        h = h_vector(P)
        assert h == h[::-1]
        assert h[0] == 1 and h[1] == P.m - 3


def test_n2_pairs_are_disjoint_pairs():
    P = catalog("as3")
    pairs = n2_pairs(P)
    assert len(pairs) == 15
    for w in pairs:
        i, j = bits(w)
        assert not P.adjacent(i, j)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["as3", "p8", "m6xi", "pe3", "barrel:5", "prism:5"]),
       st.integers(0, 10 ** 6), st.booleans())
def test_canonical_code_invariant(name, seed, mirror):
    P = catalog(name)
    Q = P.relabel(random_perm(P.m, seed))
    if mirror:
        Q = Q.mirror()
    assert canonical_code(Q) == canonical_code(P)


def test_codes_separate_distinct_polytopes():
    polys = simple_upto(9)
    assert len({P.code for P in polys}) == len(polys)


def test_medial_cut_round_trip():
    # cutting the 4-valent vertices of a medial graph gives a simple polytope
    # whose faces are the old faces, old vertices and one face per edge
    P = catalog("cube")
    Q = cut_4_valent_vertices(medial(P))
    assert Q.m == 6 + 8 + 12
